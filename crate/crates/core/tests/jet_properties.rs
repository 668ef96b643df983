//! Property tests for the jet arithmetic: truncated products against
//! brute-force polynomial multiplication (exact mode) and composition
//! against central finite differences.

use num_complex::Complex64;
use proptest::prelude::*;
use starrest::jet::Jet;
use starrest::scalar::{GaussRational, Scalar};

type R = GaussRational;

fn exponents(nvars: usize, order: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    fn rec(nvars: usize, left: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    rec(nvars, order as u8, &mut Vec::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_product_matches_brute_force(
        nvars in 1usize..=3,
        order in 1usize..=6,
        seed_a in proptest::collection::vec(-9i64..=9, 64),
        seed_b in proptest::collection::vec(-9i64..=9, 64),
    ) {
        let exps = exponents(nvars, order);
        let mut a: Jet<R> = Jet::zero(nvars, order);
        let mut b: Jet<R> = Jet::zero(nvars, order);
        for (k, e) in exps.iter().enumerate() {
            a.set_coeff(e, R::from_int(seed_a[k % seed_a.len()]));
            b.set_coeff(e, R::from_int(seed_b[(k * 7 + 3) % seed_b.len()]));
        }
        let prod = a.mul(&b).unwrap();
        // brute force convolution over all exponent pairs
        for e in &exps {
            let mut acc = R::from_int(0);
            for ea in &exps {
                if ea.iter().zip(e.iter()).all(|(x, y)| x <= y) {
                    let eb: Vec<u8> = e.iter().zip(ea.iter()).map(|(y, x)| y - x).collect();
                    acc = acc + a.coeff(ea) * b.coeff(&eb);
                }
            }
            prop_assert_eq!(prod.coeff(e), acc);
        }
    }

    #[test]
    fn composition_matches_finite_differences(
        c1 in -50i32..=50,
        c2 in -50i32..=50,
        d1 in -50i32..=50,
        d2 in -50i32..=50,
    ) {
        // outer f(u) = exp(u), inner g(z) = c1 z + c2 z^2 + d1 z^3 + d2 z^4
        // (scaled small); compare jet composition with central differences
        type C = Complex64;
        let k = 4usize;
        let cs = [
            0.0,
            c1 as f64 / 100.0,
            c2 as f64 / 100.0,
            d1 as f64 / 100.0,
            d2 as f64 / 100.0,
        ];
        let f = |z: f64| -> f64 {
            let g = cs[1] * z + cs[2] * z * z + cs[3] * z.powi(3) + cs[4] * z.powi(4);
            g.exp()
        };
        let mut inner: Jet<C> = Jet::zero(1, k);
        for (j, c) in cs.iter().enumerate().take(k + 1) {
            inner.set_coeff(&[j as u8], C::new(*c, 0.0));
        }
        let outer = Jet::from_taylor1(
            k,
            &[
                C::new(1.0, 0.0),
                C::new(1.0, 0.0),
                C::new(0.5, 0.0),
                C::new(1.0 / 6.0, 0.0),
                C::new(1.0 / 24.0, 0.0),
            ],
        );
        let comp = outer.compose_raw(&[inner]).unwrap();
        // central differences of f at 0 up to order 4, one Richardson step
        let fd_at = |h: f64| -> [f64; 5] {
            let stencil: Vec<f64> = (-4..=4).map(|i| f(i as f64 * h)).collect();
            let at = |i: i64| stencil[(i + 4) as usize];
            [
                at(0),
                (at(1) - at(-1)) / (2.0 * h),
                (at(1) - 2.0 * at(0) + at(-1)) / (h * h),
                (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h * h * h),
                (at(2) - 4.0 * at(1) + 6.0 * at(0) - 4.0 * at(-1) + at(-2)) / h.powi(4),
            ]
        };
        let h = 2e-2;
        let (c_h, c_h2) = (fd_at(h), fd_at(h / 2.0));
        let mut fact = 1.0;
        for j in 0..=k {
            if j > 0 {
                fact *= j as f64;
            }
            let fd = (4.0 * c_h2[j] - c_h[j]) / 3.0;
            let jet_deriv = comp.coeff(&[j as u8]).to_c64().re * fact;
            prop_assert!(
                (jet_deriv - fd).abs() <= 1e-6 * fd.abs().max(1.0),
                "order {}: jet {} vs fd {}",
                j,
                jet_deriv,
                fd
            );
        }
    }
}
