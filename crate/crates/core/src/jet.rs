//! Truncated multivariate power-series ("jet") arithmetic.
//!
//! A [`Jet`] stores all coefficients of total order <= `order` in up to
//! four variables, densely, over either scalar mode. Wirtinger pairs are
//! handled by treating a coordinate and its conjugate as independent jet
//! variables; conjugation then conjugates coefficients and swaps the two
//! variables.
//!
//! Everything here is exact: products are truncated Cauchy products and
//! composition is the finite substitution of zero-constant inner jets,
//! so in rational mode coefficients are reproduced with no rounding.

use crate::error::JetError;
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::sync::Arc;

pub const MAX_VARS: usize = 4;

/// Exponent tuple, padded with zeros beyond the active variable count.
pub type Expt = [u8; MAX_VARS];

/// Multi-index split into holomorphic / antiholomorphic Wirtinger orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub holo: Vec<u8>,
    pub anti: Vec<u8>,
}

impl MultiIndex {
    pub fn holo1(k: u8) -> Self {
        MultiIndex {
            holo: vec![k],
            anti: vec![],
        }
    }
    /// One holomorphic and one antiholomorphic order on a single variable.
    pub fn wirtinger1(h: u8, a: u8) -> Self {
        MultiIndex {
            holo: vec![h],
            anti: vec![a],
        }
    }
    /// Holomorphic orders on the two slots of a pair-type domain.
    pub fn holo2(s1: u8, s2: u8) -> Self {
        MultiIndex {
            holo: vec![s1, s2],
            anti: vec![],
        }
    }
    /// Antiholomorphic orders on the two slots of a pair-type domain.
    pub fn anti2(s1: u8, s2: u8) -> Self {
        MultiIndex {
            holo: vec![],
            anti: vec![s1, s2],
        }
    }
    pub fn total(&self) -> usize {
        self.holo.iter().map(|&x| x as usize).sum::<usize>()
            + self.anti.iter().map(|&x| x as usize).sum::<usize>()
    }
}

/// Enumeration tables for all exponents with |e| <= order in nvars.
struct Shape {
    order: usize,
    exps: Vec<Expt>,
    /// dense rank lookup indexed by the radix-(order+1) flattening
    rank_table: Vec<u32>,
}

impl Shape {
    fn build(nvars: usize, order: usize) -> Shape {
        let mut exps = Vec::new();
        let mut cur = [0u8; MAX_VARS];
        // graded enumeration: all tuples with total <= order, ordered by total
        fn rec(nvars: usize, left: usize, pos: usize, cur: &mut Expt, out: &mut Vec<Expt>) {
            if pos == nvars {
                out.push(*cur);
                return;
            }
            for e in 0..=left {
                cur[pos] = e as u8;
                rec(nvars, left - e, pos + 1, cur, out);
            }
            cur[pos] = 0;
        }
        for total in 0..=order {
            let mut level = Vec::new();
            rec(nvars, total, 0, &mut cur, &mut level);
            level.retain(|e| e.iter().map(|&x| x as usize).sum::<usize>() == total);
            exps.extend(level);
        }
        let radix = order + 1;
        let mut rank_table = vec![u32::MAX; radix * radix * radix * radix];
        for (i, e) in exps.iter().enumerate() {
            rank_table[Shape::flat(e, radix)] = i as u32;
        }
        Shape {
            order,
            exps,
            rank_table,
        }
    }

    #[inline]
    fn flat(e: &Expt, radix: usize) -> usize {
        ((e[0] as usize * radix + e[1] as usize) * radix + e[2] as usize) * radix + e[3] as usize
    }

    #[inline]
    fn rank(&self, e: &Expt) -> usize {
        self.rank_table[Shape::flat(e, self.order + 1)] as usize
    }
}

thread_local! {
    static SHAPES_TL: std::cell::RefCell<HashMap<(usize, usize), Arc<Shape>>> =
        std::cell::RefCell::new(HashMap::new());
}

fn shape(nvars: usize, order: usize) -> Arc<Shape> {
    SHAPES_TL.with(|m| {
        m.borrow_mut()
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(Shape::build(nvars, order)))
            .clone()
    })
}

/// Dense truncated power series in `nvars` variables to total order `order`.
///
/// ```
/// use starrest::jet::Jet;
/// use starrest::scalar::GaussRational as R;
/// use starrest::scalar::Scalar;
/// let z: Jet<R> = Jet::variable(1, 4, 0);
/// let z2 = z.mul(&z).unwrap();
/// assert_eq!(z2.coeff(&[2]), R::one());
/// ```
#[derive(Clone)]
pub struct Jet<S: Scalar> {
    nvars: usize,
    order: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> std::fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sh = shape(self.nvars, self.order);
        write!(f, "Jet[{} vars, order {}]{{", self.nvars, self.order)?;
        for (i, e) in sh.exps.iter().enumerate() {
            if !self.coeffs[i].is_zero() {
                write!(f, " {:?}*u^{:?}", self.coeffs[i], &e[..self.nvars])?;
            }
        }
        write!(f, " }}")
    }
}

impl<S: Scalar> Jet<S> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_VARS);
        let n = shape(nvars, order).exps.len();
        Jet {
            nvars,
            order,
            coeffs: vec![S::zero(); n],
        }
    }

    pub fn constant(nvars: usize, order: usize, c: S) -> Self {
        let mut j = Jet::zero(nvars, order);
        j.coeffs[0] = c;
        j
    }

    /// The jet of the coordinate `var` (plus nothing else).
    pub fn variable(nvars: usize, order: usize, var: usize) -> Self {
        let mut j = Jet::zero(nvars, order);
        if order >= 1 {
            let mut e = [0u8; MAX_VARS];
            e[var] = 1;
            let r = shape(nvars, order).rank(&e);
            j.coeffs[r] = S::one();
        }
        j
    }

    /// Univariate jet from Taylor coefficients c_j (coefficient of u^j).
    pub fn from_taylor1(order: usize, taylor: &[S]) -> Self {
        let mut j = Jet::zero(1, order);
        for (k, c) in taylor.iter().enumerate().take(order + 1) {
            let mut e = [0u8; MAX_VARS];
            e[0] = k as u8;
            let r = shape(1, order).rank(&e);
            j.coeffs[r] = c.clone();
        }
        j
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, e: &[u8]) -> S {
        let mut key = [0u8; MAX_VARS];
        key[..e.len()].copy_from_slice(e);
        let total: usize = e.iter().map(|&x| x as usize).sum();
        if total > self.order {
            return S::zero();
        }
        let sh = shape(self.nvars, self.order);
        self.coeffs[sh.rank(&key)].clone()
    }

    pub fn set_coeff(&mut self, e: &[u8], c: S) {
        let mut key = [0u8; MAX_VARS];
        key[..e.len()].copy_from_slice(e);
        let sh = shape(self.nvars, self.order);
        let r = sh.rank(&key);
        self.coeffs[r] = c;
    }

    pub fn constant_term(&self) -> S {
        self.coeffs[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, o: &Self) -> Result<(), JetError> {
        if self.nvars != o.nvars || self.order != o.order {
            return Err(JetError::ShapeMismatch {
                left: (self.nvars, self.order),
                right: (o.nvars, o.order),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, JetError> {
        self.check_same(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, JetError> {
        self.check_same(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, o: &Self) -> Result<Self, JetError> {
        self.check_same(o)?;
        let sh = shape(self.nvars, self.order);
        let mut out = vec![S::zero(); sh.exps.len()];
        for (i, ei) in sh.exps.iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let di: usize = ei.iter().map(|&x| x as usize).sum();
            for (j, ej) in sh.exps.iter().enumerate() {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                let dj: usize = ej.iter().map(|&x| x as usize).sum();
                if di + dj > self.order {
                    continue;
                }
                let mut e = [0u8; MAX_VARS];
                for k in 0..MAX_VARS {
                    e[k] = ei[k] + ej[k];
                }
                let r = sh.rank(&e);
                out[r] = out[r].clone() + self.coeffs[i].clone() * o.coeffs[j].clone();
            }
        }
        Ok(Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs: out,
        })
    }

    pub fn pow(&self, k: usize) -> Result<Self, JetError> {
        let mut acc = Jet::constant(self.nvars, self.order, S::one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a jet with nonzero constant term.
    pub fn recip(&self) -> Result<Self, JetError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(JetError::NonInvertible);
        }
        let sh = shape(self.nvars, self.order);
        let inv0 = S::one() / a0;
        let mut out = vec![S::zero(); sh.exps.len()];
        out[0] = inv0.clone();
        // graded recursion: (a * r)_e = 0 for e != 0
        for (i, ei) in sh.exps.iter().enumerate().skip(1) {
            let mut s = S::zero();
            for (j, ej) in sh.exps.iter().enumerate().skip(1) {
                // a_{ej} * r_{ei - ej}
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let mut ok = true;
                let mut d = [0u8; MAX_VARS];
                for k in 0..MAX_VARS {
                    if ej[k] > ei[k] {
                        ok = false;
                        break;
                    }
                    d[k] = ei[k] - ej[k];
                }
                if !ok {
                    continue;
                }
                let r = sh.rank(&d);
                s = s + self.coeffs[j].clone() * out[r].clone();
            }
            out[i] = -(inv0.clone() * s);
        }
        Ok(Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs: out,
        })
    }

    /// Substitute var `i` -> c * var `i`.
    pub fn scale_var(&self, var: usize, c: &S) -> Self {
        let sh = shape(self.nvars, self.order);
        let mut powers = vec![S::one()];
        for _ in 1..=self.order {
            powers.push(powers.last().unwrap().clone() * c.clone());
        }
        let coeffs = sh
            .exps
            .iter()
            .zip(&self.coeffs)
            .map(|(e, a)| a.clone() * powers[e[var] as usize].clone())
            .collect();
        Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        }
    }

    /// Coefficient extraction in one variable: returns the jet (in the same
    /// variable slots, with `var` identically zero) of the coefficient of
    /// `var^power`.
    pub fn coeff_of(&self, var: usize, power: u8) -> Self {
        let sh = shape(self.nvars, self.order);
        let mut out = Jet::zero(self.nvars, self.order);
        for (i, e) in sh.exps.iter().enumerate() {
            if e[var] == power && !self.coeffs[i].is_zero() {
                let mut f = *e;
                f[var] = 0;
                let r = sh.rank(&f);
                out.coeffs[r] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// Wirtinger conjugation: conjugate all coefficients and swap variables
    /// `i` and `j` (a coordinate and its conjugate direction).
    pub fn conj_swap(&self, i: usize, j: usize) -> Self {
        let sh = shape(self.nvars, self.order);
        let mut out = Jet::zero(self.nvars, self.order);
        for (k, e) in sh.exps.iter().enumerate() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            let mut f = *e;
            f.swap(i, j);
            let r = sh.rank(&f);
            out.coeffs[r] = self.coeffs[k].conj();
        }
        out
    }

    /// Plain coefficient conjugation (real jet directions).
    pub fn conj(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.conj()).collect();
        Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        }
    }

    /// Derivative value d^e f(0) = e! * coeff(e).
    pub fn deriv(&self, e: &[u8]) -> S {
        let mut f = S::one();
        for &k in e {
            for q in 2..=(k as i64) {
                f = f * S::from_int(q);
            }
        }
        self.coeff(e) * f
    }

    /// Composition with zero-constant inner jets: self is a jet in m
    /// variables, `inners` are m jets in a common shape whose constant
    /// terms vanish.
    pub fn compose_raw(&self, inners: &[Jet<S>]) -> Result<Jet<S>, JetError> {
        if inners.len() != self.nvars {
            return Err(JetError::ArityMismatch {
                expected: self.nvars,
                got: inners.len(),
            });
        }
        let (n, k) = (inners[0].nvars, inners[0].order);
        for g in inners {
            if g.nvars != n || g.order != k {
                return Err(JetError::ShapeMismatch {
                    left: (n, k),
                    right: (g.nvars, g.order),
                });
            }
            if !g.constant_term().is_zero() {
                return Err(JetError::NonZeroInnerConstant);
            }
        }
        // precompute powers of each inner up to the outer order
        let mut powers: Vec<Vec<Jet<S>>> = Vec::with_capacity(self.nvars);
        for g in inners {
            let mut ps = vec![Jet::constant(n, k, S::one())];
            for p in 1..=self.order {
                ps.push(ps[p - 1].mul(g)?);
            }
            powers.push(ps);
        }
        let sh = shape(self.nvars, self.order);
        let mut out = Jet::zero(n, k);
        for (i, e) in sh.exps.iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let mut term = Jet::constant(n, k, self.coeffs[i].clone());
            for v in 0..self.nvars {
                if e[v] > 0 {
                    term = term.mul(&powers[v][e[v] as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Taylor-shift the jet to a new center: returns the jet of
    /// u -> f(c + u) truncated at the same order. The stored truncation is
    /// what gets shifted, hence shifts must stay inside the convergence-safe
    /// radius 0.5 (checked on the float view).
    pub fn recenter(&self, shifts: &[S]) -> Result<Jet<S>, JetError> {
        if shifts.len() != self.nvars {
            return Err(JetError::ArityMismatch {
                expected: self.nvars,
                got: shifts.len(),
            });
        }
        for c in shifts {
            if c.to_c64().norm() >= 0.5 {
                return Err(JetError::ShiftRadius(c.to_c64().norm()));
            }
        }
        let sh = shape(self.nvars, self.order);
        let mut out = Jet::zero(self.nvars, self.order);
        // out_a = sum_{b >= a} C(b,a) f_b c^{b-a}
        for (ia, ea) in sh.exps.iter().enumerate() {
            let mut acc = S::zero();
            for (ib, eb) in sh.exps.iter().enumerate() {
                if self.coeffs[ib].is_zero() {
                    continue;
                }
                let mut ok = true;
                for v in 0..self.nvars {
                    if eb[v] < ea[v] {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let mut w = self.coeffs[ib].clone();
                for v in 0..self.nvars {
                    let (b, a) = (eb[v] as i64, ea[v] as i64);
                    w = w * S::from_int(binom_i64(b, a));
                    for _ in 0..(b - a) {
                        w = w * shifts[v].clone();
                    }
                }
                acc = acc + w;
            }
            out.coeffs[ia] = acc;
        }
        Ok(out)
    }

    /// Composition with recentering: inner constant terms are absorbed by
    /// Taylor-shifting the outer jet first.
    pub fn compose(&self, inners: &[Jet<S>]) -> Result<Jet<S>, JetError> {
        let consts: Vec<S> = inners.iter().map(|g| g.constant_term()).collect();
        let (outer, centered): (Jet<S>, Vec<Jet<S>>) = if consts.iter().all(|c| c.is_zero()) {
            (self.clone(), inners.to_vec())
        } else {
            let shifted = self.recenter(&consts)?;
            let centered = inners
                .iter()
                .zip(&consts)
                .map(|(g, c)| {
                    let mut h = g.clone();
                    h.coeffs[0] = h.coeffs[0].clone() - c.clone();
                    h
                })
                .collect();
            (shifted, centered)
        };
        outer.compose_raw(&centered)
    }
}

pub fn binom_i64(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

pub fn factorial_s<S: Scalar>(n: usize) -> S {
    let mut f = S::one();
    for q in 2..=n as i64 {
        f = f * S::from_int(q);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_complex::Complex64;

    type R = GaussRational;

    fn q(n: i64, d: i64) -> R {
        R::from_ratio(n, d)
    }

    #[test]
    fn mul_matches_monomials() {
        // z * z = z^2
        let z: Jet<R> = Jet::variable(1, 4, 0);
        let z2 = z.mul(&z).unwrap();
        assert_eq!(z2.coeff(&[2]), q(1, 1));
        assert_eq!(z2.coeff(&[1]), q(0, 1));
    }

    #[test]
    fn exp_jet_squared_is_exp_of_2z() {
        // e^z to order 3: 1, 1, 1/2, 1/6 ; square must give 1, 2, 2, 4/3
        let e: Jet<R> = Jet::from_taylor1(3, &[q(1, 1), q(1, 1), q(1, 2), q(1, 6)]);
        let s = e.mul(&e).unwrap();
        assert_eq!(s.coeff(&[0]), q(1, 1));
        assert_eq!(s.coeff(&[1]), q(2, 1));
        assert_eq!(s.coeff(&[2]), q(2, 1));
        assert_eq!(s.coeff(&[3]), q(4, 3));
    }

    #[test]
    fn add_zero_is_identity() {
        let e: Jet<R> = Jet::from_taylor1(3, &[q(1, 1), q(2, 1), q(3, 1), q(4, 1)]);
        let z = Jet::zero(1, 3);
        let s = e.add(&z).unwrap();
        assert_eq!(s.coeff(&[2]), e.coeff(&[2]));
    }

    #[test]
    fn compose_exp_with_z_plus_z2() {
        // exp o (z + z^2) to order 3: 1, 1, 3/2, 7/6
        let e: Jet<R> = Jet::from_taylor1(3, &[q(1, 1), q(1, 1), q(1, 2), q(1, 6)]);
        let mut inner: Jet<R> = Jet::variable(1, 3, 0);
        inner.set_coeff(&[2], q(1, 1));
        let c = e.compose_raw(&[inner]).unwrap();
        assert_eq!(c.coeff(&[0]), q(1, 1));
        assert_eq!(c.coeff(&[1]), q(1, 1));
        assert_eq!(c.coeff(&[2]), q(3, 2));
        assert_eq!(c.coeff(&[3]), q(7, 6));
    }

    #[test]
    fn compose_identity_outer_returns_inner() {
        let outer: Jet<R> = Jet::variable(1, 5, 0);
        let mut inner: Jet<R> = Jet::variable(1, 5, 0);
        inner.set_coeff(&[3], q(-2, 7));
        let c = outer.compose_raw(&[inner.clone()]).unwrap();
        assert_eq!(c.coeff(&[3]), inner.coeff(&[3]));
        assert_eq!(c.coeff(&[1]), q(1, 1));
    }

    #[test]
    fn recenter_polynomial_exact() {
        // f(z) = z^2 recentered at c: (c+u)^2 = c^2 + 2cu + u^2
        let mut f: Jet<R> = Jet::zero(1, 2);
        f.set_coeff(&[2], q(1, 1));
        let c = q(1, 4);
        let g = f.recenter(&[c.clone()]).unwrap();
        assert_eq!(g.coeff(&[0]), q(1, 16));
        assert_eq!(g.coeff(&[1]), q(1, 2));
        assert_eq!(g.coeff(&[2]), q(1, 1));
    }

    #[test]
    fn recenter_rejects_large_shift() {
        let f: Jet<Complex64> = Jet::variable(1, 2, 0);
        let err = f.recenter(&[Complex64::new(0.75, 0.0)]).unwrap_err();
        match err {
            JetError::ShiftRadius(r) => assert!(r > 0.5),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn recip_times_self_is_one() {
        let mut f: Jet<R> = Jet::constant(2, 4, q(2, 1));
        f.set_coeff(&[1, 0], q(1, 3));
        f.set_coeff(&[0, 2], q(-1, 5));
        let r = f.recip().unwrap();
        let p = f.mul(&r).unwrap();
        assert_eq!(p.coeff(&[0, 0]), q(1, 1));
        for e in [[1u8, 0], [0, 1], [2, 0], [1, 1], [0, 2], [2, 2]] {
            assert_eq!(p.coeff(&e), q(0, 1), "residual at {e:?}");
        }
    }

    #[test]
    fn conj_swap_on_wirtinger_pair() {
        // f = i * s^2 t : conj is -i * t^2 s after swapping s <-> t
        let mut f: Jet<R> = Jet::zero(2, 3);
        f.set_coeff(&[2, 1], R::i());
        let g = f.conj_swap(0, 1);
        assert_eq!(g.coeff(&[1, 2]), -R::i());
        assert_eq!(g.coeff(&[2, 1]), R::from_int(0));
    }
}
