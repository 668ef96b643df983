//! Function evaluators fed to the operator pipelines.
//!
//! Every analytic input is represented by something that can produce its
//! Taylor jet at a requested center, so the operator code never
//! differentiates numerically. Smooth non-holomorphic inputs are finite
//! sums of sesquiholomorphic pairs h(z) conj(w(z)), which covers all test
//! functions used by the duality and expectation identities.

use crate::scalar::Scalar;
use std::rc::Rc;

/// Purity tag carried by function values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purity {
    Holomorphic,
    Antiholomorphic,
    Sesquiholomorphic,
    Smooth,
}

/// Holomorphic function of one complex variable with exact jets.
pub trait Holo1<S: Scalar> {
    /// Taylor coefficients f^(j)(center)/j! for j = 0..=order.
    fn taylor(&self, center: &S, order: usize) -> Vec<S>;

    fn value(&self, z: &S) -> S {
        self.taylor(z, 0)[0].clone()
    }
}

/// Polynomial with coefficients at the origin.
#[derive(Clone, Debug)]
pub struct Poly1<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Poly1<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        Poly1 { coeffs }
    }
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![S::zero(); k + 1];
        c[k] = S::one();
        Poly1 { coeffs: c }
    }
    pub fn constant(c: S) -> Self {
        Poly1 { coeffs: vec![c] }
    }
    /// The reflected polynomial g*(z) = conj(g(conj(z))).
    pub fn reflected(&self) -> Self {
        Poly1 {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
}

impl<S: Scalar> Holo1<S> for Poly1<S> {
    fn taylor(&self, center: &S, order: usize) -> Vec<S> {
        // binomial recentering, exact in both scalar modes
        let mut out = vec![S::zero(); order + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut powers = vec![S::one()];
            for _ in 0..n {
                powers.push(powers.last().unwrap().clone() * center.clone());
            }
            for k in 0..=n.min(order) {
                let b = crate::jet::binom_i64(n as i64, k as i64);
                out[k] = out[k].clone() + c.clone() * S::from_int(b) * powers[n - k].clone();
            }
        }
        out
    }
}

/// Exponential e^{lambda z} (float mode only).
#[derive(Clone, Debug)]
pub struct ExpFn {
    pub lambda: num_complex::Complex64,
}

impl Holo1<num_complex::Complex64> for ExpFn {
    fn taylor(&self, center: &num_complex::Complex64, order: usize) -> Vec<num_complex::Complex64> {
        let v = (self.lambda * center).exp();
        let mut out = Vec::with_capacity(order + 1);
        let mut t = v;
        out.push(t);
        for j in 1..=order {
            t = t * self.lambda / (j as f64);
            out.push(t);
        }
        out
    }
}

/// Reflection wrapper: (Rf)(z) = conj(f(conj(z))), again holomorphic.
pub struct Reflected<S: Scalar>(pub Rc<dyn Holo1<S>>);

impl<S: Scalar> Holo1<S> for Reflected<S> {
    fn taylor(&self, center: &S, order: usize) -> Vec<S> {
        self.0
            .taylor(&center.conj(), order)
            .into_iter()
            .map(|c| c.conj())
            .collect()
    }
}

/// Holomorphic function on the complexified domain.
///
/// `Scalar1` suits the one-coordinate domains (flat real line, interval in
/// the disc); `Tensor` represents F(u, v~) = f(u) g*(v~) on the
/// product-type domains, which is the holomorphic form of f (x) conj(g).
#[derive(Clone)]
pub enum HoloFn<S: Scalar> {
    Scalar1(Rc<dyn Holo1<S>>),
    Tensor {
        f: Rc<dyn Holo1<S>>,
        gstar: Rc<dyn Holo1<S>>,
    },
}

impl<S: Scalar> HoloFn<S> {
    pub fn scalar1(f: impl Holo1<S> + 'static) -> Self {
        HoloFn::Scalar1(Rc::new(f))
    }
    /// Build f (x) conj(g) from holomorphic f and g on the disc.
    pub fn tensor_conj(f: impl Holo1<S> + 'static, g: impl Holo1<S> + 'static) -> Self {
        HoloFn::Tensor {
            f: Rc::new(f),
            gstar: Rc::new(Reflected(Rc::new(g))),
        }
    }
    pub fn purity(&self) -> Purity {
        Purity::Holomorphic
    }
    /// Pointwise value at holomorphic coordinates.
    pub fn value(&self, coords: &[S]) -> S {
        match self {
            HoloFn::Scalar1(f) => f.value(&coords[0]),
            HoloFn::Tensor { f, gstar } => f.value(&coords[0]) * gstar.value(&coords[1]),
        }
    }
}

/// Smooth function given as a finite sum of sesquiholomorphic pairs
/// sum_i h_i(z) conj(w_i(z)).
#[derive(Clone)]
pub enum SmoothFn<S: Scalar> {
    Sesqui1(Vec<(Rc<dyn Holo1<S>>, Rc<dyn Holo1<S>>)>),
    Sesqui2(Vec<(HoloFn<S>, HoloFn<S>)>),
}

impl<S: Scalar> SmoothFn<S> {
    pub fn holomorphic1(h: impl Holo1<S> + 'static) -> Self {
        SmoothFn::Sesqui1(vec![(
            Rc::new(h) as Rc<dyn Holo1<S>>,
            Rc::new(Poly1::constant(S::one())) as Rc<dyn Holo1<S>>,
        )])
    }
    pub fn pair1(h: impl Holo1<S> + 'static, w: impl Holo1<S> + 'static) -> Self {
        SmoothFn::Sesqui1(vec![(
            Rc::new(h) as Rc<dyn Holo1<S>>,
            Rc::new(w) as Rc<dyn Holo1<S>>,
        )])
    }
    pub fn purity(&self) -> Purity {
        Purity::Smooth
    }
    /// Pointwise value at holomorphic coordinates.
    pub fn value(&self, coords: &[S]) -> S {
        match self {
            SmoothFn::Sesqui1(terms) => {
                let mut acc = S::zero();
                for (h, w) in terms {
                    acc = acc + h.value(&coords[0]) * w.value(&coords[0]).conj();
                }
                acc
            }
            SmoothFn::Sesqui2(terms) => {
                let mut acc = S::zero();
                for (h, w) in terms {
                    acc = acc + h.value(coords) * w.value(coords).conj();
                }
                acc
            }
        }
    }
}
