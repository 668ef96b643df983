//! Jordan-triple geometry of the four supported domain families: flat
//! real/complex space, the unit interval inside the disc, and the
//! diagonal disc inside the bidisc.
//!
//! Points of the complexification are stored in holomorphic coordinates.
//! For the product-type domains the second coordinate is the conjugate
//! slot, so a point (z, w-bar) is stored as [z, wbar] and the real form
//! is the set { [z, conj(z)] }.

use crate::error::GeomError;
use crate::funcs::Holo1;
use crate::jet::Jet;
use crate::scalar::Scalar;
use num_complex::Complex64;

/// Supported domain kinds, each carrying its fiber parameter.
#[derive(Clone, Debug)]
pub enum DomainKind<S: Scalar> {
    /// B_R = R^d inside C^d, fiber direction epsilon (unimodular, not real).
    FlatReal { dim: usize, epsilon: S },
    /// B_R = C^d diagonally inside C^d x conj(C^d), fiber map z -> (z, conj(a z)).
    FlatComplex { dim: usize, a: S },
    /// B_R = (-1,1) inside the unit disc, fiber direction epsilon.
    IntervalInDisc { epsilon: S },
    /// B_R = D diagonally inside D x conj(D), fiber map z -> (z, conj(a z)).
    DiagonalInProductDisc { a: S },
}

/// A supported real bounded symmetric domain with its complexification.
#[derive(Clone, Debug)]
pub struct DomainSpec<S: Scalar> {
    pub kind: DomainKind<S>,
}

/// Point of the complexification in holomorphic coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoint<S: Scalar>(pub Vec<S>);

impl<S: Scalar> CPoint<S> {
    pub fn scalar(z: S) -> Self {
        CPoint(vec![z])
    }
    pub fn pair(u: S, v: S) -> Self {
        CPoint(vec![u, v])
    }
    pub fn coords(&self) -> &[S] {
        &self.0
    }
}

fn unimodular_not_real<S: Scalar>(eps: &S) -> Result<(), GeomError> {
    let e = eps.to_c64();
    if (e.norm() - 1.0).abs() > 1e-12 || e.im.abs() < 1e-12 {
        return Err(GeomError::Unsupported(format!(
            "fiber direction must be unimodular and non-real, got {e}"
        )));
    }
    Ok(())
}

impl<S: Scalar> DomainSpec<S> {
    pub fn flat_real(epsilon: S) -> Result<Self, GeomError> {
        unimodular_not_real(&epsilon)?;
        Ok(DomainSpec {
            kind: DomainKind::FlatReal { dim: 1, epsilon },
        })
    }
    pub fn flat_complex(a: S) -> Result<Self, GeomError> {
        if (a.to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(GeomError::Unsupported(
                "fiber parameter a = 1 degenerates".into(),
            ));
        }
        Ok(DomainSpec {
            kind: DomainKind::FlatComplex { dim: 1, a },
        })
    }
    pub fn interval(epsilon: S) -> Result<Self, GeomError> {
        unimodular_not_real(&epsilon)?;
        Ok(DomainSpec {
            kind: DomainKind::IntervalInDisc { epsilon },
        })
    }
    pub fn product_disc(a: S) -> Result<Self, GeomError> {
        if (a.to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(GeomError::Unsupported(
                "fiber parameter a = 1 degenerates".into(),
            ));
        }
        Ok(DomainSpec {
            kind: DomainKind::DiagonalInProductDisc { a },
        })
    }

    /// Complex genus p of the complexification.
    pub fn genus(&self) -> u32 {
        match self.kind {
            DomainKind::FlatReal { .. } | DomainKind::FlatComplex { .. } => 0,
            DomainKind::IntervalInDisc { .. } | DomainKind::DiagonalInProductDisc { .. } => 2,
        }
    }

    /// Real rank of B_R (1 for every implemented family).
    pub fn rank_real(&self) -> u32 {
        1
    }

    /// Number of holomorphic coordinates of Z_C.
    pub fn complex_dim(&self) -> usize {
        match &self.kind {
            DomainKind::FlatReal { dim, .. } => *dim,
            DomainKind::IntervalInDisc { .. } => 1,
            DomainKind::FlatComplex { dim, .. } => 2 * dim,
            DomainKind::DiagonalInProductDisc { .. } => 2,
        }
    }

    pub fn is_disc_type(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::IntervalInDisc { .. } | DomainKind::DiagonalInProductDisc { .. }
        )
    }

    pub fn is_pair_type(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::FlatComplex { .. } | DomainKind::DiagonalInProductDisc { .. }
        )
    }

    /// Real-form point from its natural parameter (one real number for the
    /// scalar domains, one complex number z -> [z, conj z] for pair-type).
    pub fn real_point(&self, param: &S) -> CPoint<S> {
        if self.is_pair_type() {
            CPoint::pair(param.clone(), param.conj())
        } else {
            CPoint::scalar(param.clone())
        }
    }

    /// The fiber parameterization Lambda: B_R -> B_C.
    pub fn lambda_map(&self, param: &S) -> CPoint<S> {
        match &self.kind {
            DomainKind::FlatReal { epsilon, .. } | DomainKind::IntervalInDisc { epsilon } => {
                CPoint::scalar(epsilon.clone() * param.clone())
            }
            DomainKind::FlatComplex { a, .. } | DomainKind::DiagonalInProductDisc { a } => {
                // z -> (z, conj(a z)) stored as [z, conj(a) conj(z)]
                CPoint::pair(param.clone(), a.conj() * param.conj())
            }
        }
    }

    /// The conjugate-linear involution with fixed-point set B_R.
    pub fn involution(&self, z: &CPoint<S>) -> CPoint<S> {
        if self.is_pair_type() {
            CPoint::pair(z.0[1].conj(), z.0[0].conj())
        } else {
            CPoint(z.0.iter().map(|c| c.conj()).collect())
        }
    }

    /// Quadratic representation Q_y x = {y x y} (componentwise scalar rule
    /// on the disc slots, zero on flat slots).
    pub fn quadratic_rep(&self, y: &CPoint<S>, x: &CPoint<S>) -> CPoint<S> {
        if self.is_disc_type() {
            CPoint(
                y.0.iter()
                    .zip(&x.0)
                    .map(|(yi, xi)| yi.clone() * yi.clone() * xi.conj())
                    .collect(),
            )
        } else {
            CPoint(vec![S::zero(); x.0.len()])
        }
    }

    /// Quasi-inverse y^x = B(y,x)^{-1}(y - Q_y x).
    pub fn quasi_inverse(&self, y: &CPoint<S>, x: &CPoint<S>) -> Result<CPoint<S>, GeomError> {
        if !self.is_disc_type() {
            return Ok(y.clone());
        }
        let mut out = Vec::with_capacity(y.0.len());
        for (yi, xi) in y.0.iter().zip(&x.0) {
            let den = S::one() - yi.clone() * xi.conj();
            if den.is_zero() || den.to_c64().norm() < 1e-14 {
                return Err(GeomError::Singular);
            }
            out.push(yi.clone() / den);
        }
        Ok(CPoint(out))
    }

    /// Transvection gamma_x(y) = x + B(x,x)^{1/2} y^{-x}; closed Moebius
    /// form per coordinate on disc slots, translation on flat slots.
    ///
    /// ```
    /// use num_complex::Complex64 as C;
    /// use starrest::jordan::{CPoint, DomainSpec};
    /// let dom = DomainSpec::interval(C::new(0.0, 1.0)).unwrap();
    /// let x = CPoint::scalar(C::new(0.5, 0.0));
    /// // gamma_x(0) = x
    /// assert_eq!(dom.transvection(&x, &CPoint::scalar(C::new(0.0, 0.0))).unwrap(), x);
    /// ```
    pub fn transvection(&self, x: &CPoint<S>, y: &CPoint<S>) -> Result<CPoint<S>, GeomError> {
        if !self.is_disc_type() {
            return Ok(CPoint(
                x.0.iter()
                    .zip(&y.0)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect(),
            ));
        }
        let mut out = Vec::with_capacity(x.0.len());
        for (xi, yi) in x.0.iter().zip(&y.0) {
            let den = S::one() + xi.conj() * yi.clone();
            if den.is_zero() || den.to_c64().norm() < 1e-14 {
                return Err(GeomError::Singular);
            }
            out.push((xi.clone() + yi.clone()) / den);
        }
        Ok(CPoint(out))
    }

    /// Membership in B_C (componentwise |z| < 1 on disc slots).
    pub fn contains(&self, z: &CPoint<S>) -> bool {
        if self.is_disc_type() {
            z.0.iter().all(|c| c.to_c64().norm() < 1.0)
        } else {
            true
        }
    }
}

// -------- float-mode kernels --------

impl DomainSpec<Complex64> {
    /// Jordan triple determinant h_C(z, w) of the complexification.
    pub fn h_det(&self, z: &CPoint<Complex64>, w: &CPoint<Complex64>) -> Complex64 {
        match &self.kind {
            DomainKind::FlatReal { .. } => {
                let mut s = Complex64::new(0.0, 0.0);
                for (zi, wi) in z.0.iter().zip(&w.0) {
                    s += zi * wi.conj();
                }
                (-s).exp()
            }
            DomainKind::FlatComplex { .. } => {
                // h((z, wbar), (z1, w1bar)) = exp(-(z|z1) - (w1|w)), and
                // (w1|w) = conj(w1bar) wbar in stored coordinates
                let s = z.0[0] * w.0[0].conj() + w.0[1].conj() * z.0[1];
                (-s).exp()
            }
            DomainKind::IntervalInDisc { .. } => Complex64::new(1.0, 0.0) - z.0[0] * w.0[0].conj(),
            DomainKind::DiagonalInProductDisc { .. } => {
                // h(z, zeta) h(omega, w), second factor conjugate-structured
                (Complex64::new(1.0, 0.0) - z.0[0] * w.0[0].conj())
                    * (Complex64::new(1.0, 0.0) - w.0[1].conj() * z.0[1])
            }
        }
    }

    /// Berezin kernel B_nu(z) = h(z,z)^nu / |h(z, z#)|^nu.
    pub fn berezin_kernel(&self, nu: f64, z: &CPoint<Complex64>) -> f64 {
        let hzz = self.h_det(z, z).re; // real positive on B_C
        let zs = self.involution(z);
        let hzs = self.h_det(z, &zs).norm();
        (hzz / hzs).powf(nu)
    }

    /// I_nu(z) = h_C(z, z#)^{-nu/2}, principal branch. The argument stays in
    /// the right half plane on the supported domains; violations error out.
    pub fn i_nu(&self, nu: f64, z: &CPoint<Complex64>) -> Result<Complex64, GeomError> {
        let zs = self.involution(z);
        let h = self.h_det(z, &zs);
        if h.re <= 0.0 {
            return Err(GeomError::BranchViolation(h));
        }
        Ok(h.powc(Complex64::new(-nu / 2.0, 0.0)))
    }

    /// Real-linear Jacobian of Phi(x, u) = gamma_x(Lambda u) with respect to
    /// Lebesgue measure on the natural parameters: analytic for the scalar
    /// kinds and at the product origin, central finite differences otherwise.
    pub fn phi_jacobian_det(
        &self,
        x: &CPoint<Complex64>,
        y_fiber: &CPoint<Complex64>,
    ) -> Result<f64, GeomError> {
        match &self.kind {
            DomainKind::FlatReal { epsilon, .. } => Ok(epsilon.im.abs()),
            DomainKind::FlatComplex { a, .. } => Ok((Complex64::new(1.0, 0.0) - a).norm_sqr()),
            DomainKind::IntervalInDisc { epsilon } => {
                // y = eps t; det = (1-x^2)(1+t^2)|Im eps| / |1 + x eps t|^4
                let t = (y_fiber.0[0] / epsilon).re;
                let xr = x.0[0].re;
                let den = (Complex64::new(1.0, 0.0) + x.0[0] * y_fiber.0[0]).norm_sqr();
                Ok((1.0 - xr * xr) * (1.0 + t * t) * epsilon.im.abs() / (den * den))
            }
            DomainKind::DiagonalInProductDisc { a } => {
                let x0 = x.0[0];
                if x0.norm() < 1e-14 {
                    let w = y_fiber.0[0];
                    let b = (Complex64::new(1.0, 0.0) - a).norm_sqr();
                    Ok(b * (1.0 - a.norm_sqr() * w.norm_sqr() * w.norm_sqr()))
                } else {
                    self.phi_jacobian_det_fd(x, y_fiber)
                }
            }
        }
    }

    /// Central-difference Jacobian with one Richardson refinement step.
    pub fn phi_jacobian_det_fd(
        &self,
        x: &CPoint<Complex64>,
        y_fiber: &CPoint<Complex64>,
    ) -> Result<f64, GeomError> {
        let d1 = self.phi_jacobian_det_fd_step(x, y_fiber, 1e-5)?;
        let d2 = self.phi_jacobian_det_fd_step(x, y_fiber, 5e-6)?;
        Ok((4.0 * d2 - d1) / 3.0)
    }

    fn phi_jacobian_det_fd_step(
        &self,
        x: &CPoint<Complex64>,
        y_fiber: &CPoint<Complex64>,
        h: f64,
    ) -> Result<f64, GeomError> {
        let (xp, up): (Vec<f64>, Vec<f64>) = match &self.kind {
            DomainKind::FlatReal { epsilon, .. } | DomainKind::IntervalInDisc { epsilon } => {
                (vec![x.0[0].re], vec![(y_fiber.0[0] / epsilon).re])
            }
            DomainKind::FlatComplex { .. } | DomainKind::DiagonalInProductDisc { .. } => (
                vec![x.0[0].re, x.0[0].im],
                vec![y_fiber.0[0].re, y_fiber.0[0].im],
            ),
        };
        let n = xp.len();
        let phi = |xq: &[f64], uq: &[f64]| -> Result<Vec<f64>, GeomError> {
            let xpt = if n == 1 {
                CPoint::scalar(Complex64::new(xq[0], 0.0))
            } else {
                self.real_point(&Complex64::new(xq[0], xq[1]))
            };
            let upar = if n == 1 {
                Complex64::new(uq[0], 0.0)
            } else {
                Complex64::new(uq[0], uq[1])
            };
            let y = self.lambda_map(&upar);
            let z = self.transvection(&xpt, &y)?;
            let mut out = Vec::with_capacity(2 * z.0.len());
            for c in &z.0 {
                out.push(c.re);
                out.push(c.im);
            }
            Ok(out)
        };
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
        for k in 0..2 * n {
            let bump = |s: f64| -> (Vec<f64>, Vec<f64>) {
                let mut xq = xp.clone();
                let mut uq = up.clone();
                if k < n {
                    xq[k] += s;
                } else {
                    uq[k - n] += s;
                }
                (xq, uq)
            };
            let (xq, uq) = bump(h);
            let plus = phi(&xq, &uq)?;
            let (xq, uq) = bump(-h);
            let minus = phi(&xq, &uq)?;
            cols.push(
                plus.iter()
                    .zip(&minus)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect(),
            );
        }
        Ok(det_real(&cols).abs())
    }

    /// |det| of the real-linear map (xi, eta) -> xi + eta - Q_y xi on
    /// Z_R + Lambda(Z_R), built by generic linear algebra from the
    /// quadratic representation.
    pub fn det_i_minus_q(&self, y: &CPoint<Complex64>) -> f64 {
        let basis: Vec<Complex64> = if self.is_pair_type() {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
        } else {
            vec![Complex64::new(1.0, 0.0)]
        };
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for b in &basis {
            let xi = self.real_point(b);
            let q = self.quadratic_rep(y, &xi);
            let mut col = Vec::new();
            for (bc, qc) in xi.0.iter().zip(&q.0) {
                let v = bc - qc;
                col.push(v.re);
                col.push(v.im);
            }
            cols.push(col);
        }
        for b in &basis {
            let eta = self.lambda_map(b);
            let mut col = Vec::new();
            for c in &eta.0 {
                col.push(c.re);
                col.push(c.im);
            }
            cols.push(col);
        }
        det_real(&cols).abs()
    }
}

/// Determinant of a small real matrix given by columns.
fn det_real(cols: &[Vec<f64>]) -> f64 {
    let n = cols.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|r| (0..n).map(|c| cols[c][r]).collect())
        .collect();
    let mut det = 1.0;
    for k in 0..n {
        let (mut piv, mut pv) = (k, m[k][k].abs());
        for r in k + 1..n {
            if m[r][k].abs() > pv {
                piv = r;
                pv = m[r][k].abs();
            }
        }
        if pv == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        for r in k + 1..n {
            let f = m[r][k] / m[k][k];
            for c in k..n {
                m[r][c] -= f * m[k][c];
            }
        }
    }
    det
}

// -------- Moebius maps of the disc and G_R group elements --------

/// Fractional-linear self-map of the disc, z -> (a z + b)/(c z + d).
#[derive(Clone, Debug)]
pub struct DiscMobius<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> DiscMobius<S> {
    /// The transvection centered at s composed with an optional flip:
    /// z -> (±z + s)/(1 + conj(s)(±z)).
    pub fn transvection(s: S, flip: bool) -> Self {
        let sign = if flip { -S::one() } else { S::one() };
        DiscMobius {
            a: sign.clone(),
            b: s.clone(),
            c: s.conj() * sign,
            d: S::one(),
        }
    }
    /// Rotation-translation u -> rot (u + s)/(1 + conj(s) u).
    pub fn rotated_transvection(rot: S, s: S) -> Self {
        DiscMobius {
            a: rot.clone(),
            b: rot * s.clone(),
            c: s.conj(),
            d: S::one(),
        }
    }
    pub fn apply(&self, z: &S) -> S {
        (self.a.clone() * z.clone() + self.b.clone())
            / (self.c.clone() * z.clone() + self.d.clone())
    }
    /// The conjugate map g*(v) = conj(g(conj(v))).
    pub fn reflected(&self) -> Self {
        DiscMobius {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }
    /// Pure rotation z -> rot z.
    pub fn rotation(rot: S) -> Self {
        DiscMobius {
            a: rot,
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }
    /// Composition self o other as a matrix product.
    pub fn compose(&self, other: &Self) -> Self {
        DiscMobius {
            a: self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            b: self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            c: self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            d: self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
        }
    }
    /// Inverse map (adjugate matrix).
    pub fn inverse(&self) -> Self {
        DiscMobius {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }
    /// Taylor jet of the map at a center, to the requested order.
    pub fn taylor(&self, center: &S, order: usize) -> Vec<S> {
        let num = Jet::from_taylor1(
            order,
            &[
                self.a.clone() * center.clone() + self.b.clone(),
                self.a.clone(),
            ],
        );
        let den = Jet::from_taylor1(
            order,
            &[
                self.c.clone() * center.clone() + self.d.clone(),
                self.c.clone(),
            ],
        );
        let j = num
            .mul(&den.recip().expect("disc Moebius denominator vanished"))
            .unwrap();
        (0..=order).map(|k| j.coeff(&[k as u8])).collect()
    }
}

/// Element of G_R, the subgroup of biholomorphisms commuting with the
/// involution.
#[derive(Clone, Debug)]
pub enum GroupElement<S: Scalar> {
    /// Real-coefficient disc Moebius map (interval domain).
    ScalarMobius(DiscMobius<S>),
    /// Diagonal pair (g, conj g) on the bidisc.
    PairMobius(DiscMobius<S>),
    /// x -> ±x + t with t real (flat real line).
    FlatShift { shift: S, flip: bool },
    /// Diagonal pair of rigid motions u -> rot u + shift, |rot| = 1.
    FlatPairMotion { rot: S, shift: S },
}

impl<S: Scalar> GroupElement<S> {
    pub fn apply(&self, z: &CPoint<S>) -> CPoint<S> {
        match self {
            GroupElement::ScalarMobius(g) => CPoint::scalar(g.apply(&z.0[0])),
            GroupElement::PairMobius(g) => {
                let gr = g.reflected();
                CPoint::pair(g.apply(&z.0[0]), gr.apply(&z.0[1]))
            }
            GroupElement::FlatShift { shift, flip } => {
                let v = if *flip {
                    -z.0[0].clone()
                } else {
                    z.0[0].clone()
                };
                CPoint::scalar(v + shift.clone())
            }
            GroupElement::FlatPairMotion { rot, shift } => CPoint::pair(
                rot.clone() * z.0[0].clone() + shift.clone(),
                rot.conj() * z.0[1].clone() + shift.conj(),
            ),
        }
    }
}

/// The G_R-invariant retraction of the interval domain: the unique real x
/// with gamma_{-x}(z) on the fiber line.
pub fn retraction_interval(dom: &DomainSpec<Complex64>, z: Complex64) -> Result<f64, GeomError> {
    let eps = match &dom.kind {
        DomainKind::IntervalInDisc { epsilon } => *epsilon,
        _ => return Err(GeomError::Unsupported("interval retraction".into())),
    };
    // Im[conj(eps) (z - x(1+|z|^2) + x^2 conj(z))] = 0
    let ec = eps.conj();
    let a = (ec * z.conj()).im;
    let b = -(1.0 + z.norm_sqr()) * ec.im;
    let c = (ec * z).im;
    let roots = if a.abs() < 1e-14 {
        vec![-c / b]
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(GeomError::OutsideDomain);
        }
        let r = disc.sqrt();
        vec![(-b + r) / (2.0 * a), (-b - r) / (2.0 * a)]
    };
    for x in roots {
        if x.abs() < 1.0 {
            let y =
                dom.transvection(&CPoint::scalar(Complex64::new(-x, 0.0)), &CPoint::scalar(z))?;
            if y.0[0].norm() < 1.0 + 1e-12 {
                return Ok(x);
            }
        }
    }
    Err(GeomError::OutsideDomain)
}

/// The G_R-invariant retraction of the bidisc diagonal: the unique point x
/// of the diagonal whose inverse transvection carries (z, wbar) onto the
/// fiber {(y, conj(a y))}. Constructed by matching pseudo-hyperbolic
/// distances: pick real u with rho(u, a u) = rho(z, w), build the group
/// pair g with g z = u and g w = a u, and pull the origin back.
pub fn retraction_product(
    dom: &DomainSpec<Complex64>,
    point: &CPoint<Complex64>,
) -> Result<Complex64, GeomError> {
    type C = Complex64;
    let a = match &dom.kind {
        DomainKind::DiagonalInProductDisc { a } => *a,
        _ => return Err(GeomError::Unsupported("bidisc retraction".into())),
    };
    let z = point.0[0];
    let w = point.0[1].conj();
    // pseudo-hyperbolic distance rho(z, w)
    let rho = ((z - w) / (C::new(1.0, 0.0) - z.conj() * w)).norm();
    // solve rho(u, a u) = |u| |1-a| / |1 - conj(a) u^2| = rho for real
    // u in [0, min(1, 1/|a|)); the left side is monotone on that range
    let ulim = if a.norm() > 1.0 { 1.0 / a.norm() } else { 1.0 };
    let dist = |u: f64| -> f64 {
        let uu = C::new(u, 0.0);
        ((uu * (C::new(1.0, 0.0) - a)) / (C::new(1.0, 0.0) - a.conj() * uu * uu)).norm()
    };
    let (mut lo, mut hi) = (0.0f64, ulim * (1.0 - 1e-12));
    if rho > dist(hi) {
        return Err(GeomError::OutsideDomain);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let uu = C::new(u, 0.0);
    // g = gamma_u o rotation o gamma_{-z}: g z = u and g w = a u
    let g1 = DiscMobius::transvection(-z, false);
    let wprime = g1.apply(&w);
    let zeta = DiscMobius::transvection(-uu, false).apply(&(a * uu));
    let rot = if wprime.norm() < 1e-13 {
        C::new(1.0, 0.0)
    } else {
        let r = zeta / wprime;
        // unimodular by the distance matching
        r / r.norm()
    };
    let g = DiscMobius::transvection(uu, false)
        .compose(&DiscMobius::rotation(rot))
        .compose(&g1);
    // equivariance: pi(point) = (pair element g)^{-1} applied to 0
    let x = g.inverse().apply(&C::new(0.0, 0.0));
    // verify the fiber condition gamma_{-x}(point) in Lambda(B_R)
    let moved = dom.transvection(&dom.real_point(&-x), point)?;
    let resid = (moved.0[1] - a.conj() * moved.0[0].conj()).norm();
    if resid > 1e-8 {
        return Err(GeomError::OutsideDomain);
    }
    Ok(x)
}

/// H composed with a disc Moebius map, again holomorphic with exact jets.
pub struct MobiusComposed<S: Scalar> {
    pub inner: std::rc::Rc<dyn Holo1<S>>,
    pub map: DiscMobius<S>,
}

impl<S: Scalar> Holo1<S> for MobiusComposed<S> {
    fn taylor(&self, center: &S, order: usize) -> Vec<S> {
        let g = self.map.taylor(center, order);
        let g0 = g[0].clone();
        let mut shifted = g;
        shifted[0] = S::zero();
        let outer = Jet::from_taylor1(order, &self.inner.taylor(&g0, order));
        let inner = Jet::from_taylor1(order, &shifted);
        let c = outer.compose_raw(&[inner]).unwrap();
        (0..=order).map(|k| c.coeff(&[k as u8])).collect()
    }
}
