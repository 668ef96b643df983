//! The invariant operator tower: psi^m, psi^m_kappa, the Moyal components
//! rho^m, their flat closed forms, and the complex-case operators E^m / A_m
//! used for cross-validation.
//!
//! rho^m is evaluated by nested jet differentiation: the base point is
//! promoted to one or two jet variables, the transvection jets are re-derived
//! at the jet-valued base point, and the outer adjoint derivatives become
//! coefficient reads. No closed form for the gamma^alpha_iota coefficient
//! functions is ever needed.
//!
//! Conventions. The scalar domains (flat line, interval) use a single real
//! outer direction t. The pair domains (flat plane, bidisc diagonal) use two
//! Wirtinger directions (s, tau) for (z, zbar); the adjoint of the inner
//! index pair (k1 on the first slot, k2 on the second) is
//! (-dbar)^{k1} (-d)^{k2}, read off the tau^{k1} s^{k2} jet coefficient, the
//! Hermitian-adjoint crossing of the two slots.

use crate::error::MoyalError;
use crate::funcs::{Holo1, HoloFn, SmoothFn};
use crate::jet::{factorial_s, Jet, MultiIndex};
use crate::jordan::{DomainKind, DomainSpec};
use crate::scalar::Scalar;
use crate::special::Partition;
use std::collections::HashMap;

/// Largest partition weight accepted by the jet pipelines.
pub const MAX_WEIGHT: usize = 6;

/// Result of an operator evaluation, with optional per-derivative
/// contributions for coefficient extraction.
#[derive(Clone, Debug)]
pub struct OperatorValue<S: Scalar> {
    pub value: S,
    pub terms: Option<Vec<(MultiIndex, S)>>,
}

impl<S: Scalar> OperatorValue<S> {
    pub fn plain(value: S) -> Self {
        OperatorValue { value, terms: None }
    }
    /// Check `value = sum(terms)` when the map is present.
    pub fn consistent(&self) -> bool {
        match &self.terms {
            None => true,
            Some(ts) => {
                let mut s = S::zero();
                for (_, v) in ts {
                    s = s + v.clone();
                }
                (s - self.value.clone()).to_c64().norm() < 1e-10
            }
        }
    }
}

fn weight_of(m: &Partition) -> Result<usize, MoyalError> {
    if m.len() > 1 {
        return Err(MoyalError::PartitionLength(m.len()));
    }
    let w = m.weight() as usize;
    if w > MAX_WEIGHT {
        return Err(MoyalError::JetBudget(w));
    }
    Ok(w)
}

// ---------- E^m polynomial data and P^m constants ----------

/// Coefficient data of the invariant polynomial E^m and the associated
/// constant-coefficient operator: pairs (kappa, c_kappa) so that
/// E^m_R = sum_kappa c_kappa d_R^kappa.
#[derive(Clone, Debug)]
pub struct EPoly<S: Scalar> {
    pub terms: Vec<(MultiIndex, S)>,
}

/// E^m for the supported domains: x^{2m}/(2m)! on the scalar domains,
/// sum_{|beta|=m} d^beta dbar^beta / beta! on the pair-type domains.
pub fn e_poly<S: Scalar>(dom: &DomainSpec<S>, m: &Partition) -> Result<EPoly<S>, MoyalError> {
    let w = weight_of(m)?;
    match &dom.kind {
        DomainKind::FlatReal { .. } | DomainKind::IntervalInDisc { .. } => Ok(EPoly {
            terms: vec![(
                MultiIndex::holo1(2 * w as u8),
                S::one() / factorial_s::<S>(2 * w),
            )],
        }),
        DomainKind::FlatComplex { dim, .. } => {
            // multi-indices beta over dim slots with |beta| = m
            let mut terms = Vec::new();
            let mut beta = vec![0u8; *dim];
            enumerate_fixed_weight(&mut beta, 0, w as u8, &mut |b: &[u8]| {
                let mut fact = S::one();
                for &bi in b {
                    fact = fact * factorial_s::<S>(bi as usize);
                }
                terms.push((
                    MultiIndex {
                        holo: b.to_vec(),
                        anti: b.to_vec(),
                    },
                    S::one() / fact,
                ));
            });
            Ok(EPoly { terms })
        }
        DomainKind::DiagonalInProductDisc { .. } => Ok(EPoly {
            terms: vec![(
                MultiIndex::wirtinger1(w as u8, w as u8),
                S::one() / factorial_s::<S>(w),
            )],
        }),
    }
}

fn enumerate_fixed_weight(buf: &mut [u8], pos: usize, left: u8, f: &mut impl FnMut(&[u8])) {
    if pos == buf.len() - 1 {
        buf[pos] = left;
        f(buf);
        return;
    }
    for v in 0..=left {
        buf[pos] = v;
        enumerate_fixed_weight(buf, pos + 1, left - v, f);
    }
}

/// P^m constants on a scalar domain: keys (alpha, beta) with
/// alpha + beta = 2m, value eps^alpha conj(eps)^beta / (alpha! beta!).
pub(crate) fn p_scalar<S: Scalar>(eps: &S, w: usize) -> Vec<((u8, u8), S)> {
    let mut out = Vec::new();
    for alpha in 0..=(2 * w) as u8 {
        let beta = (2 * w) as u8 - alpha;
        let mut v = S::one() / (factorial_s::<S>(alpha as usize) * factorial_s::<S>(beta as usize));
        for _ in 0..alpha {
            v = v * eps.clone();
        }
        for _ in 0..beta {
            v = v * eps.conj();
        }
        out.push(((alpha, beta), v));
    }
    out
}

/// P^m constants on a pair domain: keys (hol=(h1,h2), anti=(a1,a2)) with
/// h1 + a2 = h2 + a1 = m, value m!/(h1! h2! a1! a2!) a^{a2} conj(a)^{h2}.
pub(crate) fn p_pair<S: Scalar>(a: &S, w: usize) -> Vec<(((u8, u8), (u8, u8)), S)> {
    let mut out = Vec::new();
    let mfact = factorial_s::<S>(w);
    for h1 in 0..=w as u8 {
        let a2 = w as u8 - h1;
        for h2 in 0..=w as u8 {
            let a1 = w as u8 - h2;
            let mut v = mfact.clone()
                / (factorial_s::<S>(h1 as usize)
                    * factorial_s::<S>(h2 as usize)
                    * factorial_s::<S>(a1 as usize)
                    * factorial_s::<S>(a2 as usize));
            for _ in 0..a2 {
                v = v * a.clone();
            }
            for _ in 0..h2 {
                v = v * a.conj();
            }
            out.push((((h1, h2), (a1, a2)), v));
        }
    }
    out
}

/// The constants P^m_{alpha,beta} of the fiber pullback of E^m_C, keyed by
/// (holomorphic, antiholomorphic) Wirtinger multi-indices.
pub fn p_constants<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
) -> Result<HashMap<(MultiIndex, MultiIndex), S>, MoyalError> {
    let w = weight_of(m)?;
    let mut map = HashMap::new();
    match &dom.kind {
        DomainKind::FlatReal { epsilon, .. } | DomainKind::IntervalInDisc { epsilon } => {
            for ((al, be), v) in p_scalar(epsilon, w) {
                map.insert((MultiIndex::holo1(al), MultiIndex::holo1(be)), v);
            }
        }
        DomainKind::FlatComplex { a, .. } | DomainKind::DiagonalInProductDisc { a } => {
            for (((h1, h2), (a1, a2)), v) in p_pair(a, w) {
                map.insert((MultiIndex::holo2(h1, h2), MultiIndex::anti2(a1, a2)), v);
            }
        }
    }
    Ok(map)
}

// ---------- transvection jets ----------

fn is_flat<S: Scalar>(dom: &DomainSpec<S>) -> bool {
    matches!(
        dom.kind,
        DomainKind::FlatReal { .. } | DomainKind::FlatComplex { .. }
    )
}

/// Centered slot jet T = gamma_base(y) - base for one disc slot, with the
/// base and its conjugate given as jets (constant or promoted).
fn slot_t_jet<S: Scalar>(
    flat: bool,
    base: &Jet<S>,
    conj_base: &Jet<S>,
    yvar: usize,
) -> Result<Jet<S>, MoyalError> {
    let n = base.nvars();
    let k = base.order();
    let y = Jet::variable(n, k, yvar);
    if flat {
        return Ok(y);
    }
    let den = Jet::constant(n, k, S::one()).add(&conj_base.mul(&y)?)?;
    let num = base.add(&y)?;
    Ok(num.mul(&den.recip()?)?.sub(base)?)
}

/// Public form of the transvection jet: per-coordinate jets of
/// y -> gamma_x(y) at y = 0 (constant term x).
pub fn transvection_jet<S: Scalar>(
    dom: &DomainSpec<S>,
    x_param: &S,
    order: usize,
) -> Result<Vec<Jet<S>>, MoyalError> {
    let flat = is_flat(dom);
    if dom.is_pair_type() {
        let z0 = Jet::constant(1, order, x_param.clone());
        let z0c = Jet::constant(1, order, x_param.conj());
        let t1 = slot_t_jet(flat, &z0, &z0c, 0)?;
        let t2 = slot_t_jet(flat, &z0c, &z0, 0)?;
        Ok(vec![
            t1.add(&Jet::constant(1, order, x_param.clone()))?,
            t2.add(&Jet::constant(1, order, x_param.conj()))?,
        ])
    } else {
        let x0 = Jet::constant(1, order, x_param.clone());
        let t = slot_t_jet(flat, &x0, &x0, 0)?;
        Ok(vec![t.add(&x0)?])
    }
}

/// gamma^alpha_iota coefficients at a real-form point:
/// d^alpha (H o gamma_x)(0) = sum_iota gamma^alpha_iota(x) (d^iota H)(x).
/// Computed as gamma^alpha_iota = (alpha!/iota!) [y^alpha] (gamma_x(y)-x)^iota.
pub fn gamma_coeffs<S: Scalar>(
    dom: &DomainSpec<S>,
    x_param: &S,
    alpha: &MultiIndex,
    order: usize,
) -> Result<HashMap<MultiIndex, S>, MoyalError> {
    let mut out = HashMap::new();
    if dom.is_pair_type() {
        let (a1, a2) = (alpha.holo[0], *alpha.holo.get(1).unwrap_or(&0));
        let flat = is_flat(dom);
        let z0 = Jet::constant(1, order, x_param.clone());
        let z0c = Jet::constant(1, order, x_param.conj());
        let t1 = slot_t_jet(flat, &z0, &z0c, 0)?;
        let t2 = slot_t_jet(flat, &z0c, &z0, 0)?;
        for i1 in 0..=a1 {
            for i2 in 0..=a2 {
                let c1 = slot_gamma(&t1, a1, i1)?;
                let c2 = slot_gamma(&t2, a2, i2)?;
                let v = c1 * c2;
                if !v.is_zero() {
                    out.insert(
                        MultiIndex {
                            holo: vec![i1, i2],
                            anti: vec![],
                        },
                        v,
                    );
                }
            }
        }
    } else {
        let a = alpha.holo[0];
        let flat = is_flat(dom);
        let x0 = Jet::constant(1, order, x_param.clone());
        let t = slot_t_jet(flat, &x0, &x0, 0)?;
        for i in 0..=a {
            let v = slot_gamma(&t, a, i)?;
            if !v.is_zero() {
                out.insert(MultiIndex::holo1(i), v);
            }
        }
    }
    Ok(out)
}

/// (alpha!/iota!) [y^alpha] T^iota for a one-variable slot jet T.
fn slot_gamma<S: Scalar>(t: &Jet<S>, alpha: u8, iota: u8) -> Result<S, MoyalError> {
    if iota == 0 {
        return Ok(if alpha == 0 { S::one() } else { S::zero() });
    }
    let p = t.pow(iota as usize)?;
    let c = p.coeff(&[alpha]);
    Ok(c * factorial_s::<S>(alpha as usize) / factorial_s::<S>(iota as usize))
}

// ---------- psi^m on smooth inputs ----------

/// psi^m F(x) = E^m_C(F o gamma_x o Lambda)(0), the invariant fiber
/// component of weight m.
pub fn psi_m<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
    f: &SmoothFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let w = weight_of(m)?;
    if w == 0 {
        // zeroth component is evaluation at the real point
        let x = dom.real_point(x_param);
        return Ok(OperatorValue::plain(f.value(x.coords())));
    }
    let flat = is_flat(dom);
    match (&dom.kind, f) {
        (DomainKind::FlatReal { epsilon, .. }, SmoothFn::Sesqui1(terms))
        | (DomainKind::IntervalInDisc { epsilon }, SmoothFn::Sesqui1(terms)) => {
            let k = 2 * w;
            let x0 = Jet::constant(1, k, x_param.clone());
            let t = slot_t_jet(flat, &x0, &x0, 0)?;
            let gx0 = x_param.clone();
            let mut acc = S::zero();
            for (h, wfn) in terms {
                let hj = Jet::from_taylor1(k, &h.taylor(&gx0, k)).compose_raw(&[t.clone()])?;
                let wj = Jet::from_taylor1(k, &wfn.taylor(&gx0, k)).compose_raw(&[t.clone()])?;
                // y -> eps u on the holomorphic side, conj on the other
                let hu = hj.scale_var(0, epsilon);
                let wu = wj.conj().scale_var(0, &epsilon.conj());
                acc = acc + hu.mul(&wu)?.coeff(&[k as u8]);
            }
            Ok(OperatorValue::plain(acc))
        }
        (DomainKind::FlatComplex { a, .. }, SmoothFn::Sesqui2(terms))
        | (DomainKind::DiagonalInProductDisc { a }, SmoothFn::Sesqui2(terms)) => {
            let k = 2 * w;
            let z0 = Jet::constant(1, k, x_param.clone());
            let z0c = Jet::constant(1, k, x_param.conj());
            let t1 = slot_t_jet(flat, &z0, &z0c, 0)?;
            let t2 = slot_t_jet(flat, &z0c, &z0, 0)?;
            // substitutions into (u, ubar) variables
            let u = Jet::<S>::variable(2, k, 0);
            let ubar = Jet::<S>::variable(2, k, 1);
            let mut acc = S::zero();
            for (hf, wf) in terms {
                let hol = tensor_jet_on_fiber(hf, &t1, &t2, x_param, k, a, &u, &ubar, false)?;
                let anti = tensor_jet_on_fiber(wf, &t1, &t2, x_param, k, a, &u, &ubar, true)?;
                let prod = hol.mul(&anti)?;
                acc = acc + prod.coeff(&[w as u8, w as u8]) * factorial_s::<S>(w);
            }
            Ok(OperatorValue::plain(acc))
        }
        _ => Err(MoyalError::InputShape(
            "function representation does not match the domain type".into(),
        )),
    }
}

/// Jet in (u, ubar) of H(gamma_x(Lambda u)) (or its conjugate) for a
/// tensor-type H on a pair domain.
#[allow(clippy::too_many_arguments)]
fn tensor_jet_on_fiber<S: Scalar>(
    h: &HoloFn<S>,
    t1: &Jet<S>,
    t2: &Jet<S>,
    x_param: &S,
    k: usize,
    a: &S,
    u: &Jet<S>,
    ubar: &Jet<S>,
    conjugate: bool,
) -> Result<Jet<S>, MoyalError> {
    let (f, gstar) = match h {
        HoloFn::Tensor { f, gstar } => (f, gstar),
        HoloFn::Scalar1(_) => {
            return Err(MoyalError::InputShape(
                "pair domain needs tensor-type functions".into(),
            ))
        }
    };
    let fj = Jet::from_taylor1(k, &f.taylor(x_param, k)).compose_raw(&[t1.clone()])?;
    let gj = Jet::from_taylor1(k, &gstar.taylor(&x_param.conj(), k)).compose_raw(&[t2.clone()])?;
    if !conjugate {
        // y1 = u, y2 = conj(a) ubar
        let f2 = fj.compose_raw(&[u.clone()])?;
        let g2 = gj.compose_raw(&[ubar.scale(&a.conj())])?;
        Ok(f2.mul(&g2)?)
    } else {
        // conj: y1bar = ubar, y2bar = a u
        let f2 = fj.conj().compose_raw(&[ubar.clone()])?;
        let g2 = gj.conj().compose_raw(&[u.scale(a)])?;
        Ok(f2.mul(&g2)?)
    }
}

// ---------- psi^m_kappa for holomorphic inputs ----------

/// psi^m_kappa H(x) = sum_{A,B} P^m_{A,B} d^A(H o gamma_x)(0)
/// conj(gamma^B_kappa(x)); the building block of the Moyal component.
pub fn psi_m_kappa<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
    kappa: &MultiIndex,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let w = weight_of(m)?;
    let flat = is_flat(dom);
    match (&dom.kind, h) {
        (DomainKind::FlatReal { epsilon, .. }, HoloFn::Scalar1(hf))
        | (DomainKind::IntervalInDisc { epsilon }, HoloFn::Scalar1(hf)) => {
            let kap = kappa.holo[0];
            if kap as usize > 2 * w {
                return Ok(OperatorValue::plain(S::zero()));
            }
            let k = 2 * w;
            let x0 = Jet::constant(1, k, x_param.clone());
            let t = slot_t_jet(flat, &x0, &x0, 0)?;
            let hj = Jet::from_taylor1(k, &hf.taylor(x_param, k)).compose_raw(&[t.clone()])?;
            let mut acc = S::zero();
            for ((al, be), p) in p_scalar(epsilon, w) {
                let gb = slot_gamma(&t, be, kap)?;
                if gb.is_zero() {
                    continue;
                }
                let da = hj.coeff(&[al]) * factorial_s::<S>(al as usize);
                acc = acc + p * da * gb.conj();
            }
            Ok(OperatorValue::plain(acc))
        }
        (DomainKind::FlatComplex { a, .. }, HoloFn::Tensor { f, gstar })
        | (DomainKind::DiagonalInProductDisc { a }, HoloFn::Tensor { f, gstar }) => {
            let (k1, k2) = (kappa.holo[0], *kappa.holo.get(1).unwrap_or(&0));
            if k1 as usize > w || k2 as usize > w {
                return Ok(OperatorValue::plain(S::zero()));
            }
            let k = w;
            let z0 = Jet::constant(1, k, x_param.clone());
            let z0c = Jet::constant(1, k, x_param.conj());
            let t1 = slot_t_jet(flat, &z0, &z0c, 0)?;
            let t2 = slot_t_jet(flat, &z0c, &z0, 0)?;
            let fj = Jet::from_taylor1(k, &f.taylor(x_param, k)).compose_raw(&[t1.clone()])?;
            let gj = Jet::from_taylor1(k, &gstar.taylor(&x_param.conj(), k))
                .compose_raw(&[t2.clone()])?;
            let mut acc = S::zero();
            for (((h1, h2), (a1, a2)), p) in p_pair(a, w) {
                let g1 = slot_gamma(&t1, a1, k1)?;
                let g2 = slot_gamma(&t2, a2, k2)?;
                if g1.is_zero() || g2.is_zero() {
                    continue;
                }
                let da = fj.coeff(&[h1])
                    * factorial_s::<S>(h1 as usize)
                    * gj.coeff(&[h2])
                    * factorial_s::<S>(h2 as usize);
                acc = acc + p * da * (g1 * g2).conj();
            }
            Ok(OperatorValue::plain(acc))
        }
        _ => Err(MoyalError::InputShape(
            "function representation does not match the domain type".into(),
        )),
    }
}

// ---------- the Moyal component rho^m ----------

/// rho^m H(x) = h(x,x)^{p/2} sum_kappa (-1)^{|kappa|}
/// d_R^kappa [ h^{-p/2} psi^m_kappa H ](x), with the outer derivatives
/// realized by promoting x to jet variables.
pub fn rho_m<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let w = weight_of(m)?;
    if w == 0 {
        let x = dom.real_point(x_param);
        return Ok(OperatorValue::plain(h.value(x.coords())));
    }
    if dom.is_pair_type() {
        rho_m_pair(dom, w, h, x_param)
    } else {
        rho_m_scalar(dom, w, h, x_param)
    }
}

fn rho_m_scalar<S: Scalar>(
    dom: &DomainSpec<S>,
    w: usize,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let hf = match h {
        HoloFn::Scalar1(hf) => hf,
        _ => {
            return Err(MoyalError::InputShape(
                "scalar domain needs one-variable holomorphic input".into(),
            ))
        }
    };
    let eps = match &dom.kind {
        DomainKind::FlatReal { epsilon, .. } | DomainKind::IntervalInDisc { epsilon } => epsilon,
        _ => unreachable!(),
    };
    let flat = is_flat(dom);
    let k = 4 * w; // outer t-order 2m plus inner y-order 2m
                   // promoted base point x0 + t: vars (t, y) = (0, 1)
    let xt = Jet::constant(2, k, x_param.clone()).add(&Jet::variable(2, k, 0))?;
    let t = slot_t_jet(flat, &xt, &xt, 1)?;
    // H o gamma: outer taylor at x0 composed with [t-var + T]
    let inner = Jet::variable(2, k, 0).add(&t)?;
    let hj = Jet::from_taylor1(k, &hf.taylor(x_param, k)).compose_raw(&[inner])?;
    // h_C(x,x)^{-p/2} jet: interval (1 - x^2)^{-1}, flat 1
    let hpow = if flat {
        Jet::constant(2, k, S::one())
    } else {
        Jet::constant(2, k, S::one()).sub(&xt.mul(&xt)?)?.recip()?
    };
    // powers of T in y for the gamma coefficients
    let mut tpow = vec![Jet::constant(2, k, S::one())];
    for j in 1..=2 * w {
        tpow.push(tpow[j - 1].mul(&t)?);
    }
    let pk = p_scalar(eps, w);
    let mut total = S::zero();
    for kap in 0..=(2 * w) as u8 {
        let mut psi = Jet::zero(2, k);
        for ((al, be), p) in &pk {
            if kap > *be {
                continue;
            }
            // gamma^beta_kappa as a t-jet: (beta!/kappa!) [y^beta] T^kappa
            let gb = if kap == 0 {
                if *be == 0 {
                    Jet::constant(2, k, S::one())
                } else {
                    continue;
                }
            } else {
                tpow[kap as usize]
                    .coeff_of(1, *be)
                    .scale(&(factorial_s::<S>(*be as usize) / factorial_s::<S>(kap as usize)))
            };
            // d^alpha (H o gamma)(0) as a t-jet
            let da = hj.coeff_of(1, *al).scale(&factorial_s::<S>(*al as usize));
            psi = psi.add(&da.mul(&gb.conj())?.scale(p))?;
        }
        let inner_jet = hpow.mul(&psi)?;
        let sign = if kap % 2 == 0 { S::one() } else { -S::one() };
        let mut e = [0u8; 2];
        e[0] = kap;
        total = total + sign * factorial_s::<S>(kap as usize) * inner_jet.coeff(&e);
    }
    let hx = if flat {
        S::one()
    } else {
        S::one() - x_param.clone() * x_param.clone()
    };
    Ok(OperatorValue::plain(hx * total))
}

fn rho_m_pair<S: Scalar>(
    dom: &DomainSpec<S>,
    w: usize,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let (f, gstar) = match h {
        HoloFn::Tensor { f, gstar } => (f, gstar),
        _ => {
            return Err(MoyalError::InputShape(
                "pair domain needs tensor-type holomorphic input".into(),
            ))
        }
    };
    let a = match &dom.kind {
        DomainKind::FlatComplex { a, .. } | DomainKind::DiagonalInProductDisc { a } => a,
        _ => unreachable!(),
    };
    let flat = is_flat(dom);
    let k = 3 * w; // outer (s,tau)-order 2m plus slot y-order m
                   // vars: s = 0 (z-direction), tau = 1 (zbar-direction), y = 2 (own slot)
    let z = Jet::constant(3, k, x_param.clone()).add(&Jet::variable(3, k, 0))?;
    let zc = Jet::constant(3, k, x_param.conj()).add(&Jet::variable(3, k, 1))?;
    let t1 = slot_t_jet(flat, &z, &zc, 2)?;
    let t2 = slot_t_jet(flat, &zc, &z, 2)?;
    let f_side = Jet::from_taylor1(k, &f.taylor(x_param, k))
        .compose_raw(&[Jet::variable(3, k, 0).add(&t1)?])?;
    let g_side = Jet::from_taylor1(k, &gstar.taylor(&x_param.conj(), k))
        .compose_raw(&[Jet::variable(3, k, 1).add(&t2)?])?;
    // h_C(x,x)^{-p/2} jet = (1 - z zbar)^{-2} on the disc, 1 on flat
    let hpow = if flat {
        Jet::constant(3, k, S::one())
    } else {
        let hbase = Jet::constant(3, k, S::one()).sub(&z.mul(&zc)?)?;
        hbase.mul(&hbase)?.recip()?
    };
    let mut t1pow = vec![Jet::constant(3, k, S::one())];
    let mut t2pow = vec![Jet::constant(3, k, S::one())];
    for j in 1..=w {
        t1pow.push(t1pow[j - 1].mul(&t1)?);
        t2pow.push(t2pow[j - 1].mul(&t2)?);
    }
    let pk = p_pair(a, w);
    let mut total = S::zero();
    for k1 in 0..=w as u8 {
        for k2 in 0..=w as u8 {
            let mut psi = Jet::zero(3, k);
            let mut nonzero = false;
            for (((h1, h2), (a1, a2)), p) in &pk {
                let g1 = gamma_jet(&t1pow, *a1, k1, &factorial_s::<S>(*a1 as usize), k)?;
                let g2 = gamma_jet(&t2pow, *a2, k2, &factorial_s::<S>(*a2 as usize), k)?;
                let (g1, g2) = match (g1, g2) {
                    (Some(g1), Some(g2)) => (g1, g2),
                    _ => continue,
                };
                let da = f_side
                    .coeff_of(2, *h1)
                    .scale(&factorial_s::<S>(*h1 as usize))
                    .mul(
                        &g_side
                            .coeff_of(2, *h2)
                            .scale(&factorial_s::<S>(*h2 as usize)),
                    )?;
                // conj of the gamma pair: Wirtinger conjugation swaps (s, tau)
                let gb = g1.mul(&g2)?.conj_swap(0, 1);
                psi = psi.add(&da.mul(&gb)?.scale(p))?;
                nonzero = true;
            }
            if !nonzero {
                continue;
            }
            let inner_jet = hpow.mul(&psi)?;
            // adjoint with the Hermitian crossing: read tau^{k1} s^{k2}
            let sign = if (k1 + k2) % 2 == 0 {
                S::one()
            } else {
                -S::one()
            };
            let c = inner_jet.coeff(&[k2, k1, 0]);
            total =
                total + sign * factorial_s::<S>(k1 as usize) * factorial_s::<S>(k2 as usize) * c;
        }
    }
    let hx = if flat {
        S::one()
    } else {
        let b = S::one() - x_param.clone() * x_param.conj();
        b.clone() * b
    };
    Ok(OperatorValue::plain(hx * total))
}

/// (a!/k!) [y^a] T^k as a jet in the outer variables, None when zero.
fn gamma_jet<S: Scalar>(
    tpow: &[Jet<S>],
    alpha: u8,
    kap: u8,
    alpha_fact: &S,
    _k: usize,
) -> Result<Option<Jet<S>>, MoyalError> {
    if kap == 0 {
        if alpha == 0 {
            let j = Jet::constant(tpow[0].nvars(), tpow[0].order(), S::one());
            return Ok(Some(j));
        }
        return Ok(None);
    }
    if (kap as usize) >= tpow.len() && alpha < kap {
        return Ok(None);
    }
    if alpha < kap {
        return Ok(None);
    }
    let j = tpow[kap as usize]
        .coeff_of(2, alpha)
        .scale(&(alpha_fact.clone() / factorial_s::<S>(kap as usize)));
    Ok(Some(j))
}

// ---------- flat closed forms ----------

/// Closed forms of rho^m on the flat domains: the oracle for the jet route.
pub fn rho_closed_form_flat<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let w = weight_of(m)?;
    match (&dom.kind, h) {
        (DomainKind::FlatReal { epsilon, .. }, HoloFn::Scalar1(hf)) => {
            // (eps - conj eps)^{2m} / (2m)! d^{2m} H
            let t = hf.taylor(x_param, 2 * w);
            let s = epsilon.clone() - epsilon.conj();
            let mut c = S::one();
            for _ in 0..2 * w {
                c = c * s.clone();
            }
            Ok(OperatorValue::plain(c * t[2 * w].clone()))
        }
        (DomainKind::FlatComplex { a, .. }, HoloFn::Tensor { f, gstar }) => {
            // (-1)^m / m! |1-a|^{2m} f^{(m)}(z) conj(g^{(m)}(z))
            let ft = f.taylor(x_param, w);
            let gt = gstar.taylor(&x_param.conj(), w);
            let b = (S::one() - a.clone()) * (S::one() - a.conj());
            let mut c = if w % 2 == 0 { S::one() } else { -S::one() };
            for _ in 0..w {
                c = c * b.clone();
            }
            // (f^{(m)} = m! ft[m], likewise for g*) and the 1/m! prefactor
            let fact = factorial_s::<S>(w);
            Ok(OperatorValue::plain(
                c * fact * ft[w].clone() * gt[w].clone(),
            ))
        }
        _ => Err(MoyalError::InputShape(
            "closed form defined on flat domains".into(),
        )),
    }
}

// ---------- complex-case operators on the disc ----------

/// E^m f(z) := E^m_R(f o gamma_z)(0) on the unit disc (complex case),
/// for smooth f given as sesquiholomorphic pairs.
pub fn script_e_m<S: Scalar>(m: usize, f: &SmoothFn<S>, z_param: &S) -> Result<S, MoyalError> {
    if m > MAX_WEIGHT {
        return Err(MoyalError::JetBudget(m));
    }
    let terms = match f {
        SmoothFn::Sesqui1(t) => t,
        _ => {
            return Err(MoyalError::InputShape(
                "disc operator needs one-variable pairs".into(),
            ))
        }
    };
    if m == 0 {
        let mut acc = S::zero();
        for (h, w) in terms {
            acc = acc + h.value(z_param) * w.value(z_param).conj();
        }
        return Ok(acc);
    }
    let k = 2 * m;
    // one-variable disc transvection jet at complex center z
    let z0 = Jet::constant(1, k, z_param.clone());
    let z0c = Jet::constant(1, k, z_param.conj());
    let t = slot_t_jet(false, &z0, &z0c, 0)?;
    let mut acc = S::zero();
    for (h, w) in terms {
        let hj = Jet::from_taylor1(k, &h.taylor(z_param, k)).compose_raw(&[t.clone()])?;
        let wj = Jet::from_taylor1(k, &w.taylor(z_param, k)).compose_raw(&[t.clone()])?;
        // embed hol part in y (var 0), anti part in ybar (var 1)
        let h2 = embed_1to2(&hj, 0, k)?;
        let w2 = embed_1to2(&wj.conj(), 1, k)?;
        let prod = h2.mul(&w2)?;
        acc = acc + prod.coeff(&[m as u8, m as u8]) * factorial_s::<S>(m);
    }
    Ok(acc)
}

fn embed_1to2<S: Scalar>(j: &Jet<S>, var: usize, k: usize) -> Result<Jet<S>, MoyalError> {
    Ok(j.compose_raw(&[Jet::variable(2, k, var)])?)
}

/// A_m(f, conj g)(z) = sum_kappa h^p (-d)^kappa (h^{-p} f R^m_kappa conj g)(z)
/// on the disc (p = 2), with R^m_kappa extracted from E^m(f conj g).
pub fn a_m_complex<S: Scalar>(
    m: usize,
    f: &std::rc::Rc<dyn Holo1<S>>,
    g: &std::rc::Rc<dyn Holo1<S>>,
    z_param: &S,
) -> Result<S, MoyalError> {
    if m > MAX_WEIGHT {
        return Err(MoyalError::JetBudget(m));
    }
    if m == 0 {
        return Ok(f.value(z_param) * g.value(z_param).conj());
    }
    let k = 2 * m;
    // promoted center: vars s = 0 (z-dir), tau = 1 (zbar-dir), y = 2
    let z = Jet::constant(3, k, z_param.clone()).add(&Jet::variable(3, k, 0))?;
    let zc = Jet::constant(3, k, z_param.conj()).add(&Jet::variable(3, k, 1))?;
    let t = slot_t_jet(false, &z, &zc, 2)?;
    // gamma^m_kappa(z)-jets and conj(d^m (g o gamma_z)(0))-jet
    let gj = Jet::from_taylor1(k, &g.taylor(z_param, k))
        .compose_raw(&[Jet::variable(3, k, 0).add(&t)?])?;
    let dmg = gj.coeff_of(2, m as u8).scale(&factorial_s::<S>(m));
    let dmg_conj = dmg.conj_swap(0, 1);
    let fj = Jet::from_taylor1(k, &f.taylor(z_param, k)).compose_raw(&[Jet::variable(3, k, 0)])?;
    let hbase = Jet::constant(3, k, S::one()).sub(&z.mul(&zc)?)?;
    let hm2 = hbase.mul(&hbase)?.recip()?;
    let mut tpow = vec![Jet::constant(3, k, S::one())];
    for j in 1..=m {
        tpow.push(tpow[j - 1].mul(&t)?);
    }
    let mfact = factorial_s::<S>(m);
    let mut total = S::zero();
    for kap in 0..=m as u8 {
        // R^m_kappa conj(g) = gamma^m_kappa / m! * conj(d^m (g o gamma)(0))
        let gk = if kap == 0 {
            continue; // gamma^m_0 = 0 for m >= 1
        } else {
            tpow[kap as usize]
                .coeff_of(2, m as u8)
                .scale(&(mfact.clone() / factorial_s::<S>(kap as usize)))
        };
        let r = gk.scale(&(S::one() / mfact.clone())).mul(&dmg_conj)?;
        let inner = hm2.mul(&fj)?.mul(&r)?;
        let sign = if kap % 2 == 0 { S::one() } else { -S::one() };
        total = total + sign * factorial_s::<S>(kap as usize) * inner.coeff(&[kap, 0, 0]);
    }
    let b = S::one() - z_param.clone() * z_param.conj();
    Ok(b.clone() * b * total)
}

// ---------- expansion partial sums ----------

/// sum_{m <= M} rho^m H(x) / [nu]_m with supplied inverse coefficients
/// (inv[m] = 1/[nu]_m, normalized so inv[0] = 1).
pub fn expansion_partial_sum<S: Scalar>(
    dom: &DomainSpec<S>,
    h: &HoloFn<S>,
    x_param: &S,
    inv_coeffs: &[f64],
) -> Result<num_complex::Complex64, MoyalError> {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for (m, inv) in inv_coeffs.iter().enumerate() {
        let v = rho_m(dom, &Partition::single(m as u32), h, x_param)?;
        acc += v.value.to_c64() * *inv;
    }
    Ok(acc)
}

// ---------- coefficient extraction ----------

/// Literal operator coefficients c_j of rho^m at 0 on a scalar domain:
/// rho^m H(0) = sum_j c_j H^{(2j)}(0), returned for j = 0..=m.
/// Cross-monomial contributions are checked to vanish.
pub fn scalar_rho_coefficients<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
) -> Result<Vec<S>, MoyalError> {
    let w = weight_of(m)?;
    let zero = S::zero();
    let mut out = Vec::with_capacity(w + 1);
    for j in 0..=2 * w {
        let h = HoloFn::Scalar1(std::rc::Rc::new(crate::funcs::Poly1::<S>::monomial(j)));
        let v = rho_m(dom, m, &h, &zero)?.value;
        if j % 2 == 1 {
            if !v.is_zero() && v.to_c64().norm() > 1e-12 {
                return Err(MoyalError::InputShape(format!(
                    "odd monomial z^{j} produced a nonzero value"
                )));
            }
        } else {
            out.push(v / factorial_s::<S>(j));
        }
    }
    Ok(out)
}

/// Display-normalized interval coefficients: (2m)! c_j / (eps - conj eps)^{2j}
/// for j = 1..=m, the convention in which the top coefficient is 1 and the
/// leading one is m^2 (2m-1)!.
pub fn interval_rho_display_coefficients<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
) -> Result<Vec<S>, MoyalError> {
    let eps = match &dom.kind {
        DomainKind::IntervalInDisc { epsilon } => epsilon.clone(),
        _ => return Err(MoyalError::InputShape("interval domain expected".into())),
    };
    let w = weight_of(m)?;
    let lits = scalar_rho_coefficients(dom, m)?;
    let s = eps.clone() - eps.conj();
    let s2 = s.clone() * s;
    let fact = factorial_s::<S>(2 * w);
    let mut out = Vec::with_capacity(w);
    let mut denom = S::one();
    for j in 1..=w {
        denom = denom * s2.clone();
        out.push(lits[j].clone() * fact.clone() / denom.clone());
    }
    Ok(out)
}

/// Product-domain coefficients mu_j of rho^m at 0:
/// rho^m (f (x) conj g)(0) = sum_j mu_j f^{(j)}(0) conj(g^{(j)}(0)),
/// returned for j = 0..=m. Cross terms are checked to vanish.
pub fn product_rho_coefficients<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
) -> Result<Vec<S>, MoyalError> {
    let w = weight_of(m)?;
    let zero = S::zero();
    let mut out = Vec::with_capacity(w + 1);
    for j in 0..=w {
        let h = HoloFn::tensor_conj(
            crate::funcs::Poly1::<S>::monomial(j),
            crate::funcs::Poly1::<S>::monomial(j),
        );
        let v = rho_m(dom, m, &h, &zero)?.value;
        let jf = factorial_s::<S>(j);
        out.push(v / (jf.clone() * jf));
    }
    // cross check: the (z, z^2) pairing must vanish
    if w >= 2 {
        let h = HoloFn::tensor_conj(
            crate::funcs::Poly1::<S>::monomial(1),
            crate::funcs::Poly1::<S>::monomial(2),
        );
        let v = rho_m(dom, m, &h, &zero)?.value;
        if v.to_c64().norm() > 1e-10 {
            return Err(MoyalError::InputShape("cross term did not vanish".into()));
        }
    }
    Ok(out)
}


/// rho^m with the per-derivative contributions populated: the operator
/// value decomposes as sum_iota w_iota(x) (d^iota H)(x), with the weights
/// read off the monomial basis (z - x)^iota. Scalar domains only.
pub fn rho_m_with_terms<S: Scalar>(
    dom: &DomainSpec<S>,
    m: &Partition,
    h: &HoloFn<S>,
    x_param: &S,
) -> Result<OperatorValue<S>, MoyalError> {
    let w = weight_of(m)?;
    let hf = match h {
        HoloFn::Scalar1(hf) => hf.clone(),
        _ => {
            return Err(MoyalError::InputShape(
                "term decomposition implemented for one-variable inputs".into(),
            ))
        }
    };
    let base = rho_m(dom, m, h, x_param)?;
    let taylor = hf.taylor(x_param, 2 * w);
    let mut terms = Vec::new();
    for iota in 0..=2 * w {
        // basis H_iota(z) = (z - x)^iota has (d^k H_iota)(x) = iota! delta
        let basis = HoloFn::Scalar1(std::rc::Rc::new(ShiftedMonomial {
            center: x_param.clone(),
            power: iota,
        }));
        let weight = rho_m(dom, m, &basis, x_param)?.value / factorial_s::<S>(iota);
        let deriv = taylor[iota].clone() * factorial_s::<S>(iota);
        if !weight.is_zero() {
            terms.push((MultiIndex::holo1(iota as u8), weight * deriv));
        }
    }
    Ok(OperatorValue {
        value: base.value,
        terms: Some(terms),
    })
}

/// (z - center)^power with exact jets at any point.
struct ShiftedMonomial<S: Scalar> {
    center: S,
    power: usize,
}

impl<S: Scalar> crate::funcs::Holo1<S> for ShiftedMonomial<S> {
    fn taylor(&self, at: &S, order: usize) -> Vec<S> {
        // Taylor of (z - c)^p at `at`: binomial in (at - c)
        let shift = at.clone() - self.center.clone();
        let mut out = vec![S::zero(); order + 1];
        let mut powers = vec![S::one()];
        for _ in 0..self.power {
            powers.push(powers.last().unwrap().clone() * shift.clone());
        }
        for (k, slot) in out.iter_mut().enumerate().take(self.power + 1) {
            *slot = S::from_int(crate::jet::binom_i64(self.power as i64, k as i64))
                * powers[self.power - k].clone();
        }
        out
    }
}


#[cfg(test)]
mod dim_guard_tests {
    use super::*;
    use crate::funcs::{HoloFn, Poly1};
    use crate::scalar::GaussRational as R;

    #[test]
    fn multidimensional_flat_domains_carry_data_but_not_operators() {
        let fc2 = DomainSpec::flat_complex_dim(2, R::zero()).unwrap();
        // invariant polynomial data exists in any dimension
        let e = e_poly(&fc2, &Partition::single(1)).unwrap();
        assert_eq!(e.terms.len(), 2);
        // the operator pipeline refuses the extra coordinates
        let h = HoloFn::tensor_conj(Poly1::<R>::monomial(1), Poly1::<R>::monomial(1));
        assert!(matches!(
            rho_m(&fc2, &Partition::single(1), &h, &R::zero()),
            Err(MoyalError::InputShape(_))
        ));
    }
}
