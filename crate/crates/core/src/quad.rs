//! Numerical integration backend: adaptive Gauss-Legendre panels,
//! Gauss-Jacobi rules with endpoint exponents, polar tensor grids on the
//! disc, the fiber integrals psi_nu, the coefficient integrals, the
//! integral duality residuals, and decay-order fitting.

use crate::error::QuadError;
use crate::funcs::SmoothFn;
use crate::jordan::{DomainKind, DomainSpec};
use crate::moyal;
use crate::special::Partition;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

type C = Complex64;

/// Quadrature rule selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    AdaptiveGaussLegendre,
    GaussJacobi,
    PolarTensor,
}

/// Rule, target relative tolerance and refinement budget.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub rel_tol: f64,
    pub max_subdiv: u32,
    /// Angular node count for polar tensor grids.
    pub angles: usize,
}

impl QuadratureSpec {
    pub fn new(rule: QuadRule, rel_tol: f64, max_subdiv: u32) -> Result<Self, QuadError> {
        if !(1e-14..=1e-4).contains(&rel_tol) {
            return Err(QuadError::BadSpec(format!(
                "tolerance {rel_tol:e} outside [1e-14, 1e-4]"
            )));
        }
        if max_subdiv > (1 << 20) {
            return Err(QuadError::BadSpec(format!(
                "{max_subdiv} subdivisions exceed 2^20"
            )));
        }
        Ok(QuadratureSpec {
            rule,
            rel_tol,
            max_subdiv,
            angles: 128,
        })
    }
    pub fn default_tol(rel_tol: f64) -> Self {
        QuadratureSpec::new(QuadRule::GaussJacobi, rel_tol, 1 << 12).unwrap()
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::default_tol(1e-12)
    }
}

// ---------- Gauss-Legendre ----------

static GL_CACHE: Lazy<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if let Some(p) = GL_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre recurrence for P_n and P_n'
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    GL_CACHE.lock().unwrap().insert(n, (xs.clone(), ws.clone()));
    (xs, ws)
}

// ---------- Gauss-Jacobi via Golub-Welsch ----------

fn bits(x: f64) -> u64 {
    x.to_bits()
}

static GJ_CACHE: Lazy<Mutex<HashMap<(usize, u64, u64), (Vec<f64>, Vec<f64>)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Gauss-Jacobi nodes/weights on [-1,1] for the weight (1-x)^alpha (1+x)^beta.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>), QuadError> {
    let (xs, ln_ws) = gauss_jacobi_raw(n, alpha, beta)?;
    Ok((xs, ln_ws.iter().map(|lw| lw.exp()).collect()))
}

/// Same rule with the weights in log form (stable for huge exponents).
fn gauss_jacobi_raw(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>), QuadError> {
    if alpha <= -1.0 {
        return Err(QuadError::BadExponent(alpha));
    }
    if beta <= -1.0 {
        return Err(QuadError::BadExponent(beta));
    }
    let key = (n, bits(alpha), bits(beta));
    if let Some(p) = GJ_CACHE.lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    // symmetric tridiagonal Jacobi matrix (monic three-term recurrence)
    let ab = alpha + beta;
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    for k in 0..n {
        let kf = k as f64;
        d[k] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
    }
    for k in 1..n {
        let kf = k as f64;
        let num = 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab);
        let den = (2.0 * kf + ab).powi(2) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0);
        e[k - 1] = (num / den).sqrt();
    }
    // mu0 = 2^{a+b+1} B(a+1, b+1), carried in log form: for large
    // exponents mu0 alone overflows while the weights mu0 z_i^2 are tiny
    let ln_mu0 = std::f64::consts::LN_2 * (ab + 1.0)
        + crate::special::log_beta(alpha + 1.0, beta + 1.0)
            .map_err(|_| QuadError::BadExponent(alpha.min(beta)))?;
    let mut z = vec![0.0f64; n];
    z[0] = 1.0;
    imtqlx(&mut d, &mut e, &mut z).map_err(QuadError::BadSpec)?;
    let ws: Vec<f64> = z
        .iter()
        .map(|v| {
            if *v == 0.0 {
                f64::NEG_INFINITY
            } else {
                ln_mu0 + 2.0 * v.abs().ln()
            }
        })
        .collect();
    GJ_CACHE
        .lock()
        .unwrap()
        .insert(key, (d.clone(), ws.clone()));
    Ok((d, ws))
}

/// Quadrature of a positive integrand given in log form against the
/// Jacobi weight (1-t)^tau t^sigma on (0,1): log-sum-exp over the nodes,
/// stable when the factors overflow individually.
fn gj_log_sum(n: usize, tau: f64, sigma: f64, ln_g: &dyn Fn(f64) -> f64) -> Result<f64, QuadError> {
    let (xs, ln_ws) = gauss_jacobi_raw(n, tau, sigma)?;
    let scale = (sigma + tau + 1.0) * 0.5f64.ln();
    let terms: Vec<f64> = xs
        .iter()
        .zip(&ln_ws)
        .map(|(x, lw)| lw + ln_g(0.5 * (x + 1.0)) + scale)
        .collect();
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok(mx.exp() * terms.iter().map(|t| (t - mx).exp()).sum::<f64>())
}

/// Implicit QL for a symmetric tridiagonal matrix, tracking only the first
/// row of the eigenvector matrix (diagonal d, subdiagonal e, z starts e_1).
fn imtqlx(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<(), String> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let prec = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= prec * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err("tridiagonal eigenvalue iteration failed".into());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                if f.abs() >= g.abs() {
                    c = g / f;
                    r = (c * c + 1.0).sqrt();
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = (s * s + 1.0).sqrt();
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carrying z
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let ds: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let zs: Vec<f64> = idx.iter().map(|&i| z[i]).collect();
    d.copy_from_slice(&ds);
    z.copy_from_slice(&zs);
    Ok(())
}

// ---------- 1-d integration drivers ----------

/// Integral of (t-a)^sigma (b-t)^tau f(t) over (a, b), with f the smooth
/// part. Gauss-Jacobi with n-doubling until the successive-refinement
/// discrepancy meets the tolerance.
pub fn integrate_1d_c(
    f: &dyn Fn(f64) -> C,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    sigma: f64,
    tau: f64,
) -> Result<C, QuadError> {
    if sigma <= -1.0 {
        return Err(QuadError::BadExponent(sigma));
    }
    if tau <= -1.0 {
        return Err(QuadError::BadExponent(tau));
    }
    // the panel-adaptive rule applies only without endpoint weights
    if spec.rule == QuadRule::AdaptiveGaussLegendre && sigma == 0.0 && tau == 0.0 {
        return integrate_adaptive_c(f, a, b, spec);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let scale = half.powf(sigma + tau + 1.0);
    let eval = |n: usize| -> Result<C, QuadError> {
        let (xs, ws) = gauss_jacobi(n, tau, sigma)?;
        let mut acc = C::new(0.0, 0.0);
        for (x, w) in xs.iter().zip(&ws) {
            let t = mid + half * x;
            acc += *w * f(t);
        }
        Ok(scale * acc)
    };
    let mut n = 24usize;
    let mut prev = eval(n)?;
    let mut steps = 0u32;
    loop {
        n *= 2;
        let cur = eval(n)?;
        let err = (cur - prev).norm();
        if err <= spec.rel_tol * cur.norm() + 1e-15 {
            return Ok(cur);
        }
        prev = cur;
        steps += 1;
        if steps > 8 || n as u32 > spec.max_subdiv.max(1024) {
            return Err(QuadError::NonConvergence {
                tol: spec.rel_tol,
                err,
            });
        }
    }
}

/// Real-valued wrapper of [`integrate_1d_c`].
pub fn integrate_1d(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    sigma: f64,
    tau: f64,
) -> Result<f64, QuadError> {
    let g = |t: f64| C::new(f(t), 0.0);
    Ok(integrate_1d_c(&g, a, b, spec, sigma, tau)?.re)
}

/// Adaptive Gauss-Legendre by panel bisection (15-point kernel), for
/// smooth integrands without endpoint weights.
pub fn integrate_adaptive_c(
    f: &dyn Fn(f64) -> C,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<C, QuadError> {
    fn panel(f: &dyn Fn(f64) -> C, a: f64, b: f64) -> C {
        let (xs, ws) = gauss_legendre(15);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = C::new(0.0, 0.0);
        for (x, w) in xs.iter().zip(&ws) {
            acc += *w * f(mid + half * x);
        }
        half * acc
    }
    struct Ctx<'a> {
        f: &'a dyn Fn(f64) -> C,
        tol: f64,
        left: u32,
    }
    fn rec(cx: &mut Ctx, a: f64, b: f64, whole: C, scale: f64) -> Result<C, QuadError> {
        let m = 0.5 * (a + b);
        let l = panel(cx.f, a, m);
        let r = panel(cx.f, m, b);
        let err = (l + r - whole).norm();
        if err <= cx.tol * scale.max(1e-300) {
            return Ok(l + r);
        }
        if cx.left == 0 {
            return Err(QuadError::NonConvergence { tol: cx.tol, err });
        }
        cx.left -= 1;
        let half_tol_scale = scale; // keep the global scale
        Ok(rec(cx, a, m, l, half_tol_scale)? + rec(cx, m, b, r, half_tol_scale)?)
    }
    let whole = panel(f, a, b);
    let mut cx = Ctx {
        f,
        tol: spec.rel_tol,
        left: spec.max_subdiv.max(64),
    };
    rec(&mut cx, a, b, whole, whole.norm())
}

/// Integral over the unit disc of g(z) with radial weight (1-|z|^2)^tau,
/// by a polar tensor grid: Gauss-Jacobi in u = |z|^2 against (1-u)^tau,
/// trapezoid in the angle.
pub fn disc_integral(g: &dyn Fn(C) -> C, tau: f64, spec: &QuadratureSpec) -> Result<C, QuadError> {
    disc_integral_impl(g, tau, spec, true)
}

/// Variant with the angular count pinned to the configured value; exact for
/// integrands that are trigonometric polynomials in the angle (finite
/// Wirtinger-polynomial data), much cheaper than the scaled rule.
pub fn disc_integral_fixed_angles(
    g: &dyn Fn(C) -> C,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<C, QuadError> {
    disc_integral_impl(g, tau, spec, false)
}

fn disc_integral_impl(
    g: &dyn Fn(C) -> C,
    tau: f64,
    spec: &QuadratureSpec,
    scale_angles: bool,
) -> Result<C, QuadError> {
    let eval = |n: usize| -> Result<C, QuadError> {
        // scale the angular resolution with the radial one so the
        // refinement loop converges for non-rotation-symmetric integrands
        let nang = if scale_angles {
            spec.angles.max(16).max(n)
        } else {
            spec.angles.max(16)
        };
        let (us, ws) = gauss_jacobi(n, tau, 0.0)?;
        let mut acc = C::new(0.0, 0.0);
        for (x, w) in us.iter().zip(&ws) {
            let u = 0.5 * (x + 1.0); // map to (0,1)
            let r = u.sqrt();
            let mut ang = C::new(0.0, 0.0);
            for k in 0..nang {
                let th = 2.0 * std::f64::consts::PI * k as f64 / nang as f64;
                ang += g(C::from_polar(r, th));
            }
            acc += *w * ang * (2.0 * std::f64::consts::PI / nang as f64);
        }
        // dA = (1/2) du dtheta and the map u = (x+1)/2 contribute
        // (1/2) * (1/2)^{tau+1}
        Ok(acc * 0.5f64.powf(tau + 2.0))
    };
    // fixed-angle integrands carry polynomial data, so a small radial rule
    // is already exact and the first doubling confirms it
    let mut n = if scale_angles { 32usize } else { 16 };
    let mut prev = eval(n)?;
    loop {
        n *= 2;
        let cur = eval(n)?;
        let err = (cur - prev).norm();
        if err <= spec.rel_tol * cur.norm() + 1e-15 {
            return Ok(cur);
        }
        prev = cur;
        if n > 2048 {
            return Err(QuadError::NonConvergence {
                tol: spec.rel_tol,
                err,
            });
        }
    }
}

// ---------- the fiber integral psi_nu ----------

fn check_integrable(dom: &DomainSpec<C>, nu: f64) -> Result<(), QuadError> {
    let bound = dom.genus() as f64 - 1.0;
    if nu <= bound {
        return Err(QuadError::Integrability { nu, bound });
    }
    Ok(())
}

/// Raw fiber integral of F against the Berezin kernel over the fiber at x,
/// in the gamma_x-translated form. `normalized` divides by the value on
/// F = 1, matching the [nu]_0 = 1 convention.
pub fn psi_nu_at(
    dom: &DomainSpec<C>,
    nu: f64,
    f: &dyn Fn(&[C]) -> C,
    x_param: C,
    spec: &QuadratureSpec,
    normalized: bool,
) -> Result<C, QuadError> {
    check_integrable(dom, nu)?;
    let x = dom.real_point(&x_param);
    let raw = match &dom.kind {
        DomainKind::FlatReal { epsilon, .. } => {
            let cc = 1.0 - (epsilon * epsilon).re;
            let window = (60.0 / (cc * nu)).sqrt();
            let g = |t: f64| -> C {
                let y = dom.lambda_map(&C::new(t, 0.0));
                let z = dom.transvection(&x, &y).unwrap();
                f(z.coords()) * (-cc * nu * t * t).exp()
            };
            integrate_adaptive_c(&g, -window, window, spec)?
        }
        DomainKind::IntervalInDisc { epsilon } => {
            let e2 = epsilon * epsilon;
            let g = |t: f64| -> C {
                let y = dom.lambda_map(&C::new(t, 0.0));
                let z = dom.transvection(&x, &y).unwrap();
                let dnorm = ((C::new(1.0, 0.0) - e2 * t * t)
                    * (C::new(1.0, 0.0) - e2.conj() * t * t))
                    .re
                    .max(1e-300);
                f(z.coords()) * (1.0 + t * t) * dnorm.powf(-nu / 2.0)
            };
            integrate_1d_c(&g, -1.0, 1.0, spec, nu - 2.0, nu - 2.0)?
        }
        DomainKind::FlatComplex { a, .. } => {
            let b = (C::new(1.0, 0.0) - a).norm_sqr();
            let window = 60.0 / (b * nu);
            let nang = spec.angles.max(16);
            let g = |u: f64| -> C {
                let r = u.max(0.0).sqrt();
                let mut ang = C::new(0.0, 0.0);
                for k in 0..nang {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / nang as f64;
                    let y = dom.lambda_map(&C::from_polar(r, th));
                    let z = dom.transvection(&x, &y).unwrap();
                    ang += f(z.coords());
                }
                ang * (2.0 * std::f64::consts::PI / nang as f64) * (-b * nu * u).exp() * 0.5
            };
            integrate_adaptive_c(&g, 0.0, window, spec)?
        }
        DomainKind::DiagonalInProductDisc { a } => {
            let aa = a.norm_sqr();
            let merged = (1.0 - aa).abs() < 1e-12;
            let tau = if merged { 2.0 * (nu - 2.0) } else { nu - 2.0 };
            let nang = spec.angles.max(16);
            let g = |u: f64| -> C {
                let r = u.max(0.0).min(1.0).sqrt();
                let mut ang = C::new(0.0, 0.0);
                for k in 0..nang {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / nang as f64;
                    let y = dom.lambda_map(&C::from_polar(r, th));
                    let z = dom.transvection(&x, &y).unwrap();
                    ang += f(z.coords());
                }
                ang *= 2.0 * std::f64::consts::PI / nang as f64;
                let smooth = if merged {
                    1.0
                } else {
                    (1.0 - aa * u).powf(nu - 2.0)
                };
                let block = 1.0 - aa * u * u;
                let phase = (C::new(1.0, 0.0) - a * u).norm_sqr().powf(-nu);
                ang * 0.5 * block * smooth * phase
            };
            let gi = |t: f64| g(0.5 * (t + 1.0));
            let eval = |n: usize| -> Result<C, QuadError> {
                let (xs, ws) = gauss_jacobi(n, tau, 0.0)?;
                let mut acc = C::new(0.0, 0.0);
                for (xq, w) in xs.iter().zip(&ws) {
                    acc += *w * gi(*xq);
                }
                Ok(acc * 0.5f64.powf(tau + 1.0))
            };
            let mut n = 32usize;
            let mut prev = eval(n)?;
            loop {
                n *= 2;
                let cur = eval(n)?;
                let err = (cur - prev).norm();
                if err <= spec.rel_tol * cur.norm() + 1e-15 {
                    break cur;
                }
                prev = cur;
                if n > 2048 {
                    return Err(QuadError::NonConvergence {
                        tol: spec.rel_tol,
                        err,
                    });
                }
            }
        }
    };
    if !normalized {
        return Ok(raw);
    }
    let one = |_: &[C]| C::new(1.0, 0.0);
    let denom = psi_nu_at(dom, nu, &one, x_param, spec, false)?;
    Ok(raw / denom)
}

// ---------- coefficient integrals ----------

/// 1/[nu]_m by the domain's coefficient integral, normalized so that
/// [nu]_0 = 1 when `normalized` is set.
pub fn coeff_nu_m(
    dom: &DomainSpec<C>,
    nu: f64,
    m: u32,
    spec: &QuadratureSpec,
    normalized: bool,
) -> Result<f64, QuadError> {
    check_integrable(dom, nu)?;
    if m > 6 {
        return Err(QuadError::Moyal(crate::error::MoyalError::JetBudget(
            m as usize,
        )));
    }
    match &dom.kind {
        DomainKind::FlatReal { epsilon, .. } => {
            let cc = 1.0 - (epsilon * epsilon).re;
            let window = (80.0 / (cc * nu)).sqrt();
            let im = |mm: u32| {
                integrate_adaptive_c(
                    &|t: f64| C::new(t.powi(2 * mm as i32) * (-cc * nu * t * t).exp(), 0.0),
                    -window,
                    window,
                    spec,
                )
            };
            let raw = im(m)?.re;
            if normalized {
                Ok(raw / im(0)?.re)
            } else {
                Ok(raw)
            }
        }
        DomainKind::FlatComplex { a, .. } => {
            let b = (C::new(1.0, 0.0) - a).norm_sqr();
            let window = 80.0 / (b * nu);
            let im = |mm: u32| {
                integrate_adaptive_c(
                    &|u: f64| C::new(u.powi(mm as i32) * (-b * nu * u).exp(), 0.0),
                    0.0,
                    window,
                    spec,
                )
            };
            let raw = im(m)?.re;
            let mfact: f64 = (1..=m).map(|k| k as f64).product();
            if normalized {
                Ok(raw / (mfact * im(0)?.re))
            } else {
                Ok(raw / mfact)
            }
        }
        DomainKind::IntervalInDisc { epsilon } => {
            let e2 = epsilon * epsilon;
            let im = |mm: u32| {
                let g = |u: f64| -> C {
                    let dnorm = ((C::new(1.0, 0.0) - e2 * u) * (C::new(1.0, 0.0) - e2.conj() * u))
                        .re
                        .max(1e-300);
                    C::new(u.powi(mm as i32) * (1.0 + u) * dnorm.powf(-nu / 2.0), 0.0)
                };
                integrate_1d_c(&g, 0.0, 1.0, spec, -0.5, nu - 2.0)
            };
            let raw = im(m)?.re;
            if normalized {
                Ok(raw / im(0)?.re)
            } else {
                Ok(raw)
            }
        }
        DomainKind::DiagonalInProductDisc { a } => {
            let aa = a.norm_sqr();
            let merged = (1.0 - aa).abs() < 1e-12;
            let tau = if merged { 2.0 * (nu - 2.0) } else { nu - 2.0 };
            // positive integrand in log form: the power factors overflow
            // individually at large nu while the weighted product is tame
            let im = |mm: u32| -> Result<f64, QuadError> {
                let ln_g = |t: f64| -> f64 {
                    let smooth = if merged {
                        0.0
                    } else {
                        (nu - 2.0) * (1.0 - aa * t).ln()
                    };
                    let block = (1.0 - aa * t * t).ln();
                    let phase = -nu * (C::new(1.0, 0.0) - a * t).norm_sqr().ln();
                    mm as f64 * t.ln() + block + smooth + phase
                };
                let mut n = 24usize;
                let mut prev = gj_log_sum(n, tau, 0.0, &ln_g)?;
                loop {
                    n *= 2;
                    let cur = gj_log_sum(n, tau, 0.0, &ln_g)?;
                    let err = (cur - prev).abs();
                    if err <= spec.rel_tol * cur.abs() + 1e-15 {
                        return Ok(cur);
                    }
                    prev = cur;
                    if n as u32 > spec.max_subdiv.max(4096) {
                        return Err(QuadError::NonConvergence {
                            tol: spec.rel_tol,
                            err,
                        });
                    }
                }
            };
            let raw = im(m)?;
            let mfact: f64 = (1..=m).map(|k| k as f64).product();
            if normalized {
                Ok(raw / (mfact * im(0)?))
            } else {
                Ok(raw / mfact)
            }
        }
    }
}

// ---------- duality residuals ----------

fn rel_residual(lhs: C, rhs: C) -> f64 {
    (lhs - rhs).norm() / (1.0 + rhs.norm())
}

/// Residual of the restriction duality with antiholomorphic input
/// F = conj(W): the star restriction of conj(W) is its boundary-value
/// restriction, so both sides are plain integrals.
/// LHS = int_{B_R} h^{(nu-p)/2} conj(G) conj(W) dx,
/// RHS = int_{B_C} h^{-p} B_nu conj(G/I_nu) conj(W) dz.
pub fn duality_residual_restriction(
    dom: &DomainSpec<C>,
    nu: f64,
    g: &crate::funcs::Poly1<C>,
    w: &crate::funcs::Poly1<C>,
    spec: &QuadratureSpec,
) -> Result<f64, QuadError> {
    use crate::funcs::Holo1;
    check_integrable(dom, nu)?;
    let p = dom.genus() as f64;
    match &dom.kind {
        DomainKind::IntervalInDisc { .. } => {
            // the identity is stated for the calculi normalized to map the
            // constant one to the identity; in bare Lebesgue measures this
            // amounts to dividing each side by its total mass
            let lhs = integrate_1d_c(
                &|x: f64| {
                    let xc = C::new(x, 0.0);
                    g.value(&xc).conj() * w.value(&xc).conj()
                },
                -1.0,
                1.0,
                spec,
                (nu - p) / 2.0,
                (nu - p) / 2.0,
            )?;
            let mass_r = integrate_1d_c(
                &|_| C::new(1.0, 0.0),
                -1.0,
                1.0,
                spec,
                (nu - p) / 2.0,
                (nu - p) / 2.0,
            )?;
            // the B_C side integrand is h^{nu-p} I_nu conj(G W) with
            // I_nu = (1-z^2)^{-nu/2}; for polynomial inputs the angular
            // integral collapses by orthogonality, leaving one radial
            // quadrature per monomial:
            //   int = pi sum_j conj(B_j) A_j int_0^1 u^j (1-u)^{nu-2} du,
            // A_{2k} = (nu/2)_k / k! the expansion of I_nu, B = G W
            let bpoly = poly_mul(g, w);
            let radial = |j: usize| integrate_1d(&|_| 1.0, 0.0, 1.0, spec, j as f64, nu - 2.0);
            let mut rhs = C::new(0.0, 0.0);
            for (j, bj) in bpoly.coeffs.iter().enumerate() {
                if bj.norm() == 0.0 || j % 2 == 1 {
                    continue;
                }
                let k = j / 2;
                let mut a = 1.0f64;
                for q in 0..k {
                    a *= (nu / 2.0 + q as f64) / (q as f64 + 1.0);
                }
                rhs += bj.conj() * a * radial(j)?;
            }
            rhs *= std::f64::consts::PI;
            let mass_c = C::new(std::f64::consts::PI * radial(0)?, 0.0);
            Ok(rel_residual(lhs / mass_r, rhs / mass_c))
        }
        _ => Err(QuadError::Geom(crate::error::GeomError::Unsupported(
            "restriction duality test implemented on the interval domain".into(),
        ))),
    }
}

/// Residual of the change-of-variables identity
/// int_{B_R} h^{-p/2} psi_nu F = int_{B_C} h^{-p} B_nu F
/// for corner-damped smooth F on the interval domain.
pub fn duality_residual_expectation(
    dom: &DomainSpec<C>,
    nu: f64,
    f: &SmoothFn<C>,
    spec: &QuadratureSpec,
) -> Result<f64, QuadError> {
    check_integrable(dom, nu)?;
    let p = dom.genus() as f64;
    match &dom.kind {
        DomainKind::IntervalInDisc { epsilon } => {
            // LHS: int dx (1-x^2)^{-p/2} psi_nu F(x), raw psi with the
            // honest Lebesgue fiber density |Im eps| (1+t^2). The corner
            // damping of F makes psi_nu F / (1-x^2) vanish at the endpoints,
            // so the singular factor is folded into the smooth part.
            let im_eps = epsilon.im.abs();
            let fv = |coords: &[C]| f.value(coords);
            let g = |x: f64| -> C {
                let v = psi_nu_at(dom, nu, &fv, C::new(x, 0.0), spec, false).unwrap();
                v * im_eps / (1.0 - x * x).powf(p / 2.0)
            };
            let lhs = integrate_1d_c(&g, -1.0, 1.0, spec, 0.0, 0.0)?;
            // RHS: int_{B_C} (1-|z|^2)^{nu-p} |1-z^2|^{-nu} F(z) dA
            let rhs = disc_integral(
                &|z: C| {
                    let phase = (C::new(1.0, 0.0) - z * z).norm_sqr().powf(-nu / 2.0);
                    f.value(&[z]) * phase
                },
                nu - p,
                spec,
            )?;
            Ok(rel_residual(lhs, rhs))
        }
        _ => Err(QuadError::Geom(crate::error::GeomError::Unsupported(
            "expectation duality test implemented on the interval domain".into(),
        ))),
    }
}

/// Residual of the Moyal-component duality
/// int_{B_R} h^{(nu-p)/2} conj(G) rho^m H = int_{B_R} h^{-p/2}
/// psi^m(conj(G/I_nu) H), on the interval (1-d) or bidisc (2-d) domains.
pub fn duality_residual_moyal(
    dom: &DomainSpec<C>,
    nu: f64,
    m: u32,
    g: &crate::funcs::Poly1<C>,
    h: &crate::funcs::HoloFn<C>,
    spec: &QuadratureSpec,
) -> Result<f64, QuadError> {
    use crate::funcs::{HoloFn, Poly1};
    check_integrable(dom, nu)?;
    if nu.fract() != 0.0 || (nu as u32) % 2 != 0 {
        return Err(QuadError::BadSpec(
            "even integer nu required (polynomial G/I_nu)".into(),
        ));
    }
    let p = dom.genus() as f64;
    let part = Partition::single(m);
    match &dom.kind {
        DomainKind::IntervalInDisc { .. } => {
            // G~ = G (1-z^2)^{nu/2} as an exact polynomial
            let gt = poly_times_one_minus_z2_pow(g, nu as usize / 2);
            let hf = match h {
                HoloFn::Scalar1(hf) => hf.clone(),
                _ => {
                    return Err(QuadError::Moyal(crate::error::MoyalError::InputShape(
                        "scalar holomorphic input expected".into(),
                    )))
                }
            };
            let lhs = integrate_1d_c(
                &|x: f64| {
                    use crate::funcs::Holo1;
                    let xc = C::new(x, 0.0);
                    let r = moyal::rho_m(dom, &part, h, &xc).unwrap().value;
                    g.value(&xc).conj() * r
                },
                -1.0,
                1.0,
                spec,
                (nu - p) / 2.0,
                (nu - p) / 2.0,
            )?;
            let pair = SmoothFn::Sesqui1(vec![(
                hf,
                std::rc::Rc::new(gt) as std::rc::Rc<dyn crate::funcs::Holo1<C>>,
            )]);
            // the gamma-coefficient factors (1-x^2)^{kappa+iota} inside
            // psi^m make the h^{-p/2}-folded integrand vanish at +-1
            let rhs = integrate_1d_c(
                &|x: f64| {
                    let xc = C::new(x, 0.0);
                    let v = moyal::psi_m(dom, &part, &pair, &xc).unwrap().value;
                    v / (1.0 - x * x).powf(p / 2.0)
                },
                -1.0,
                1.0,
                spec,
                0.0,
                0.0,
            )?;
            Ok(rel_residual(lhs, rhs))
        }
        DomainKind::DiagonalInProductDisc { .. } => {
            // take G(u, v~) = g(u); I_nu = (1-u v~)^{-nu}, so
            // G/I_nu = g(u) (1-u v~)^nu expands into tensor pairs
            let mut pairs: Vec<(HoloFn<C>, HoloFn<C>)> = Vec::new();
            let nn = nu as usize;
            for k in 0..=nn {
                let coef = C::new(crate::jet::binom_i64(nn as i64, k as i64) as f64, 0.0)
                    * C::new(-1.0, 0.0).powu(k as u32);
                let gu = poly_mul(g, &Poly1::monomial(k));
                let wk = HoloFn::Tensor {
                    f: std::rc::Rc::new(gu),
                    gstar: std::rc::Rc::new(poly_scale(&Poly1::monomial(k), coef)),
                };
                pairs.push((h.clone(), wk));
            }
            // both integrands have finite Wirtinger-polynomial data, so the
            // fixed 128-angle trapezoid is exact in the angle
            // LHS: h_C^{(nu-p)/2} = (1-|z|^2)^{nu-2}: radial weight to the rule
            let lhs = disc_integral_fixed_angles(
                &|z: C| {
                    use crate::funcs::Holo1;
                    let r = moyal::rho_m(dom, &part, h, &z).unwrap().value;
                    g.value(&z).conj() * r
                },
                nu - p,
                spec,
            )?;
            // RHS: h_C^{-p/2} = (1-|z|^2)^{-2}; the psi^m value carries the
            // (1-|z|^2)^nu decay of G/I_nu, so the fold vanishes at the rim
            let rhs = disc_integral_fixed_angles(
                &|z: C| {
                    let v = moyal::psi_m(dom, &part, &SmoothFn::Sesqui2(pairs.clone()), &z)
                        .unwrap()
                        .value;
                    v / (1.0 - z.norm_sqr()).powi(2)
                },
                0.0,
                spec,
            )?;
            Ok(rel_residual(lhs, rhs))
        }
        _ => Err(QuadError::Geom(crate::error::GeomError::Unsupported(
            "Moyal duality test implemented on the disc-type domains".into(),
        ))),
    }
}

fn poly_mul(a: &crate::funcs::Poly1<C>, b: &crate::funcs::Poly1<C>) -> crate::funcs::Poly1<C> {
    let mut out = vec![C::new(0.0, 0.0); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    crate::funcs::Poly1::new(out)
}

fn poly_scale(a: &crate::funcs::Poly1<C>, c: C) -> crate::funcs::Poly1<C> {
    crate::funcs::Poly1::new(a.coeffs.iter().map(|x| x * c).collect())
}

/// g(z) (1-z^2)^k as an exact polynomial.
pub fn poly_times_one_minus_z2_pow(g: &crate::funcs::Poly1<C>, k: usize) -> crate::funcs::Poly1<C> {
    let mut base = crate::funcs::Poly1::new(vec![C::new(1.0, 0.0)]);
    let factor =
        crate::funcs::Poly1::new(vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0)]);
    for _ in 0..k {
        base = poly_mul(&base, &factor);
    }
    poly_mul(&base, g)
}

// ---------- decay-order fitting ----------

/// Least-squares slope of log|remainder| against log nu.
pub fn fit_decay_order(samples: &[(f64, f64)]) -> Result<f64, QuadError> {
    if samples.len() < 3 {
        return Err(QuadError::DegenerateFit(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    for &(nu, r) in samples {
        if !(nu > 0.0) || !(r > 1e-300) || !r.is_finite() {
            return Err(QuadError::DegenerateFit(format!(
                "remainder {r:e} at nu={nu} unusable (underflow or invalid)"
            )));
        }
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(nu, r) in samples {
        let x = nu.ln();
        let y = r.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(QuadError::DegenerateFit("nu grid is degenerate".into()));
    }
    Ok((n * sxy - sx * sy) / denom)
}

/// Least-squares 1/nu coefficient: fit y(nu) = 1 + K/nu.
pub fn fit_inverse_linear(samples: &[(f64, f64)]) -> Result<f64, QuadError> {
    if samples.len() < 2 {
        return Err(QuadError::DegenerateFit("need at least 2 samples".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &(nu, y) in samples {
        num += (y - 1.0) / nu;
        den += 1.0 / (nu * nu);
    }
    if den == 0.0 {
        return Err(QuadError::DegenerateFit("nu grid is degenerate".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{Holo1, HoloFn, Poly1, SmoothFn};
    use crate::special::{gauss_2f1_neg1, log_gamma, pochhammer};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::rc::Rc;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }
    fn interval_i() -> DomainSpec<C> {
        DomainSpec::interval(c(0.0, 1.0)).unwrap()
    }

    #[test]
    fn integrate_polynomial_and_beta() {
        let spec = QuadratureSpec::default();
        // int_0^1 t dt = 1/2
        let v = integrate_1d(&|t| t, 0.0, 1.0, &spec, 0.0, 0.0).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
        // int_0^1 t^{1/2} (1-t)^3 dt = B(3/2, 4)
        let v = integrate_1d(&|_| 1.0, 0.0, 1.0, &spec, 0.5, 3.0).unwrap();
        assert!((v - 0.1015873015873015873).abs() < 1e-14);
        // bad exponents rejected
        assert!(integrate_1d(&|_| 1.0, 0.0, 1.0, &spec, -1.5, 0.0).is_err());
        // configuration validation
        assert!(QuadratureSpec::new(QuadRule::GaussJacobi, 1e-15, 8).is_err());
        assert!(QuadratureSpec::new(QuadRule::GaussJacobi, 1e-3, 8).is_err());
        assert!(QuadratureSpec::new(QuadRule::GaussJacobi, 1e-9, 1 << 21).is_err());
    }

    #[test]
    fn interval_coefficient_integral_matches_hypergeometric() {
        // unnormalized coefficient integral at eps = i, m = 1, nu = 5:
        // int_0^1 t^{1/2} (1-t)^3 (1+t)^{-4} dt
        // = Gamma(m+1/2) Gamma(nu-1) / Gamma(m+nu-1/2)
        //   * 2F1(m+1/2, nu-1; m+nu-1/2; -1), frozen 0.045722313718023191
        let dom = interval_i();
        let spec = QuadratureSpec::default();
        let q = coeff_nu_m(&dom, 5.0, 1, &spec, false).unwrap();
        let pref =
            (log_gamma(1.5).unwrap() + log_gamma(4.0).unwrap() - log_gamma(5.5).unwrap()).exp();
        let closed = pref * gauss_2f1_neg1(1.5, 4.0, 5.5).unwrap();
        assert!((closed - 0.045722313718023191027).abs() < 1e-14);
        assert!((q - closed).abs() < 1e-10 * closed.abs());
    }

    #[test]
    fn coefficients_match_closed_forms_all_domains() {
        let spec = QuadratureSpec::default();
        for &nu in &[5.0f64, 10.0, 20.0] {
            for m in 0..=3u32 {
                // flat line, eps = i: c = 2
                let fr = DomainSpec::flat_real(c(0.0, 1.0)).unwrap();
                let q = coeff_nu_m(&fr, nu, m, &spec, true).unwrap();
                let closed = (log_gamma(m as f64 + 0.5).unwrap() - log_gamma(0.5).unwrap()).exp()
                    / (2.0 * nu).powi(m as i32);
                assert!(
                    (q - closed).abs() <= 1e-8 * closed,
                    "flat line nu={nu} m={m}"
                );
                // flat plane at a in {0, -1, 1/2}: [nu]_m = (nu b)^m
                for &a in &[c(0.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0)] {
                    let fc = DomainSpec::flat_complex(a).unwrap();
                    let q = coeff_nu_m(&fc, nu, m, &spec, true).unwrap();
                    let b = (c(1.0, 0.0) - a).norm_sqr();
                    let closed = (nu * b).powi(-(m as i32));
                    assert!(
                        (q - closed).abs() <= 1e-8 * closed,
                        "flat plane a={a} nu={nu} m={m}"
                    );
                }
                // bidisc a = 0: 1/(nu)_m
                let pd = DomainSpec::product_disc(c(0.0, 0.0)).unwrap();
                let q = coeff_nu_m(&pd, nu, m, &spec, true).unwrap();
                let closed = 1.0 / pochhammer(nu, m);
                assert!(
                    (q - closed).abs() <= 1e-8 * closed,
                    "bidisc a=0 nu={nu} m={m}"
                );
                // bidisc a = -1: 2/(2nu-1)_m 2F1(2nu-1, m+1; m+2nu-1; -1)
                let pd = DomainSpec::product_disc(c(-1.0, 0.0)).unwrap();
                let q = coeff_nu_m(&pd, nu, m, &spec, true).unwrap();
                let closed = 2.0 / pochhammer(2.0 * nu - 1.0, m)
                    * gauss_2f1_neg1(2.0 * nu - 1.0, m as f64 + 1.0, m as f64 + 2.0 * nu - 1.0)
                        .unwrap();
                assert!(
                    (q - closed).abs() <= 1e-8 * closed,
                    "bidisc a=-1 nu={nu} m={m}"
                );
                // interval eps = i: Gamma-prefactor ratio of 2F1 values
                let iv = interval_i();
                let q = coeff_nu_m(&iv, nu, m, &spec, true).unwrap();
                let entry = |mm: f64| {
                    (log_gamma(mm + 0.5).unwrap() + log_gamma(nu - 1.0).unwrap()
                        - log_gamma(mm + nu - 0.5).unwrap())
                    .exp()
                        * gauss_2f1_neg1(mm + 0.5, nu - 1.0, mm + nu - 0.5).unwrap()
                };
                let closed = entry(m as f64) / entry(0.0);
                assert!(
                    (q - closed).abs() <= 1e-8 * closed,
                    "interval nu={nu} m={m}"
                );
            }
        }
    }

    #[test]
    fn integrability_threshold_enforced() {
        let dom = interval_i();
        let spec = QuadratureSpec::default();
        let err = coeff_nu_m(&dom, 0.8, 1, &spec, true).unwrap_err();
        assert!(matches!(err, QuadError::Integrability { .. }));
        let one = |_: &[C]| c(1.0, 0.0);
        assert!(psi_nu_at(&dom, 1.0, &one, c(0.0, 0.0), &spec, true).is_err());
    }

    #[test]
    fn psi_of_one_is_one_after_normalization() {
        let spec = QuadratureSpec::default();
        let one = |_: &[C]| c(1.0, 0.0);
        let doms = [
            interval_i(),
            DomainSpec::interval(C::from_polar(1.0, 0.7)).unwrap(),
            DomainSpec::flat_real(c(0.0, 1.0)).unwrap(),
            DomainSpec::flat_complex(c(0.5, 0.0)).unwrap(),
            DomainSpec::product_disc(c(-1.0, 0.0)).unwrap(),
            DomainSpec::product_disc(c(0.3, 0.2)).unwrap(),
        ];
        for dom in &doms {
            let v = psi_nu_at(dom, 8.0, &one, c(0.1, 0.0), &spec, true).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn retraction_inverts_the_fiber_chart() {
        let dom = DomainSpec::interval(C::from_polar(1.0, 1.1)).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-0.8..0.8);
            let t: f64 = rng.gen_range(-0.8..0.8);
            let y = dom.lambda_map(&c(t, 0.0));
            let z = dom.transvection(&dom.real_point(&c(x, 0.0)), &y).unwrap();
            let back = crate::jordan::retraction_interval(&dom, z.0[0]).unwrap();
            assert!((back - x).abs() < 1e-11, "x={x} t={t} got {back}");
        }
    }

    #[test]
    fn conditional_expectation_identity() {
        // psi_nu((f o pi) F)(x) = f(x) psi_nu F(x), two independent
        // quadratures, interval domain at a generic gauge
        let eps = C::from_polar(1.0, 0.8);
        let dom = DomainSpec::interval(eps).unwrap();
        let spec = QuadratureSpec::default_tol(1e-12);
        let mut rng = StdRng::seed_from_u64(9);
        let nu = 10.0;
        for _ in 0..4 {
            let fcoef: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f_real = move |x: f64| fcoef[0] + fcoef[1] * x + fcoef[2] * x * x;
            let pc: Vec<C> = (0..3)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let qc: Vec<C> = (0..3)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let ppoly = Poly1::new(pc);
            let qpoly = Poly1::new(qc);
            let big_f = move |z: &[C]| ppoly.value(&z[0]) * qpoly.value(&z[0]).conj();
            let x: f64 = rng.gen_range(-0.6..0.6);
            let lhs_f = |z: &[C]| {
                let xv = crate::jordan::retraction_interval(&dom, z[0]).unwrap();
                c(f_real(xv), 0.0) * big_f(z)
            };
            let lhs = psi_nu_at(&dom, nu, &lhs_f, c(x, 0.0), &spec, true).unwrap();
            let rhs =
                c(f_real(x), 0.0) * psi_nu_at(&dom, nu, &big_f, c(x, 0.0), &spec, true).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1.0),
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn decay_fit_on_synthetic_data() {
        let samples: Vec<(f64, f64)> = [20.0f64, 40.0, 80.0, 160.0]
            .iter()
            .map(|&nu| (nu, 7.3 * nu.powf(-3.0)))
            .collect();
        let slope = fit_decay_order(&samples).unwrap();
        assert!((slope + 3.0).abs() < 1e-6);
        assert!(fit_decay_order(&samples[..2]).is_err());
        let bad = vec![(20.0, 0.0), (40.0, 0.0), (80.0, 0.0)];
        assert!(fit_decay_order(&bad).is_err());
        // inverse-linear fit: y = 1 + K/nu exactly
        let k = -7.25;
        let samples: Vec<(f64, f64)> = [100.0f64, 200.0, 400.0]
            .iter()
            .map(|&nu| (nu, 1.0 + k / nu))
            .collect();
        assert!((fit_inverse_linear(&samples).unwrap() - k).abs() < 1e-10);
    }

    #[test]
    fn duality_residuals_smoke() {
        let dom = interval_i();
        let spec = QuadratureSpec::default_tol(1e-8);
        // restriction duality with G = z, W = 1 + z^2 at nu = 8
        let g = Poly1::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let w = Poly1::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let r = duality_residual_restriction(&dom, 8.0, &g, &w, &spec).unwrap();
        assert!(r < 1e-6, "restriction residual {r}");
        // expectation duality with corner-damped F at nu = 6: both sesqui
        // slots carry (1-z^2)^{nu/2+1} so the rim feature of the disc-side
        // integrand stays resolvable
        let d1 = poly_times_one_minus_z2_pow(&Poly1::new(vec![c(1.0, 0.0), c(0.5, 0.0)]), 4);
        let d2 = poly_times_one_minus_z2_pow(
            &Poly1::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)]),
            4,
        );
        let f = SmoothFn::pair1(d1, d2);
        let r = duality_residual_expectation(&dom, 6.0, &f, &spec).unwrap();
        assert!(r < 1e-6, "expectation residual {r}");
        // Moyal duality on the interval, m = 1, G = z, H = z^2, nu = 8
        let h = HoloFn::Scalar1(Rc::new(Poly1::<C>::monomial(2)) as Rc<dyn Holo1<C>>);
        let r = duality_residual_moyal(&dom, 8.0, 1, &g, &h, &spec).unwrap();
        assert!(r < 1e-6, "moyal interval residual {r}");
        // and on the bidisc, m = 1, G = z, H = z (x) conj(z^2), nu = 8
        let pd = DomainSpec::product_disc(c(0.0, 0.0)).unwrap();
        let h = HoloFn::tensor_conj(Poly1::<C>::monomial(1), Poly1::<C>::monomial(2));
        let r = duality_residual_moyal(&pd, 8.0, 1, &g, &h, &spec).unwrap();
        assert!(r < 1e-6, "moyal bidisc residual {r}");
    }
}


#[cfg(test)]
mod threshold_tests {
    use super::*;

    #[test]
    fn near_threshold_endpoint_singularity_is_handled() {
        // nu = 1.5 puts a (1-t)^{-1/2} singularity at the rim; the Jacobi
        // weights absorb it and the table entry stays finite and positive
        let c = |re: f64, im: f64| C::new(re, im);
        let dom = DomainSpec::interval(c(0.0, 1.0)).unwrap();
        let spec = QuadratureSpec::default_tol(1e-10);
        let v = coeff_nu_m(&dom, 1.5, 1, &spec, true).unwrap();
        assert!(v.is_finite() && v > 0.0 && v < 1.0, "got {v}");
        let pd = DomainSpec::product_disc(c(0.3, 0.0)).unwrap();
        let v = coeff_nu_m(&pd, 1.5, 1, &spec, true).unwrap();
        assert!(v.is_finite() && v > 0.0 && v < 1.0, "got {v}");
        // below the threshold the integrability error fires
        assert!(matches!(
            coeff_nu_m(&dom, 0.9, 1, &spec, true),
            Err(QuadError::Integrability { .. })
        ));
    }
}
