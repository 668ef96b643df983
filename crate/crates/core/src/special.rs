//! Gamma-family and hypergeometric evaluators behind the coefficient
//! formulas: log-gamma, (multi-)Pochhammer symbols, the Gauss 2F1 at
//! argument -1 through the Pfaff transformation, and the two-variable
//! hypergeometric series F1.

use crate::error::SpecialError;
use num_complex::Complex64;

/// Weakly decreasing tuple of nonnegative integers. The empty tuple is the
/// zero partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Option<Partition> {
        if parts.windows(2).all(|w| w[0] >= w[1]) {
            Some(Partition(parts))
        } else {
            None
        }
    }
    pub fn single(m: u32) -> Partition {
        Partition(vec![m])
    }
    pub fn zero() -> Partition {
        Partition(vec![])
    }
    pub fn parts(&self) -> &[u32] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// Weight |m| = sum of the parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Parameter block for the hypergeometric evaluators.
#[derive(Clone, Debug)]
pub struct HypergeomParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub gamma: f64,
    pub x: Complex64,
    pub y: Complex64,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

// Lanczos, g = 7, 9 coefficients (GSL set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for x > 0, relative error <= 1e-13.
pub fn log_gamma(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain(format!(
            "log_gamma requires x > 0, got {x}"
        )));
    }
    if x < 0.5 {
        // recurrence keeps the Lanczos kernel in its accurate zone
        return Ok(log_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + s.ln())
}

/// Rising factorial (nu)_m as a finite product.
///
/// ```
/// assert_eq!(starrest::special::pochhammer(3.0, 2), 12.0);
/// assert_eq!(starrest::special::pochhammer(3.0, 0), 1.0);
/// ```
pub fn pochhammer(nu: f64, m: u32) -> f64 {
    let mut p = 1.0;
    for j in 0..m {
        p *= nu + j as f64;
    }
    p
}

/// Generalized multi-Pochhammer symbol
/// prod_j Gamma(nu - a/2 (j-1) + m_j) / Gamma(nu - a/2 (j-1)).
///
/// Each factor is a rising factorial with integer shift, so the product
/// form is exact even when the base is negative; poles are reported.
pub fn multi_pochhammer(nu: f64, m: &Partition, a: f64) -> Result<f64, SpecialError> {
    let mut p = 1.0;
    for (j, &mj) in m.parts().iter().enumerate() {
        let base = nu - 0.5 * a * j as f64;
        for k in 0..mj {
            let arg = base + k as f64;
            if is_nonpositive_integer(arg) {
                return Err(SpecialError::GammaPole(arg));
            }
            p *= arg;
        }
        let _ = base;
    }
    Ok(p)
}

const SERIES_CAP: usize = 10_000;
const SERIES_EPS: f64 = 1e-16;

/// Kahan-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct Kahan {
    s: f64,
    c: f64,
}
impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

/// Gauss series 2F1(a,b;c;z) for |z| < 1, compensated summation.
fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialError> {
    let mut term = 1.0f64;
    let mut sum = Kahan::default();
    let mut mag = Kahan::default();
    sum.add(1.0);
    mag.add(1.0);
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum.add(term);
        mag.add(term.abs());
        if term.abs() < SERIES_EPS * mag.s.max(1e-300) {
            return Ok(sum.s);
        }
    }
    Err(SpecialError::NonConvergence {
        terms: SERIES_CAP,
        last: term.abs(),
    })
}

/// 2F1(a, b; c; -1) via the Pfaff transformation
/// 2F1(a,b;c;-1) = 2^{-a} 2F1(a, c-b; c; 1/2),
/// which converges geometrically where the raw series at -1 does not.
pub fn gauss_2f1_neg1(a: f64, b: f64, c: f64) -> Result<f64, SpecialError> {
    if is_nonpositive_integer(c) {
        return Err(SpecialError::Domain(format!("2F1 pole: c = {c}")));
    }
    let s = gauss_series(a, c - b, c, 0.5)?;
    Ok(2.0f64.powf(-a) * s)
}

/// Two-variable hypergeometric series
/// F1(alpha; beta, beta'; gamma; x, y)
///   = sum_{j,k} (alpha)_{j+k} (beta)_j (beta')_k / ((gamma)_{j+k} j! k!) x^j y^k,
/// summed by diagonal blocks j+k = s with a magnitude-based stop rule.
pub fn horn_f1(p: &HypergeomParams) -> Result<Complex64, SpecialError> {
    if is_nonpositive_integer(p.gamma) {
        return Err(SpecialError::Domain(format!(
            "F1 pole: gamma = {}",
            p.gamma
        )));
    }
    if p.x.norm() > 0.95 || p.y.norm() > 0.95 {
        return Err(SpecialError::Domain(format!(
            "F1 series restricted to |x|,|y| <= 0.95 (got {}, {})",
            p.x.norm(),
            p.y.norm()
        )));
    }
    let mut sum_re = Kahan::default();
    let mut sum_im = Kahan::default();
    let mut mag = Kahan::default();
    // ratio bookkeeping along each diagonal: precompute powers per block
    let mut xpow: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    let mut ypow: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    let mut poch_ag = 1.0f64; // (alpha)_s / (gamma)_s
    let mut beta_j: Vec<f64> = vec![1.0]; // (beta)_j / j!
    let mut betap_k: Vec<f64> = vec![1.0]; // (beta')_k / k!
    for s in 0..SERIES_CAP {
        if s > 0 {
            let sf = (s - 1) as f64;
            poch_ag *= (p.alpha + sf) / (p.gamma + sf);
            xpow.push(xpow[s - 1] * p.x);
            ypow.push(ypow[s - 1] * p.y);
            beta_j.push(beta_j[s - 1] * (p.beta + sf) / s as f64);
            betap_k.push(betap_k[s - 1] * (p.beta_prime + sf) / s as f64);
        }
        let mut block = Complex64::new(0.0, 0.0);
        for j in 0..=s {
            let k = s - j;
            block += beta_j[j] * betap_k[k] * xpow[j] * ypow[k];
        }
        let term = poch_ag * block;
        sum_re.add(term.re);
        sum_im.add(term.im);
        mag.add(term.norm());
        if s > 2 && term.norm() < SERIES_EPS * mag.s.max(1e-300) {
            return Ok(Complex64::new(sum_re.s, sum_im.s));
        }
    }
    Err(SpecialError::NonConvergence {
        terms: SERIES_CAP,
        last: mag.s,
    })
}

/// 2F1(a,b;c;x) for |x| < 1 by the raw Gauss series (exposed for oracles).
pub fn gauss_2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64, SpecialError> {
    if is_nonpositive_integer(c) {
        return Err(SpecialError::Domain(format!("2F1 pole: c = {c}")));
    }
    if x.abs() >= 1.0 {
        return Err(SpecialError::Domain(format!(
            "series needs |x| < 1, got {x}"
        )));
    }
    gauss_series(a, b, c, x)
}

/// log Beta(a, b) through log-gamma differences.
pub fn log_beta(a: f64, b: f64) -> Result<f64, SpecialError> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}
