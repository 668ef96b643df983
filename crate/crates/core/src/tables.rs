//! Coefficient tables: the generalized Pochhammer symbols [nu]_m evaluated
//! from the fiber quadrature and, where available, from closed
//! hypergeometric forms.

use crate::error::QuadError;
use crate::jordan::{DomainKind, DomainSpec};
use crate::quad::{coeff_nu_m, QuadratureSpec};
use crate::special::{gauss_2f1_neg1, log_gamma, pochhammer};
use num_complex::Complex64;
use std::collections::HashMap;

type C = Complex64;

/// Per-domain table of 1/[nu]_m values.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    /// [nu]_0 = 1 normalization flag.
    pub normalized: bool,
    entries: HashMap<(u32, u64), f64>,
}

impl CoeffTable {
    pub fn empty(normalized: bool) -> Self {
        CoeffTable {
            normalized,
            entries: HashMap::new(),
        }
    }

    /// Fill by quadrature for every (m, nu) on the grid.
    pub fn fill_quadrature(
        dom: &DomainSpec<C>,
        nus: &[f64],
        m_max: u32,
        spec: &QuadratureSpec,
        normalized: bool,
    ) -> Result<Self, QuadError> {
        let mut t = CoeffTable::empty(normalized);
        for &nu in nus {
            for m in 0..=m_max {
                let v = coeff_nu_m(dom, nu, m, spec, normalized)?;
                t.entries.insert((m, nu.to_bits()), v);
            }
        }
        Ok(t)
    }

    /// Fill from the closed forms (only on domains that have them).
    pub fn fill_closed(
        dom: &DomainSpec<C>,
        nus: &[f64],
        m_max: u32,
        normalized: bool,
    ) -> Option<Self> {
        let mut t = CoeffTable::empty(normalized);
        for &nu in nus {
            for m in 0..=m_max {
                let v = closed_inv_coeff(dom, nu, m, normalized)?;
                t.entries.insert((m, nu.to_bits()), v);
            }
        }
        Some(t)
    }

    pub fn inv(&self, m: u32, nu: f64) -> Option<f64> {
        self.entries.get(&(m, nu.to_bits())).copied()
    }

    /// All entries are positive for nu above the integrability threshold.
    pub fn all_positive(&self) -> bool {
        self.entries.values().all(|v| *v > 0.0)
    }
}

/// Closed-form 1/[nu]_m where the gauge parameter admits one:
/// - flat line: Gamma(m+1/2)/(Gamma(1/2) (c nu)^m), c = 1 - Re eps^2;
/// - flat plane: (nu |1-a|^2)^{-m};
/// - bidisc diagonal at a = 0: 1/(nu)_m, and at a = -1:
///   2/(2nu-1)_m 2F1(2nu-1, m+1; m+2nu-1; -1);
/// - interval at eps = +-i: ratio of Gamma-prefactored 2F1(..; -1) values.
pub fn closed_inv_coeff(dom: &DomainSpec<C>, nu: f64, m: u32, normalized: bool) -> Option<f64> {
    match &dom.kind {
        DomainKind::FlatReal { epsilon, .. } => {
            let cc = 1.0 - (epsilon * epsilon).re;
            let mf = m as f64;
            let norm =
                (log_gamma(mf + 0.5).ok()? - log_gamma(0.5).ok()?).exp() / (cc * nu).powi(m as i32);
            if normalized {
                Some(norm)
            } else {
                // unnormalized Lebesgue convention Gamma(m+1/2)/(c nu)^{m+1/2}
                Some(log_gamma(mf + 0.5).ok()?.exp() / (cc * nu).powf(mf + 0.5))
            }
        }
        DomainKind::FlatComplex { a, .. } => {
            let b = (C::new(1.0, 0.0) - a).norm_sqr();
            if normalized {
                Some((nu * b).powi(-(m as i32)))
            } else {
                None
            }
        }
        DomainKind::IntervalInDisc { epsilon } => {
            if (epsilon.re.abs() > 1e-12) || !normalized {
                return None;
            }
            let entry = |mm: f64| -> Option<f64> {
                let pref = (log_gamma(mm + 0.5).ok()? + log_gamma(nu - 1.0).ok()?
                    - log_gamma(mm + nu - 0.5).ok()?)
                .exp();
                Some(pref * gauss_2f1_neg1(mm + 0.5, nu - 1.0, mm + nu - 0.5).ok()?)
            };
            Some(entry(m as f64)? / entry(0.0)?)
        }
        DomainKind::DiagonalInProductDisc { a } => {
            if !normalized {
                return None;
            }
            if a.norm() < 1e-12 {
                Some(1.0 / pochhammer(nu, m))
            } else if (a + C::new(1.0, 0.0)).norm() < 1e-12 {
                let f = gauss_2f1_neg1(2.0 * nu - 1.0, m as f64 + 1.0, m as f64 + 2.0 * nu - 1.0)
                    .ok()?;
                Some(2.0 / pochhammer(2.0 * nu - 1.0, m) * f)
            } else {
                None
            }
        }
    }
}
