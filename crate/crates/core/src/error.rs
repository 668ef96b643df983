//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error("argument outside the function domain: {0}")]
    Domain(String),
    #[error("gamma argument {0} hit a nonpositive integer pole")]
    GammaPole(f64),
    #[error("series failed to converge within {terms} terms (last ratio {last:e})")]
    NonConvergence { terms: usize, last: f64 },
}

#[derive(Debug, Error)]
pub enum JetError {
    #[error("jet shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("composition arity mismatch: outer has {expected} variables, got {got} inners")]
    ArityMismatch { expected: usize, got: usize },
    #[error("inner jet has nonzero constant term; recenter first")]
    NonZeroInnerConstant,
    #[error("jet has zero constant term and no inverse")]
    NonInvertible,
    #[error("recenter shift radius {0} exceeds the safe bound 0.5")]
    ShiftRadius(f64),
}

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("Bergman factor vanished; quasi-inverse undefined")]
    Singular,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("operation unsupported for this domain kind: {0}")]
    Unsupported(String),
    #[error("principal-branch assertion failed: h value {0:?} too far from the positive axis")]
    BranchViolation(num_complex::Complex64),
}

#[derive(Debug, Error)]
pub enum MoyalError {
    #[error("operator requires a holomorphic input")]
    NonHolomorphic,
    #[error("partition must have length <= 1 for the implemented domains, got {0}")]
    PartitionLength(usize),
    #[error("jet budget exceeded: requested order {0}")]
    JetBudget(usize),
    #[error("no coefficient available for (m={m}, nu={nu})")]
    MissingCoefficient { m: usize, nu: f64 },
    #[error("input shape does not fit the domain: {0}")]
    InputShape(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature failed to reach tolerance {tol:e} (last discrepancy {err:e})")]
    NonConvergence { tol: f64, err: f64 },
    #[error("integrand not integrable: nu = {nu} requires nu > {bound}")]
    Integrability { nu: f64, bound: f64 },
    #[error("endpoint exponent {0} must exceed -1")]
    BadExponent(f64),
    #[error("decay fit degenerate: {0}")]
    DegenerateFit(String),
    #[error("invalid quadrature spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Moyal(#[from] MoyalError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
