//! Star-restriction expansions on real bounded symmetric domains.
//!
//! The library builds, for the four computable domain families (flat real
//! and complex space, the unit interval inside the disc, and the diagonal
//! disc inside the bidisc), the invariant operator tower behind the
//! asymptotic expansion of the Berezin-Toeplitz star restriction: Jordan
//! triple geometry and kernels, truncated power-series (jet) arithmetic,
//! the invariant differential operators rho^m, the coefficient symbols
//! [nu]_m by quadrature and by closed hypergeometric forms, and a
//! machine-readable catalog of real bounded symmetric domains.

pub mod catalog;
pub mod error;
pub mod funcs;
pub mod jet;
pub mod jordan;
pub mod moyal;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod tables;

pub use scalar::{GaussRational, Scalar};
