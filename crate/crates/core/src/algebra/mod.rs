//! Algebraic substrate: complex scalars and vectors, log-space arithmetic,
//! univariate and parameter-dependent polynomials, and the exact
//! multivariate oracle.

pub mod logcomplex;
pub mod multipoly;
pub mod parampoly;
pub mod rational;
pub mod unipoly;

pub use logcomplex::{wrap_arg, Cx, LogComplex};
pub use multipoly::{compose_maps, identity_map, map_degree, MultiPoly};
pub use parampoly::ParamPolynomial;
pub use rational::{CRat, Rat};
pub use unipoly::UniPoly;

use num::complex::Complex64;

/// Sup-norm of a point of C^k: `max_i |z_i|`. All filtration geometry in
/// this crate is sup-norm shaped.
pub fn sup_norm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// log^+ t = max(0, ln t).
pub fn log_plus(t: f64) -> f64 {
    if t <= 1.0 {
        0.0
    } else {
        t.ln()
    }
}

/// log^+ applied to a sup-norm already given in log form.
pub fn log_plus_of_log(log_norm: f64) -> f64 {
    log_norm.max(0.0)
}
