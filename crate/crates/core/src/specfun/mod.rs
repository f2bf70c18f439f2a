//! Special functions and quadrature primitives.

mod bessel;
mod gamma;
mod quad;

use thiserror::Error;

pub use bessel::{bessel_j, bessel_k, bessel_k_scaled, ln_bessel_k, ln_bessel_k_of_ln};
pub use gamma::{digamma, gamma, log_gamma};
pub use quad::{integrate, Domain, Integrator, QuadratureError, QuadratureResult, DEFAULT_TOL};

pub(crate) use gamma::log_gamma_unchecked;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("{function}: argument {value} violates {condition}")]
    Domain { function: &'static str, condition: &'static str, value: f64 },
    #[error("{function}: result overflows f64 at x = {value}")]
    Overflow { function: &'static str, value: f64 },
    #[error("{function}: series did not converge")]
    NoConvergence { function: &'static str },
}
