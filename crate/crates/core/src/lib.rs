//! Rényi entropy powers and uncertainty bounds for conjugate observables.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// series coefficients are kept as published
#![allow(clippy::excessive_precision)]

pub mod entropy;
pub mod regions;
pub mod specfun;
pub mod states;
pub mod transforms;
pub mod verify;
