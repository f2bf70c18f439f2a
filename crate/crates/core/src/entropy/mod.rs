//! Rényi entropies and entropy powers N_λ = exp(H_λ / d) for continuous,
//! periodic and discrete states.
//!
//! H_λ = (1/(1−λ)) ln ∫ρ^λ with ρ = |Ψ|². The limits are taken as
//! λ = 1: Shannon, λ = 0: log-volume of the support, λ = ∞: −ln sup ρ.

mod analytic;
mod numeric;

use std::fmt;

use thiserror::Error;

use crate::states::{DiscreteState, Shape, Wavefunction};
use crate::transforms::PeriodicDensity;

pub use analytic::student_t_partner_integral;

/// Around λ = 1, quadrature-based powers switch to the Shannon integral.
pub const SHANNON_BAND: f64 = 1e-4;
/// Around λ = 1, closed forms switch to their Shannon limit.
pub const ANALYTIC_BAND: f64 = 1e-7;
/// Discrete probabilities at or below this count as outside the support.
pub const DISCRETE_SUPPORT_EPS: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Quadrature,
    DiscreteSum,
    TorusQuadrature,
    GridSum,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
            Method::DiscreteSum => "discrete-sum",
            Method::TorusQuadrature => "torus-quadrature",
            Method::GridSum => "grid-sum",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Which evaluation route to use for continuous states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    /// Closed forms where available, quadrature otherwise.
    Auto,
    /// Closed forms only; fails for families without one.
    Analytic,
    /// Direct quadrature of the density, even when a closed form exists.
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyPower {
    /// N_λ, possibly +∞ for an unbounded support at λ = 0.
    pub value: f64,
    pub lambda: f64,
    pub method: Method,
    pub abs_error_estimate: f64,
    /// Set when the value carries a known limitation.
    pub caveat: Option<String>,
}

impl EntropyPower {
    fn new(value: f64, lambda: f64, method: Method, abs_error_estimate: f64) -> Self {
        Self { value, lambda, method, abs_error_estimate, caveat: None }
    }

    fn with_caveat(mut self, caveat: impl Into<String>) -> Self {
        self.caveat = Some(caveat.into());
        self
    }

    /// H_λ = d ln N_λ.
    pub fn entropy(&self, d: usize) -> f64 {
        d as f64 * self.value.ln()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    /// ∫ρ^λ diverges; `limit` is the value N_λ tends to (0 or +∞).
    #[error("entropy power diverges (N -> {limit}): requires {condition}")]
    Divergent { condition: String, limit: f64 },
    #[error("{name} = {value} violates {condition}")]
    Domain { name: &'static str, condition: &'static str, value: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn check_lambda(lambda: f64) -> Result<(), EntropyError> {
    if !(lambda >= 0.0) {
        return Err(EntropyError::Domain { name: "lambda", condition: "lambda >= 0", value: lambda });
    }
    Ok(())
}

fn from_ln(ln_n: f64, lambda: f64, method: Method, rel_err: f64) -> EntropyPower {
    let v = ln_n.exp();
    EntropyPower::new(v, lambda, method, rel_err * v)
}

/// N_λ of a continuous state, using closed forms where available.
pub fn renyi_power_continuous(state: &Wavefunction, lambda: f64) -> Result<EntropyPower, EntropyError> {
    renyi_power_continuous_with(state, lambda, Path::Auto)
}

/// N_λ of a continuous state along an explicit evaluation path.
pub fn renyi_power_continuous_with(
    state: &Wavefunction,
    lambda: f64,
    path: Path,
) -> Result<EntropyPower, EntropyError> {
    check_lambda(lambda)?;
    let d = state.dim();
    let scale_ln = state.scale_det().ln() / d as f64;
    match state.shape() {
        Shape::Sampled(_) => {
            if path == Path::Analytic {
                return Err(EntropyError::Unsupported("sampled grids have no closed form".into()));
            }
            return Ok(grid_power(state, lambda));
        }
        Shape::CompactPartner { .. } => {
            if path == Path::Analytic {
                return Err(EntropyError::Unsupported(format!("no closed form for {}", state.family())));
            }
            return numeric_power(state, lambda);
        }
        _ => {}
    }
    match path {
        Path::Analytic | Path::Auto => analytic_power(state.shape(), d, lambda).map(|p| shift(p, scale_ln)),
        Path::Quadrature => numeric_power(state, lambda),
    }
}

/// Multiplies N by exp(scale_ln); with scale_ln = ln|det M|/d this is
/// exact for any invertible M.
fn shift(mut p: EntropyPower, scale_ln: f64) -> EntropyPower {
    if scale_ln != 0.0 && p.value.is_finite() {
        let f = scale_ln.exp();
        p.value *= f;
        p.abs_error_estimate *= f;
    }
    p
}

fn analytic_power(shape: &Shape, d: usize, lambda: f64) -> Result<EntropyPower, EntropyError> {
    let unbounded = |method| {
        EntropyPower::new(f64::INFINITY, 0.0, method, 0.0).with_caveat("support is unbounded")
    };
    match shape {
        Shape::Gaussian => {
            if lambda == 0.0 {
                return Ok(unbounded(Method::Analytic));
            }
            Ok(from_ln(analytic::gaussian(lambda), lambda, Method::Analytic, 0.0))
        }
        Shape::StudentT { nu } => {
            if lambda == 0.0 {
                return Ok(unbounded(Method::Analytic));
            }
            Ok(from_ln(analytic::student_t(d, *nu, lambda)?, lambda, Method::Analytic, 0.0))
        }
        Shape::StudentR { nu } => Ok(from_ln(analytic::student_r(d, *nu, lambda), lambda, Method::Analytic, 0.0)),
        Shape::UniformBall => Ok(from_ln(analytic::uniform_ball(d), lambda, Method::Analytic, 0.0)),
        Shape::Laplace => {
            if lambda == 0.0 {
                return Ok(unbounded(Method::Analytic));
            }
            Ok(from_ln(analytic::laplace(lambda), lambda, Method::Analytic, 0.0))
        }
        Shape::StudentTPartner { nu } => student_t_partner_power_analytic(d, *nu, lambda),
        Shape::CompactPartner { .. } | Shape::Sampled(_) => {
            Err(EntropyError::Unsupported("no closed form for this family".into()))
        }
    }
}

/// Existence conditions checked before any quadrature.
fn check_existence(shape: &Shape, d: usize, lambda: f64) -> Result<(), EntropyError> {
    match shape {
        Shape::StudentT { nu } => analytic::student_t_condition(d, *nu, lambda),
        Shape::StudentTPartner { nu } => analytic::partner_condition(d, *nu, lambda),
        Shape::CompactPartner { kappa } => {
            let p = 2.0 * kappa + 2.0;
            if lambda > 0.0 && lambda.is_finite() && p * lambda <= 1.0 {
                return Err(EntropyError::Divergent {
                    condition: format!("lambda > 1/(2 kappa + 2) = {} (tail ~ k^-{p})", 1.0 / p),
                    limit: f64::INFINITY,
                });
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn numeric_power(state: &Wavefunction, lambda: f64) -> Result<EntropyPower, EntropyError> {
    let d = state.dim();
    let shape = state.shape();
    check_existence(shape, d, lambda)?;
    let bounded_support = matches!(shape, Shape::StudentR { .. } | Shape::UniformBall);
    // anisotropic scalings: canonical quadrature times |det M|^{1/d}
    let (s, post) = match state.isotropic_scale() {
        Some(s) => (s, 0.0),
        None => (1.0, state.scale_det().ln() / d as f64),
    };
    let done = |p: EntropyPower| shift(p, post);
    if lambda == 0.0 {
        if bounded_support {
            let ln_v = analytic::uniform_ball(d) + s.ln();
            return Ok(done(from_ln(ln_v, 0.0, Method::Quadrature, 0.0)));
        }
        return Ok(EntropyPower::new(f64::INFINITY, 0.0, Method::Quadrature, 0.0).with_caveat("support is unbounded"));
    }
    if let Shape::CompactPartner { kappa } = shape {
        let s1 = state.scale_det();
        if lambda.is_infinite() {
            let ln_sup = numeric::radial_ln_sup(shape, 1, 1.0);
            return Ok(from_ln(-ln_sup + s1.ln(), lambda, Method::Quadrature, 0.0));
        }
        let shannon = (lambda - 1.0).abs() < SHANNON_BAND;
        let (v, e) = numeric::compact_partner_power(*kappa, lambda, shannon)?;
        // for d = 1 the Shannon entropy is already ln N
        return Ok(shift(from_ln(v, lambda, Method::Quadrature, e), s1.ln()));
    }
    if lambda.is_infinite() {
        let ln_sup = numeric::radial_ln_sup(shape, d, s);
        if ln_sup == f64::INFINITY {
            return Err(EntropyError::Divergent { condition: "bounded density".into(), limit: 0.0 });
        }
        return Ok(done(from_ln(-ln_sup / d as f64, lambda, Method::Quadrature, 0.0)));
    }
    let shannon = (lambda - 1.0).abs() < SHANNON_BAND;
    let (ln_n, rel) = numeric::radial_power(shape, d, s, lambda, shannon)?;
    Ok(done(from_ln(ln_n, lambda, Method::Quadrature, rel)))
}

/// Closed-form Student-t entropy power
/// N_α = √π [Γ^α((d+ν)/2)/Γ(α(d+ν)/2)]^{1/(d(1−α))} [Γ((α(d+ν)−d)/2)/Γ^α(ν/2)]^{1/(d(1−α))},
/// defined for ν > max(0, d(1−α)/α).
pub fn student_t_power_analytic(d: usize, nu: f64, alpha: f64) -> Result<EntropyPower, EntropyError> {
    check_lambda(alpha)?;
    check_family_params(d, nu)?;
    analytic_power(&Shape::StudentT { nu }, d, alpha)
}

fn check_family_params(d: usize, nu: f64) -> Result<(), EntropyError> {
    if d == 0 {
        return Err(EntropyError::Domain { name: "d", condition: "d >= 1", value: 0.0 });
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(EntropyError::Domain { name: "nu", condition: "nu > 0", value: nu });
    }
    Ok(())
}

/// Entropy power of the Fourier partner of the Student-t state, from the
/// closed-form prefactor and the integral of r^{d−1+β(ν−d)/2} K^{2β}_{(d−ν)/4}(r).
/// Defined for ν > max(0, d(β−1)/β).
pub fn student_t_partner_power_analytic(d: usize, nu: f64, beta: f64) -> Result<EntropyPower, EntropyError> {
    check_lambda(beta)?;
    check_family_params(d, nu)?;
    let shape = Shape::StudentTPartner { nu };
    if beta == 0.0 {
        return Ok(EntropyPower::new(f64::INFINITY, 0.0, Method::Analytic, 0.0).with_caveat("support is unbounded"));
    }
    analytic::partner_condition(d, nu, beta)?;
    if beta.is_infinite() {
        let ln_sup = numeric::radial_ln_sup(&shape, d, 1.0);
        return Ok(from_ln(-ln_sup / d as f64, beta, Method::Analytic, 0.0));
    }
    if (beta - 1.0).abs() < SHANNON_BAND {
        let (ln_n, rel) = numeric::radial_power(&shape, d, 1.0, 1.0, true)?;
        return Ok(from_ln(ln_n, beta, Method::Quadrature, rel));
    }
    let (ln_n, rel) = analytic::student_t_partner(d, nu, beta)?;
    Ok(from_ln(ln_n, beta, Method::Analytic, rel))
}

/// Entropy power of a sampled grid by Riemann sums. λ = 0 gives the
/// measure of the grid cells with nonzero density (flagged).
fn grid_power(state: &Wavefunction, lambda: f64) -> EntropyPower {
    let grid = match state.shape() {
        Shape::Sampled(g) => g,
        _ => unreachable!("grid_power on an analytic family"),
    };
    let d = state.dim() as f64;
    let dv = grid.spec().cell_volume();
    let p: Vec<f64> = grid.samples().iter().map(|z| z.norm_sqr()).collect();
    let caveat = "Riemann sum on the sampled grid; truncation beyond the grid is ignored";
    if lambda == 0.0 {
        let count = p.iter().filter(|&&v| v > 0.0).count() as f64;
        return EntropyPower::new((count * dv).powf(1.0 / d), 0.0, Method::GridSum, 0.0)
            .with_caveat("grid-support measure; exact only for analytic families");
    }
    if lambda.is_infinite() {
        let max = p.iter().cloned().fold(0.0, f64::max);
        return EntropyPower::new(max.powf(-1.0 / d), lambda, Method::GridSum, 0.0).with_caveat(caveat);
    }
    if (lambda - 1.0).abs() < ANALYTIC_BAND {
        let h: f64 = -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>() * dv;
        return EntropyPower::new((h / d).exp(), lambda, Method::GridSum, 0.0).with_caveat(caveat);
    }
    let top = p.iter().cloned().fold(0.0, f64::max);
    let sum: f64 = p.iter().filter(|&&v| v > 0.0).map(|v| (v / top).powf(lambda)).sum::<f64>();
    let ln_sum = lambda * top.ln() + sum.ln() + dv.ln();
    EntropyPower::new((ln_sum / (d * (1.0 - lambda))).exp(), lambda, Method::GridSum, 0.0).with_caveat(caveat)
}

/// N_λ = (Σ p_k^λ)^{1/(1−λ)} of a discrete state.
pub fn renyi_power_discrete(state: &DiscreteState, lambda: f64) -> Result<EntropyPower, EntropyError> {
    check_lambda(lambda)?;
    Ok(discrete_power_of_probabilities(&state.probabilities(), lambda))
}

fn discrete_power_of_probabilities(p: &[f64], lambda: f64) -> EntropyPower {
    let support = p.iter().cloned().filter(|&v| v > DISCRETE_SUPPORT_EPS);
    let value = if lambda == 0.0 {
        support.count() as f64
    } else if lambda.is_infinite() {
        1.0 / p.iter().cloned().fold(0.0, f64::max)
    } else if (lambda - 1.0).abs() < ANALYTIC_BAND {
        (-support.map(|v| v * v.ln()).sum::<f64>()).exp()
    } else {
        // factor out the largest mass so Σ p^λ cannot underflow
        let top = p.iter().cloned().fold(0.0, f64::max);
        let s: f64 = support.map(|v| (v / top).powf(lambda)).sum();
        ((lambda * top.ln() + s.ln()) / (1.0 - lambda)).exp()
    };
    EntropyPower::new(value, lambda, Method::DiscreteSum, 0.0)
}

/// N_λ of a density on the torus [0, 2π)^d.
pub fn renyi_power_torus(density: &PeriodicDensity, lambda: f64) -> Result<EntropyPower, EntropyError> {
    check_lambda(lambda)?;
    let d = density.dim() as f64;
    let full = 2.0 * std::f64::consts::PI;
    if density.terms().is_empty() {
        return Err(EntropyError::Domain { name: "density", condition: "nonzero state", value: 0.0 });
    }
    if lambda == 0.0 {
        // a nonzero trigonometric polynomial vanishes only on a null set
        return Ok(EntropyPower::new(full, 0.0, Method::TorusQuadrature, 0.0));
    }
    if lambda.is_infinite() {
        let sup = numeric::torus_sup(density);
        return Ok(EntropyPower::new(sup.powf(-1.0 / d), lambda, Method::TorusQuadrature, 0.0));
    }
    if (lambda - 1.0).abs() < SHANNON_BAND {
        let (h, err) = numeric::torus_integral(density, &|r| if r > 0.0 { -r * r.ln() } else { 0.0 })?;
        let v = (h / d).exp();
        return Ok(EntropyPower::new(v, lambda, Method::TorusQuadrature, v * err / d));
    }
    let (s, err) = numeric::torus_integral(density, &|r| if r > 0.0 { r.powf(lambda) } else { 0.0 })?;
    let ex = 1.0 / (d * (1.0 - lambda));
    let v = (ex * s.ln()).exp();
    Ok(EntropyPower::new(v, lambda, Method::TorusQuadrature, (ex * err / s).abs() * v))
}

/// The variant exp(−(1/d) ln sup|Ψ|) = N_∞^{1/2}, i.e. the supremum of the
/// amplitude instead of the density. Reported for comparison only.
pub fn infinity_power_sup_amplitude(state: &Wavefunction) -> Result<EntropyPower, EntropyError> {
    let n = renyi_power_continuous(state, f64::INFINITY)?;
    let d = state.dim() as f64;
    // N_∞ = (sup ρ)^{-1/d}; sup|Ψ| = (sup ρ)^{1/2}
    let ln_sup_rho = -d * n.value.ln();
    let v = (-(0.5 * ln_sup_rho) / d).exp();
    Ok(EntropyPower::new(v, f64::INFINITY, n.method, 0.0)
        .with_caveat("uses sup|psi| rather than sup|psi|^2; not the lambda -> inf limit of the entropy"))
}
