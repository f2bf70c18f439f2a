//! Closed-form entropy powers of the analytic families, for the canonical
//! (unscaled) shapes. All functions return ln N_λ.

use std::f64::consts::{LN_2, PI};

use crate::regions::gaussian_index_factor;
use crate::specfun::{digamma, log_gamma_unchecked, Integrator, QuadratureResult};

use super::numeric::{log_space_integral, Side};
use super::{EntropyError, ANALYTIC_BAND, SHANNON_BAND};

fn d_f(d: usize) -> f64 {
    d as f64
}

fn psi(x: f64) -> f64 {
    digamma(x).unwrap_or(f64::NAN)
}

/// ln N_λ of the standard normal density N(0, I_d).
pub(crate) fn gaussian(lambda: f64) -> f64 {
    0.5 * (2.0 * PI).ln() + gaussian_index_factor(lambda).ln()
}

fn student_t_ln_k(d: usize, nu: f64) -> f64 {
    let df = d_f(d);
    log_gamma_unchecked(0.5 * (df + nu)) - 0.5 * df * PI.ln() - log_gamma_unchecked(0.5 * nu)
}

/// Existence of N_λ for the Student-t density: λ(d+ν) > d.
pub(crate) fn student_t_condition(d: usize, nu: f64, lambda: f64) -> Result<(), EntropyError> {
    let df = d_f(d);
    if lambda > 0.0 && lambda.is_finite() && lambda * (df + nu) <= df {
        return Err(EntropyError::Divergent {
            condition: format!(
                "nu > max(0, d(1 - lambda)/lambda) = {} (d = {d}, lambda = {lambda}, nu = {nu})",
                fmt_bound(df * (1.0 - lambda) / lambda)
            ),
            limit: f64::INFINITY,
        });
    }
    Ok(())
}

/// Existence of N_λ for the Student-t partner density: ν > d(λ−1)/λ, and
/// ν > d for λ = ∞.
pub(crate) fn partner_condition(d: usize, nu: f64, lambda: f64) -> Result<(), EntropyError> {
    let df = d_f(d);
    let violated = if lambda.is_infinite() {
        nu <= df
    } else {
        lambda > 1.0 && nu * lambda <= df * (lambda - 1.0)
    };
    if violated {
        let bound = if lambda.is_infinite() { df } else { df * (lambda - 1.0) / lambda };
        return Err(EntropyError::Divergent {
            condition: format!(
                "nu > d(beta - 1)/beta = {} (d = {d}, beta = {lambda}, nu = {nu})",
                fmt_bound(bound)
            ),
            limit: 0.0,
        });
    }
    Ok(())
}

fn fmt_bound(v: f64) -> String {
    format!("{:.9}", v).trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Student-t entropy power in closed form, including λ = 1 (Shannon) and
/// λ = ∞ (supremum).
pub(crate) fn student_t(d: usize, nu: f64, lambda: f64) -> Result<f64, EntropyError> {
    student_t_condition(d, nu, lambda)?;
    let df = d_f(d);
    let a = 0.5 * (df + nu);
    let ln_k = student_t_ln_k(d, nu);
    if lambda.is_infinite() {
        return Ok(-ln_k / df);
    }
    if (lambda - 1.0).abs() < ANALYTIC_BAND {
        let h = -ln_k + a * (psi(a) - psi(0.5 * nu));
        return Ok(h / df);
    }
    let num = lambda * log_gamma_unchecked(a) - log_gamma_unchecked(lambda * a)
        + log_gamma_unchecked(lambda * a - 0.5 * df)
        - lambda * log_gamma_unchecked(0.5 * nu);
    Ok(0.5 * PI.ln() + num / (df * (1.0 - lambda)))
}

/// Student-r on the unit ball (m = (ν−d)/2 ≥ 0):
/// ∫ρ^λ = c^λ π^{d/2} Γ(λm+1) / Γ(λm+1+d/2).
pub(crate) fn student_r(d: usize, nu: f64, lambda: f64) -> f64 {
    let df = d_f(d);
    let m = 0.5 * (nu - df);
    let ln_vol = 0.5 * df * PI.ln() - log_gamma_unchecked(0.5 * df + 1.0);
    if m == 0.0 || lambda == 0.0 {
        return ln_vol / df;
    }
    let ln_c = log_gamma_unchecked(m + 1.0 + 0.5 * df) - 0.5 * df * PI.ln() - log_gamma_unchecked(m + 1.0);
    if lambda.is_infinite() {
        return -ln_c / df;
    }
    if (lambda - 1.0).abs() < ANALYTIC_BAND {
        let h = -ln_c - m * (psi(m + 1.0) - psi(m + 1.0 + 0.5 * df));
        return h / df;
    }
    let f = lambda * ln_c + 0.5 * df * PI.ln() + log_gamma_unchecked(lambda * m + 1.0)
        - log_gamma_unchecked(lambda * m + 1.0 + 0.5 * df);
    f / (df * (1.0 - lambda))
}

/// Uniform density on the unit ball: the volume, for every λ.
pub(crate) fn uniform_ball(d: usize) -> f64 {
    student_r(d, d_f(d), 1.0)
}

/// ρ = e^{-2|x|}: N_λ = λ^{1/(λ−1)}.
pub(crate) fn laplace(lambda: f64) -> f64 {
    if lambda.is_infinite() {
        return 0.0;
    }
    let h = lambda - 1.0;
    if h == 0.0 {
        1.0
    } else {
        h.ln_1p() / h
    }
}

/// ln of the factor multiplying π^{d(1−β)/2} I in ∫ρ^β for the partner
/// density.
fn partner_ln_prefactor(d: usize, nu: f64, beta: f64) -> f64 {
    let df = d_f(d);
    beta * 0.5 * (4.0 - df - nu) * LN_2 + LN_2 - log_gamma_unchecked(0.5 * df)
        + beta * (log_gamma_unchecked(0.5 * (df + nu)) - 2.0 * log_gamma_unchecked(0.25 * (df + nu)))
        - beta * log_gamma_unchecked(0.5 * nu)
}

/// I = ∫₀^∞ r^{d−1+β(ν−d)/2} K_{(d−ν)/4}(r)^{2β} dr, returned as
/// (ln I, relative error estimate).
pub(crate) fn partner_integral_ln(d: usize, nu: f64, beta: f64, rel_tol: f64) -> Result<(f64, f64), EntropyError> {
    let df = d_f(d);
    let mu = 0.25 * (df - nu);
    let power = df + 0.5 * beta * (nu - df);
    let g = |t: f64| -> f64 {
        match crate::specfun::ln_bessel_k_of_ln(mu, t) {
            Ok(lk) => power * t + 2.0 * beta * lk,
            Err(_) => f64::NAN,
        }
    };
    let left_rate = df + beta * (nu - df).min(0.0);
    let r = log_space_integral(&g, 0.0, left_rate, Side::Exponential, Integrator::relative(rel_tol))?;
    Ok((r.ln_value, r.rel_error))
}

/// The partner integral as a plain quadrature result.
pub fn student_t_partner_integral(d: usize, nu: f64, beta: f64) -> Result<QuadratureResult, EntropyError> {
    if d == 0 || !(nu > 0.0) || !(beta > 0.0) || !beta.is_finite() {
        return Err(EntropyError::Domain {
            name: "d, nu, beta",
            condition: "d >= 1, nu > 0, 0 < beta < inf",
            value: nu,
        });
    }
    partner_condition(d, nu, beta)?;
    let (ln_i, rel) = partner_integral_ln(d, nu, beta, 1e-12)?;
    let value = ln_i.exp();
    Ok(QuadratureResult { value, abs_error_estimate: rel * value, evaluations: 1 })
}

/// Student-t partner entropy power for β ∉ {0, 1, ∞} from the closed-form
/// prefactor and the one-dimensional integral I. Returns (ln N, rel error).
pub(crate) fn student_t_partner(d: usize, nu: f64, beta: f64) -> Result<(f64, f64), EntropyError> {
    partner_condition(d, nu, beta)?;
    let df = d_f(d);
    debug_assert!((beta - 1.0).abs() >= SHANNON_BAND);
    let (ln_i, rel) = partner_integral_ln(d, nu, beta, 1e-12)?;
    let e = 1.0 / (df * (1.0 - beta));
    let ln_n = 0.5 * PI.ln() + e * (partner_ln_prefactor(d, nu, beta) + ln_i);
    Ok((ln_n, (e * rel).abs()))
}
