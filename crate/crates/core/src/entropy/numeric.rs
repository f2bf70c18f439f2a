//! Quadrature paths: radial integrals on a logarithmic radius, the
//! oscillatory compact-support partners, sampled grids and the torus.

use std::f64::consts::{LN_2, PI};

use crate::specfun::{log_gamma_unchecked, Domain, Integrator, QuadratureError};
use crate::states::{canonical_ln_density, compact_partner_ln_norm, compact_partner_reduced, Shape};
use crate::transforms::PeriodicDensity;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::EntropyError;

/// Right-hand behavior of a log-radius integrand.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Side {
    /// Faster than any power of r.
    Exponential,
    /// r^{-rate} in the radial measure, i.e. e^{-rate·t}.
    Power(f64),
    /// Support ends at t0.
    Compact,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LogIntegral {
    pub ln_value: f64,
    pub rel_error: f64,
}

fn quad_err(e: QuadratureError) -> EntropyError {
    EntropyError::Quadrature(e.to_string())
}

/// Peak of g on a coarse grid around t0, used as an offset so the
/// integrand stays in range.
fn offset(g: &dyn Fn(f64) -> f64, t0: f64, right: Side) -> Result<f64, EntropyError> {
    let hi = if matches!(right, Side::Compact) { -1 } else { 60 };
    let mut best = f64::NEG_INFINITY;
    for k in -200..=hi {
        let v = g(t0 + 0.2 * k as f64);
        if v.is_finite() && v > best {
            best = v;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(EntropyError::Quadrature("integrand vanishes or is non-finite everywhere".into()))
    }
}

/// ∫ e^{g(t)} w(t) dt over t ∈ ℝ (or t < t0 for compact support), scaled
/// by e^{-g0}. Returns (value, abs error, g0).
pub(crate) fn weighted_integral(
    g: &dyn Fn(f64) -> f64,
    w: &dyn Fn(f64) -> f64,
    t0: f64,
    left_rate: f64,
    right: Side,
    integ: Integrator,
) -> Result<(f64, f64, f64), EntropyError> {
    if !(left_rate > 0.0) {
        return Err(EntropyError::Quadrature(format!("non-integrable at the origin (rate {left_rate})")));
    }
    let g0 = offset(g, t0, right)?;
    let f = |t: f64| {
        let e = g(t) - g0;
        if e == f64::NEG_INFINITY {
            0.0
        } else {
            e.exp() * w(t)
        }
    };
    let left = integ.integrate_decaying(|s| f(t0 - s), left_rate).map_err(quad_err)?;
    let (rv, re) = match right {
        Side::Compact => (0.0, 0.0),
        Side::Exponential => {
            let r = integ.integrate_decaying(|s| f(t0 + s), 1.0).map_err(quad_err)?;
            (r.value, r.abs_error_estimate)
        }
        Side::Power(rate) => {
            if !(rate > 0.0) {
                return Err(EntropyError::Quadrature(format!("non-integrable tail (rate {rate})")));
            }
            let r = integ.integrate_decaying(|s| f(t0 + s), rate).map_err(quad_err)?;
            (r.value, r.abs_error_estimate)
        }
    };
    Ok((left.value + rv, left.abs_error_estimate + re, g0))
}

/// ln ∫ e^{g(t)} dt.
pub(crate) fn log_space_integral(
    g: &dyn Fn(f64) -> f64,
    t0: f64,
    left_rate: f64,
    right: Side,
    integ: Integrator,
) -> Result<LogIntegral, EntropyError> {
    let (v, e, g0) = weighted_integral(g, &|_| 1.0, t0, left_rate, right, integ)?;
    if !(v > 0.0) {
        return Err(EntropyError::Quadrature("integral is not positive".into()));
    }
    Ok(LogIntegral { ln_value: g0 + v.ln(), rel_error: e / v })
}

/// ln of the surface area of the unit sphere in ℝ^d.
pub(crate) fn ln_sphere_area(d: usize) -> f64 {
    let df = d as f64;
    LN_2 + 0.5 * df * PI.ln() - log_gamma_unchecked(0.5 * df)
}

/// Radial behavior of a canonical shape: (origin exponent of ρ, right side
/// for ρ^λ).
fn radial_profile(shape: &Shape, d: usize, lambda: f64) -> (f64, Side) {
    let df = d as f64;
    match shape {
        Shape::StudentT { nu } => (0.0, Side::Power(lambda * (df + nu) - df)),
        Shape::StudentTPartner { nu } => ((nu - df).min(0.0), Side::Exponential),
        Shape::StudentR { .. } | Shape::UniformBall => (0.0, Side::Compact),
        _ => (0.0, Side::Exponential),
    }
}

/// ln N_λ by radial quadrature of the density of a radial shape scaled by
/// s·I. Handles λ = 1 through the Shannon integral; λ ∈ {0, ∞} are handled
/// by the caller. Returns (ln N, relative error of N).
pub(crate) fn radial_power(shape: &Shape, d: usize, s: f64, lambda: f64, shannon: bool) -> Result<(f64, f64), EntropyError> {
    let df = d as f64;
    let ln_s = s.ln();
    let ln_rho = |t: f64| -df * ln_s + canonical_ln_density(shape, d, t - ln_s);
    let lam = if shannon { 1.0 } else { lambda };
    let (origin, right) = radial_profile(shape, d, lam);
    let left_rate = df + lam * origin;
    let integ = Integrator::relative(1e-12);
    let ln_area = ln_sphere_area(d);
    if shannon {
        let g = |t: f64| df * t + ln_rho(t);
        let w = |t: f64| {
            let l = ln_rho(t);
            if l == f64::NEG_INFINITY {
                0.0
            } else {
                -l
            }
        };
        let (v, e, g0) = weighted_integral(&g, &w, ln_s, left_rate, right, integ)?;
        let scale = (ln_area + g0).exp();
        let h = scale * v;
        let err = scale * e;
        return Ok((h / df, err / df));
    }
    let g = |t: f64| df * t + lambda * ln_rho(t);
    let r = log_space_integral(&g, ln_s, left_rate, right, integ)?;
    let ex = 1.0 / (df * (1.0 - lambda));
    Ok((ex * (ln_area + r.ln_value), (ex * r.rel_error).abs()))
}

/// sup ρ of a radial shape scaled by s (attained at the origin for every
/// implemented family). Returns ln sup.
pub(crate) fn radial_ln_sup(shape: &Shape, d: usize, s: f64) -> f64 {
    -(d as f64) * s.ln() + canonical_ln_density(shape, d, f64::NEG_INFINITY)
}

/// Number of half-periods integrated exactly before switching to the
/// averaged tail of the compact-support partners.
const COMPACT_CHUNKS: usize = 600;

/// ln N_λ (or Shannon) of the canonical compact-support partner in d = 1.
pub(crate) fn compact_partner_power(kappa: f64, lambda: f64, shannon: bool) -> Result<(f64, f64), EntropyError> {
    let nu = kappa + 0.5;
    let p = 2.0 * kappa + 2.0;
    let ln_norm = compact_partner_ln_norm(kappa);
    let ln_rho = |k: f64| ln_norm + 2.0 * compact_partner_reduced(kappa, k).abs().ln();
    // envelope ρ ≈ C k^{-p} cos²(k − φ)
    let ln_c_env = compact_envelope_ln(kappa);
    let boundaries: Vec<f64> = std::iter::once(0.0)
        .chain((1..=COMPACT_CHUNKS).map(|s| (s as f64 + 0.5 * nu - 0.25) * PI))
        .collect();
    let big_k = *boundaries.last().unwrap();
    let integ = Integrator::relative(1e-12).with_max_intervals(400);
    let mut total = 0.0;
    let mut err = 0.0;
    for w in boundaries.windows(2) {
        let r = if shannon {
            integ.integrate(
                |k| {
                    let l = ln_rho(k);
                    if l == f64::NEG_INFINITY {
                        0.0
                    } else {
                        -l * l.exp()
                    }
                },
                Domain::Finite(w[0], w[1]),
            )
        } else {
            integ.integrate(|k| (lambda * ln_rho(k)).exp(), Domain::Finite(w[0], w[1]))
        };
        let r = match r {
            Ok(r) => r,
            Err(QuadratureError::NoConvergence { best }) => best,
            Err(e) => return Err(quad_err(e)),
        };
        total += r.value;
        err += r.abs_error_estimate;
    }
    let tail = if shannon {
        // −∫ C k^{-p} cos² [ln C − p ln k + ln cos²]
        let c = ln_c_env.exp();
        let t0 = big_k.powf(1.0 - p) / (p - 1.0);
        let t1 = big_k.powf(1.0 - p) * (big_k.ln() / (p - 1.0) + 1.0 / ((p - 1.0) * (p - 1.0)));
        -c * (0.5 * ln_c_env * t0 - 0.5 * p * t1 + 0.5 * (1.0 - 2.0 * LN_2) * t0)
    } else {
        let rate = p * lambda - 1.0;
        let mean_cos = (log_gamma_unchecked(lambda + 0.5) - 0.5 * PI.ln() - log_gamma_unchecked(lambda + 1.0)).exp();
        (lambda * ln_c_env).exp() * mean_cos * big_k.powf(-rate) / rate
    };
    // the averaged tail is accurate to relative O(1/K)
    err += tail.abs() / big_k;
    let full = 2.0 * (total + tail);
    let full_err = 2.0 * err;
    if shannon {
        return Ok((full, full_err));
    }
    if !(full > 0.0) {
        return Err(EntropyError::Quadrature("integral is not positive".into()));
    }
    let ex = 1.0 / (1.0 - lambda);
    Ok((ex * full.ln(), (ex * full_err / full).abs()))
}

/// ln C of the large-k envelope ρ ≈ C k^{-(2κ+2)} cos²(k − φ).
fn compact_envelope_ln(kappa: f64) -> f64 {
    compact_partner_ln_norm(kappa) + (2.0 * kappa + 2.0) * LN_2 - PI.ln()
}

/// Periodic trapezoid rule on 2^k nodes with the density sampled by FFT,
/// doubled until successive values agree to 1e-11. Converges geometrically
/// unless f∘ρ is nonsmooth (ρ near zero with fractional powers); `None`
/// then hands over to adaptive quadrature.
fn torus_trapezoid_fft(p: &PeriodicDensity, f: &dyn Fn(f64) -> f64) -> Option<(f64, f64)> {
    let idx: Vec<(usize, Complex64)> = p
        .terms()
        .iter()
        .map(|(k, z)| (k[0] >= 0.0 && k[0].fract() == 0.0).then(|| (k[0] as usize, *z)))
        .collect::<Option<_>>()?;
    let top = idx.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut m = (8 * (top + 1)).next_power_of_two().max(64);
    let mut planner = FftPlanner::<f64>::new();
    let mut prev: Option<f64> = None;
    while m <= 1 << 16 {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for &(k, z) in &idx {
            buf[k] += z;
        }
        planner.plan_fft_forward(m).process(&mut buf);
        let h = 2.0 * PI / m as f64;
        let value = buf.iter().map(|a| f(a.norm_sqr() / (2.0 * PI))).sum::<f64>() * h;
        if let Some(pv) = prev {
            let diff = (value - pv).abs();
            if diff <= 1e-11 * value.abs() {
                return Some((value, diff));
            }
        }
        prev = Some(value);
        m *= 2;
    }
    None
}

/// ∫ over the torus [0, 2π)^d of f(density): FFT trapezoid or adaptive
/// quadrature for d = 1, a refined tensor trapezoid rule otherwise.
pub(crate) fn torus_integral(p: &PeriodicDensity, f: &dyn Fn(f64) -> f64) -> Result<(f64, f64), EntropyError> {
    let d = p.dim();
    let deg = p.degree();
    if d == 1 {
        if let Some(r) = torus_trapezoid_fft(p, f) {
            return Ok(r);
        }
        let chunks = (4 * (deg + 1)).max(8);
        let h = 2.0 * PI / chunks as f64;
        let integ = Integrator::new(1e-15).with_max_intervals(500);
        let mut total = 0.0;
        let mut err = 0.0;
        for c in 0..chunks {
            let a = c as f64 * h;
            let r = integ
                .integrate(|x| f(p.density_at(&[x])), Domain::Finite(a, a + h))
                .or_else(|e| e.best_estimate().ok_or(e))
                .map_err(quad_err)?;
            total += r.value;
            err += r.abs_error_estimate;
        }
        return Ok((total, err));
    }
    // periodic trapezoid: exact for trigonometric polynomials of degree < M
    let mut m = (8 * (deg + 1)).max(32);
    let mut prev: Option<f64> = None;
    loop {
        let h = 2.0 * PI / m as f64;
        let total_pts = m.pow(d as u32);
        let mut acc = 0.0;
        let mut x = vec![0.0; d];
        for flat in 0..total_pts {
            let mut rem = flat;
            for xi in x.iter_mut() {
                *xi = (rem % m) as f64 * h;
                rem /= m;
            }
            acc += f(p.density_at(&x));
        }
        let value = acc * h.powi(d as i32);
        if let Some(pv) = prev {
            let diff = (value - pv).abs();
            if diff <= 1e-10 * value.abs() || total_pts > 4_000_000 {
                return Ok((value, diff));
            }
        }
        prev = Some(value);
        m *= 2;
    }
}

/// sup of a periodic density: dense sampling refined by golden-section
/// search in d = 1; the sampled maximum for d > 1.
pub(crate) fn torus_sup(p: &PeriodicDensity) -> f64 {
    let d = p.dim();
    let deg = p.degree();
    if d == 1 {
        let m = 64 * (deg + 1);
        let h = 2.0 * PI / m as f64;
        let vals: Vec<f64> = (0..m).map(|i| p.density_at(&[i as f64 * h])).collect();
        let mut best = vals.iter().cloned().fold(0.0, f64::max);
        for i in 0..m {
            let prev = vals[(i + m - 1) % m];
            let next = vals[(i + 1) % m];
            if vals[i] >= prev && vals[i] >= next && vals[i] >= 0.5 * best {
                let (mut a, mut b) = ((i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
                let g = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..80 {
                    let x1 = b - g * (b - a);
                    let x2 = a + g * (b - a);
                    if p.density_at(&[x1]) > p.density_at(&[x2]) {
                        b = x2;
                    } else {
                        a = x1;
                    }
                }
                best = best.max(p.density_at(&[0.5 * (a + b)]));
            }
        }
        return best;
    }
    let m = (16 * (deg + 1)).max(64);
    let h = 2.0 * PI / m as f64;
    let mut best: f64 = 0.0;
    let mut x = vec![0.0; d];
    for flat in 0..m.pow(d as u32) {
        let mut rem = flat;
        for xi in x.iter_mut() {
            *xi = (rem % m) as f64 * h;
            rem /= m;
        }
        best = best.max(p.density_at(&x));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((ln_sphere_area(1).exp() - 2.0).abs() < 1e-14);
        assert!((ln_sphere_area(2).exp() - 2.0 * PI).abs() < 1e-14);
        assert!((ln_sphere_area(3).exp() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn compact_envelope_matches_asymptotics() {
        for kappa in [0.0, 0.5] {
            let ln_c = compact_envelope_ln(kappa);
            let p = 2.0 * kappa + 2.0;
            let nu = kappa + 0.5;
            // compare peaks of the envelope and the exact density at large k
            let k = (2000.0 + 0.5 * nu + 0.25) * PI;
            let exact = compact_partner_ln_norm(kappa) + 2.0 * compact_partner_reduced(kappa, k).abs().ln();
            let approx = ln_c - p * k.ln();
            assert!((exact - approx).abs() < 1e-3, "kappa={kappa}: {exact} vs {approx}");
        }
    }

    #[test]
    fn uniform_partner_matches_sinc() {
        // ρ(k) = sin²k / (π k²)
        for k in [0.3, 1.0, 7.5, 40.0] {
            let ln_rho = compact_partner_ln_norm(0.0) + 2.0 * compact_partner_reduced(0.0, k).abs().ln();
            let expected = (k.sin() / k).powi(2) / PI;
            assert!((ln_rho.exp() - expected).abs() < 1e-12 * expected.max(1e-300) + 1e-16);
        }
    }
}
