//! Log-Gamma and digamma on the positive real axis.

use super::SpecfunError;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments are shifted up to at least this value before the asymptotic
/// series is applied; eight Bernoulli terms then reach f64 precision.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// B_{2k} / (2k) for k = 1..7.
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "log_gamma",
            condition: "x > 0 and finite",
            value: x,
        });
    }
    Ok(log_gamma_unchecked(x))
}

/// `log_gamma` without the domain check, for internal callers whose
/// arguments are positive by construction.
pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let mut z = x;
    let mut shift = 1.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    let stirling = (z - 0.5) * z.ln() - z + HALF_LN_2PI + series;
    if shift == 1.0 {
        stirling
    } else {
        stirling - shift.ln()
    }
}

/// Gamma function for moderate positive arguments (`exp(log_gamma(x))`).
pub fn gamma(x: f64) -> Result<f64, SpecfunError> {
    let lg = log_gamma(x)?;
    let g = lg.exp();
    if g.is_infinite() {
        return Err(SpecfunError::Overflow { function: "gamma", value: x });
    }
    Ok(g)
}

/// Digamma ψ(x) = d/dx ln Γ(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "digamma",
            condition: "x > 0 and finite",
            value: x,
        });
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut power = inv2;
    for c in DIGAMMA_SERIES {
        series += c * power;
        power *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}

/// ln Γ(1 - μ) - ln Γ(1 + μ), accurate for small |μ| where the direct
/// difference cancels.
pub(crate) fn log_gamma_reflection_gap(mu: f64) -> f64 {
    if mu.abs() < 0.1 {
        // 2γμ + 2 Σ_{k odd ≥ 3} ζ(k) μ^k / k
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        const ZETA_ODD: [f64; 8] = [
            1.202_056_903_159_594_3,
            1.036_927_755_143_37,
            1.008_349_277_381_922_9,
            1.002_008_392_826_082_2,
            1.000_494_188_604_119_5,
            1.000_122_713_347_578_5,
            1.000_030_588_236_307,
            1.000_007_637_197_638_7,
        ];
        let mu2 = mu * mu;
        let mut power = mu * mu2;
        let mut sum = EULER_GAMMA * mu;
        for (i, z) in ZETA_ODD.iter().enumerate() {
            let k = (2 * i + 3) as f64;
            sum += z * power / k;
            power *= mu2;
        }
        2.0 * sum
    } else {
        log_gamma_unchecked(1.0 - mu) - log_gamma_unchecked(1.0 + mu)
    }
}
