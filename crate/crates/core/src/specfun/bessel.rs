//! Modified Bessel function of the second kind K_μ(x) for real order, plus
//! the ordinary Bessel function J_ν(x) used by compact-support transforms.
//!
//! K is evaluated with Temme's series for x < 2 and Steed's continued
//! fraction (CF2) for x ≥ 2, both at a reduced order |μ₀| ≤ 1/2, followed by
//! forward recurrence in the order. Below x = 1e-8 the logarithmic entry
//! points switch to the two-term small-argument expansion so that arguments
//! far below the f64 range (supplied as ln x) remain usable.

use std::f64::consts::PI;

use super::gamma::{log_gamma_reflection_gap, log_gamma_unchecked};
use super::SpecfunError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const TEMME_THRESHOLD: f64 = 2.0;
const MAX_SERIES_TERMS: usize = 15_000;
const SMALL_X_LN: f64 = -18.420_680_743_952_367; // ln(1e-8)

// Chebyshev expansions of Temme's Γ₁ and Γ₂ on 4|ν| - 1 ∈ [-1, 1].
const G1_COEFFS: [f64; 14] = [
    -1.145_164_083_662_683_1,
    0.006_360_853_113_470_843,
    0.001_862_451_930_072_068_4,
    0.000_152_833_085_873_453_5,
    0.000_017_017_464_011_802_04,
    -6.459_750_292_334_725e-7,
    -5.181_984_843_251_938e-8,
    4.518_909_289_485_818e-10,
    3.243_322_737_102_087e-11,
    6.830_943_402_494_752e-13,
    2.835_350_275_517_21e-14,
    -7.988_390_576_932_359e-16,
    -3.372_667_730_077_195e-17,
    -3.658_633_480_921_052e-20,
];

const G2_COEFFS: [f64; 15] = [
    1.882_645_524_949_671_8,
    -0.077_490_658_396_167_52,
    -0.018_256_714_847_324_93,
    0.000_633_803_020_907_489_6,
    0.000_076_229_054_350_872_9,
    -9.550_164_756_172_044e-7,
    -8.892_726_810_788_635e-8,
    -1.952_133_477_231_961_4e-9,
    -9.400_305_273_588_516e-11,
    4.687_513_384_953_239e-12,
    2.265_853_574_692_576e-13,
    -1.172_550_969_848_801_5e-15,
    -7.044_133_820_024_522e-17,
    -2.437_787_831_010_769_4e-18,
    -7.522_524_321_825_39e-20,
];

fn chebyshev(coeffs: &[f64], x: f64) -> f64 {
    let x2 = 2.0 * x;
    let (mut d, mut dd) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let tmp = d;
        d = x2 * d - dd + c;
        dd = tmp;
    }
    x * d - dd + 0.5 * coeffs[0]
}

/// (1/Γ(1+μ), 1/Γ(1-μ), Γ₁(μ), Γ₂(μ)) for |μ| ≤ 1/2.
fn temme_gamma(mu: f64) -> (f64, f64, f64, f64) {
    let t = 4.0 * mu.abs() - 1.0;
    let g1 = chebyshev(&G1_COEFFS, t);
    let g2 = chebyshev(&G2_COEFFS, t);
    let inv_gamma_1p = 1.0 / (g2 - mu * g1);
    let inv_gamma_1m = 1.0 / (g2 + mu * g1);
    (inv_gamma_1p, inv_gamma_1m, g1, g2)
}

/// e^x K_μ(x), e^x K_{μ+1}(x) for |μ| ≤ 1/2 and 0 < x < 2.
fn temme_series(mu: f64, x: f64) -> Result<(f64, f64), SpecfunError> {
    let half_x = 0.5 * x;
    let ln_half_x = half_x.ln();
    let half_x_mu = (mu * ln_half_x).exp();
    let pi_mu = PI * mu;
    let sigma = -mu * ln_half_x;
    let sinrat = if pi_mu.abs() < f64::EPSILON { 1.0 } else { pi_mu / pi_mu.sin() };
    let sinhrat = if sigma.abs() < f64::EPSILON { 1.0 } else { sigma.sinh() / sigma };
    let (inv_gamma_1p, inv_gamma_1m, g1, g2) = temme_gamma(mu);

    let mut fk = sinrat * (sigma.cosh() * g1 - sinhrat * ln_half_x * g2);
    let mut pk = 0.5 / half_x_mu * inv_gamma_1p;
    let mut qk = 0.5 * half_x_mu * inv_gamma_1m;
    let mut ck = 1.0;
    let mut sum0 = fk;
    let mut sum1 = pk;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        fk = (kf * fk + pk + qk) / (kf * kf - mu * mu);
        ck *= half_x * half_x / kf;
        pk /= kf - mu;
        qk /= kf + mu;
        let hk = -kf * fk + pk;
        let del0 = ck * fk;
        sum0 += del0;
        sum1 += ck * hk;
        if del0.abs() < 0.5 * sum0.abs() * f64::EPSILON {
            let ex = x.exp();
            return Ok((sum0 * ex, sum1 * 2.0 / x * ex));
        }
    }
    Err(SpecfunError::NoConvergence { function: "bessel_k (Temme series)" })
}

/// e^x K_μ(x), e^x K_{μ+1}(x) for |μ| ≤ 1/2 and x ≥ 2 (Steed's CF2).
fn steed_cf2(mu: f64, x: f64) -> Result<(f64, f64), SpecfunError> {
    let mut bi = 2.0 * (1.0 + x);
    let mut di = 1.0 / bi;
    let mut delhi = di;
    let mut hi = di;
    let mut qi = 0.0;
    let mut qip1 = 1.0;
    let mut ai = -(0.25 - mu * mu);
    let a1 = ai;
    let mut ci = -ai;
    let mut bqi = -ai;
    let mut s = 1.0 + bqi * delhi;
    let mut converged = false;
    for i in 2..=MAX_SERIES_TERMS {
        ai -= 2.0 * (i - 1) as f64;
        ci = -ai * ci / i as f64;
        let tmp = (qi - bi * qip1) / ai;
        qi = qip1;
        qip1 = tmp;
        bqi += ci * qip1;
        bi += 2.0;
        di = 1.0 / (bi + ai * di);
        delhi *= bi * di - 1.0;
        hi += delhi;
        let dels = bqi * delhi;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecfunError::NoConvergence { function: "bessel_k (CF2)" });
    }
    hi *= -a1;
    let k_mu = (PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - hi) / x;
    Ok((k_mu, k_mu1))
}

fn check_argument(function: &'static str, mu: f64, x: f64) -> Result<(), SpecfunError> {
    if !mu.is_finite() {
        return Err(SpecfunError::Domain { function, condition: "finite order", value: mu });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain { function, condition: "x > 0 and finite", value: x });
    }
    Ok(())
}

/// Exponentially scaled e^x K_μ(x) for real μ and x > 0.
pub fn bessel_k_scaled(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    check_argument("bessel_k_scaled", mu, x)?;
    let nu = mu.abs();
    let steps = (nu + 0.5).floor();
    let mu0 = nu - steps;
    let (mut k, mut k1) = if x < TEMME_THRESHOLD {
        temme_series(mu0, x)?
    } else {
        steed_cf2(mu0, x)?
    };
    let two_over_x = 2.0 / x;
    for n in 0..steps as usize {
        let next = (mu0 + n as f64 + 1.0) * two_over_x * k1 + k;
        k = k1;
        k1 = next;
        if !k.is_finite() {
            return Err(SpecfunError::Overflow { function: "bessel_k", value: x });
        }
    }
    if !k.is_finite() {
        return Err(SpecfunError::Overflow { function: "bessel_k", value: x });
    }
    Ok(k)
}

/// K_μ(x) for real μ and x > 0. Overflow (tiny x, large |μ|) is an error,
/// never a silent infinity; underflow for very large x returns 0.
pub fn bessel_k(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    let scaled = bessel_k_scaled(mu, x)?;
    let k = scaled * (-x).exp();
    if k.is_infinite() {
        return Err(SpecfunError::Overflow { function: "bessel_k", value: x });
    }
    Ok(k)
}

/// ln K_μ(x), finite for every x > 0 representable in f64.
pub fn ln_bessel_k(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    check_argument("ln_bessel_k", mu, x)?;
    ln_bessel_k_of_ln(mu, x.ln())
}

// Beyond e^20 the two-term Hankel series is exact to double precision for moderate orders.
const LARGE_X_LN: f64 = 20.0;

/// ln K_μ(e^t) as a function of t = ln x. Accepts t far below the f64
/// exponent range (K at such arguments overflows, its logarithm does not).
pub fn ln_bessel_k_of_ln(mu: f64, ln_x: f64) -> Result<f64, SpecfunError> {
    if !mu.is_finite() || ln_x.is_nan() || ln_x == f64::INFINITY {
        return Err(SpecfunError::Domain {
            function: "ln_bessel_k_of_ln",
            condition: "finite order and ln x < +inf",
            value: ln_x,
        });
    }
    if ln_x > LARGE_X_LN {
        let x = ln_x.exp();
        let m = 4.0 * mu * mu;
        return Ok(0.5 * (std::f64::consts::FRAC_PI_2.ln() - ln_x) - x + ((m - 1.0) / (8.0 * x)).ln_1p());
    }
    if ln_x >= SMALL_X_LN {
        let x = ln_x.exp();
        let scaled = bessel_k_scaled(mu, x)?;
        return Ok(scaled.ln() - x);
    }
    Ok(ln_bessel_k_small(mu.abs(), ln_x))
}

/// Two-term small-argument expansion; relative error O(x²) for x < 1e-8.
fn ln_bessel_k_small(nu: f64, ln_x: f64) -> f64 {
    let l = ln_x - std::f64::consts::LN_2; // ln(x/2)
    if nu == 0.0 {
        return (-l - EULER_GAMMA).ln();
    }
    let ln_half_gamma = log_gamma_unchecked(nu) - std::f64::consts::LN_2;
    if nu < 1.0 {
        // K ≈ Γ(ν)/2 (x/2)^{-ν} [1 - Γ(1-ν)/Γ(1+ν) (x/2)^{2ν}]
        let y = 2.0 * nu * l + log_gamma_reflection_gap(nu);
        ln_half_gamma - nu * l + (-y.exp_m1()).ln()
    } else {
        ln_half_gamma - nu * l
    }
}

/// Bessel function of the first kind J_ν(x) for ν ≥ 0 and x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(SpecfunError::Domain { function: "bessel_j", condition: "nu >= 0", value: nu });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain { function: "bessel_j", condition: "x >= 0", value: x });
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= 12.0 + nu {
        Ok(bessel_j_series(nu, x))
    } else {
        Ok(bessel_j_hankel(nu, x))
    }
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - log_gamma_unchecked(nu + 1.0)).exp();
    let q = -half * half;
    let mut sum = term;
    for m in 1..500 {
        let mf = m as f64;
        term *= q / (mf * (mf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && mf > half {
            break;
        }
    }
    sum
}

fn bessel_j_hankel(nu: f64, x: f64) -> f64 {
    let four_nu2 = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (four_nu2 - odd * odd) / (k as f64 * 8.0 * x);
        }
        if term.abs() > last && k > 2 {
            break;
        }
        last = term.abs();
        // a_k contributes to P (even k) or Q (odd k) with alternating signs.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_integer_closed_forms() {
        for &x in &[1e-6, 1e-3, 0.1, 0.7, 1.0, 1.99, 2.0, 2.5, 7.0, 20.0, 50.0] {
            let k_half = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(rel(bessel_k(0.5, x).unwrap(), k_half) < 1e-12, "x={x}");
            let k_3half = k_half * (1.0 + 1.0 / x);
            assert!(rel(bessel_k(1.5, x).unwrap(), k_3half) < 1e-10, "x={x}");
        }
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), 0.461_068_504_4) < 1e-9);
        assert!(rel(bessel_k(-0.5, 2.0).unwrap(), 0.119_937_771_9) < 1e-9);
    }

    #[test]
    fn reference_values() {
        // mpmath besselk at 25 digits
        let cases = [
            (1.25, 0.7, 1.346_722_029_617_968_2),
            (0.0, 1e-8, 18.536_612_259_610_778),
            (0.0, 0.5, 0.924_419_071_227_665_9),
            (0.3, 1e-3, 14.406_547_529_041_027),
            (1.0, 2.0, 0.139_865_881_816_522_43),
            (2.5, 3.0, 0.084_060_631_974_117_38),
            (4.7, 0.05, 261_206_668.805_565_38),
            (5.0, 50.0, 4.367_182_254_100_986e-23),
            (0.25, 10.0, 1.783_318_443_980_639_2e-5),
            (1.75, 1e-6, 48_878_464_655.746_8),
            (0.001, 0.3, 1.372_461_244_006_594_8),
            (3.0, 1.9999, 0.647_507_888_316_024),
            (3.0, 2.0001, 0.647_262_920_745_458_7),
        ];
        for (mu, x, expected) in cases {
            let got = bessel_k(mu, x).unwrap();
            assert!(rel(got, expected) < 1e-10, "K_{mu}({x}) = {got}, want {expected}");
        }
    }

    #[test]
    fn order_symmetry() {
        for &mu in &[0.1, 0.5, 1.25, 2.75, 4.9] {
            for &x in &[1e-5, 0.3, 1.9, 2.1, 9.0] {
                let a = bessel_k(mu, x).unwrap();
                let b = bessel_k(-mu, x).unwrap();
                assert!(rel(a, b) <= 1e-12);
            }
        }
    }

    #[test]
    fn log_entry_points_agree_with_direct() {
        for &mu in &[0.0, 0.2, 0.5, 0.75, 1.0, 1.3, 3.5] {
            for &x in &[1e-7, 1e-3, 0.5, 3.0, 40.0] {
                let direct = bessel_k(mu, x).unwrap().ln();
                let via_ln = ln_bessel_k(mu, x).unwrap();
                assert!((direct - via_ln).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn small_argument_expansion_is_continuous() {
        // Both sides of the 1e-8 switch must agree closely.
        for &mu in &[0.0, 1e-6, 0.01, 0.25, 0.5, 0.9, 1.0, 1.2, 2.5] {
            let below = ln_bessel_k_of_ln(mu, SMALL_X_LN - 1e-9).unwrap();
            let above = bessel_k_scaled(mu, 1e-8 * (1.0 + 2e-9)).unwrap().ln() - 1e-8;
            assert!((below - above).abs() < 1e-9 * above.abs().max(1.0), "mu={mu}");
        }
    }

    #[test]
    fn extreme_small_arguments_in_log_space() {
        // K_0(x) ≈ -ln(x/2) - γ
        let t = -5000.0;
        let expected = (-(t - std::f64::consts::LN_2) - EULER_GAMMA).ln();
        assert!((ln_bessel_k_of_ln(0.0, t).unwrap() - expected).abs() < 1e-14);
        // K_2(x) ≈ 2/x² at leading order
        let got = ln_bessel_k_of_ln(2.0, t).unwrap();
        assert!((got - (2.0f64.ln() - 2.0 * t)).abs() < 1e-10);
    }

    #[test]
    fn overflow_is_signalled() {
        assert!(matches!(bessel_k(40.0, 1e-10), Err(SpecfunError::Overflow { .. })));
        assert!(bessel_k(1.0, 0.0).is_err());
        assert!(bessel_k(1.0, -2.0).is_err());
    }

    #[test]
    fn bessel_j_reference_values() {
        let cases = [
            (0.5, 3.0, 0.065_008_182_877_375_78),
            (1.0, 5.0, -0.327_579_137_591_465_2),
            (1.0, 15.0, 0.205_104_038_613_522_76),
            (0.75, 12.5, -0.097_519_493_686_361_76),
            (2.75, 30.0, 0.144_990_062_373_973_57),
            (1.5, 0.1, 0.008_402_034_301_500_144),
            (1.0, 12.0, -0.223_447_104_490_627_6),
        ];
        for (nu, x, expected) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - expected).abs() < 1e-11, "J_{nu}({x}) = {got}");
        }
        for &x in &[0.3, 4.0, 11.9, 12.1, 13.0, 40.0, 400.0] {
            let closed = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - closed).abs() < 1e-12, "x={x}");
        }
    }
}
