//! Globally adaptive 21-point Gauss–Kronrod quadrature on finite intervals
//! and half-lines.
//!
//! Half-lines are mapped onto [0, 1) with x = a + t/(1 - t). Integrands with
//! an algebraic endpoint singularity close to non-integrable, or with slowly
//! decaying power-law tails, should first be rewritten on a logarithmic
//! scale (see [`Integrator::integrate_decaying`]).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

/// Default absolute tolerance for unit-scale integrals.
pub const DEFAULT_TOL: f64 = 1e-10;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain {
    /// [a, b] with a ≤ b.
    Finite(f64, f64),
    /// [a, +∞).
    UpperRay(f64),
    /// (-∞, b].
    LowerRay(f64),
}

/// Outcome of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: best estimate {} ± {} after {} evaluations", .best.value, .best.abs_error_estimate, .best.evaluations)]
    NoConvergence { best: QuadratureResult },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

impl QuadratureError {
    /// Best available estimate when the failure was a tolerance miss.
    pub fn best_estimate(&self) -> Option<QuadratureResult> {
        match self {
            QuadratureError::NoConvergence { best } => Some(*best),
            _ => None,
        }
    }
}

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self { abs_tol: DEFAULT_TOL, rel_tol: 0.0, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Single 21-point Kronrod panel: (integral, error estimate, |f| integral).
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64), QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { at: x })
        }
    };
    let fc = eval(center)?;
    let mut result_k = fc * WGK[10];
    let mut result_g = 0.0;
    let mut result_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let integral = result_k * half;
    let abs_integral = result_abs * half.abs();
    let asc = result_asc * half.abs();
    let mut err = ((result_k - result_g) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_integral > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_integral);
    }
    Ok((integral, err, abs_integral))
}

impl Integrator {
    pub fn new(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }

    /// Relative-tolerance integrator, for integrals whose scale is not known
    /// in advance.
    pub fn relative(rel_tol: f64) -> Self {
        Self { abs_tol: 0.0, rel_tol, max_intervals: 4000 }
    }

    pub fn with_max_intervals(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }

    /// Integrates `f` over `domain`.
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        domain: Domain,
    ) -> Result<QuadratureResult, QuadratureError> {
        match domain {
            Domain::Finite(a, b) => {
                if !(a.is_finite() && b.is_finite()) || a > b {
                    return Err(QuadratureError::InvalidDomain(format!("[{a}, {b}]")));
                }
                self.adaptive(&f, a, b)
            }
            Domain::UpperRay(a) => {
                if !a.is_finite() {
                    return Err(QuadratureError::InvalidDomain(format!("[{a}, inf)")));
                }
                let mapped = |t: f64| {
                    let u = 1.0 - t;
                    if u <= 0.0 {
                        return 0.0;
                    }
                    f(a + t / u) / (u * u)
                };
                self.adaptive(&mapped, 0.0, 1.0)
            }
            Domain::LowerRay(b) => {
                if !b.is_finite() {
                    return Err(QuadratureError::InvalidDomain(format!("(-inf, {b}]")));
                }
                let mapped = |t: f64| {
                    let u = 1.0 - t;
                    if u <= 0.0 {
                        return 0.0;
                    }
                    f(b - t / u) / (u * u)
                };
                self.adaptive(&mapped, 0.0, 1.0)
            }
        }
    }

    /// ∫₀^∞ φ(u) du for φ decaying like e^{-rate·u} up to slowly varying
    /// factors. The substitution u = w / rate makes the decay unit-rate, so
    /// near-zero rates (nearly non-integrable power laws written on a
    /// log scale) cost no more than rate = 1.
    pub fn integrate_decaying<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        rate: f64,
    ) -> Result<QuadratureResult, QuadratureError> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(QuadratureError::InvalidDomain(format!("decay rate {rate} must be > 0")));
        }
        let scaled = Integrator { abs_tol: self.abs_tol * rate, ..*self };
        let r = scaled.integrate(|w| phi(w / rate), Domain::UpperRay(0.0));
        let rescale = |q: QuadratureResult| QuadratureResult {
            value: q.value / rate,
            abs_error_estimate: q.abs_error_estimate / rate,
            evaluations: q.evaluations,
        };
        match r {
            Ok(q) => Ok(rescale(q)),
            Err(QuadratureError::NoConvergence { best }) => {
                Err(QuadratureError::NoConvergence { best: rescale(best) })
            }
            Err(e) => Err(e),
        }
    }

    fn adaptive<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
    ) -> Result<QuadratureResult, QuadratureError> {
        if a == b {
            return Ok(QuadratureResult { value: 0.0, abs_error_estimate: 0.0, evaluations: 0 });
        }
        let (v, e, abs_v) = kronrod21(f, a, b)?;
        let mut evaluations = 21;
        let mut heap = BinaryHeap::new();
        heap.push(Segment { a, b, value: v, error: e });
        let mut total = v;
        let mut total_err = e;
        let mut total_abs = abs_v;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            let roundoff = 100.0 * f64::EPSILON * total_abs;
            if total_err <= target || total_err <= roundoff {
                break;
            }
            if heap.len() >= self.max_intervals {
                return Err(QuadratureError::NoConvergence {
                    best: summarize(&heap, evaluations),
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                heap.push(worst);
                return Err(QuadratureError::NoConvergence {
                    best: summarize(&heap, evaluations),
                });
            }
            let (v1, e1, a1) = kronrod21(f, worst.a, mid)?;
            let (v2, e2, a2) = kronrod21(f, mid, worst.b)?;
            evaluations += 42;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            total_abs += a1 + a2;
            heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
            heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
            if heap.len() % 64 == 0 {
                // refresh running sums against drift
                let s = summarize(&heap, evaluations);
                total = s.value;
                total_err = s.abs_error_estimate;
            }
        }
        Ok(summarize(&heap, evaluations))
    }
}

fn summarize(heap: &BinaryHeap<Segment>, evaluations: usize) -> QuadratureResult {
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut err = 0.0;
    for s in heap.iter() {
        // Kahan summation; many small panels near singular endpoints.
        let y = s.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        err += s.error;
    }
    QuadratureResult { value, abs_error_estimate: err, evaluations }
}

/// Integrates `f` over `domain` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    tol: f64,
) -> Result<QuadratureResult, QuadratureError> {
    if !(tol > 0.0) {
        return Err(QuadratureError::InvalidDomain(format!("tolerance {tol} must be > 0")));
    }
    Integrator::new(tol).integrate(f, domain)
}
