//! Uncertainty products, inequality checks over index grids, the search for
//! arbitrarily small products in D0, and parameter sweeps.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::entropy::{
    renyi_power_continuous_with, renyi_power_discrete, renyi_power_torus, EntropyError, EntropyPower, Method, Path,
};
use crate::regions::{bound_general, classify, maassen_bound, BoundCase, GeneralBound, IndexPair, Region, RegionError};
use crate::states::{DiscreteState, StateError, Wavefunction};
use crate::transforms::{continuous_transform, dft, series_transform, TransformError};

pub use crate::regions::gaussian_product_analytic;

/// Relative slack on bound comparisons when both powers are closed-form or
/// exact sums.
pub const ANALYTIC_SLACK: f64 = 1e-9;
/// Relative slack when either power comes from quadrature.
pub const QUADRATURE_SLACK: f64 = 1e-6;
/// Iteration cap for each stage of the counterexample search.
pub const COUNTEREXAMPLE_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("product {best_product} at nu = {best_nu} did not fall below {epsilon} within the iteration budget")]
    NotReached { best_nu: f64, best_product: f64, epsilon: f64 },
}

impl VerifyError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            VerifyError::Entropy(EntropyError::Quadrature(_)) | VerifyError::NotReached { .. } => true,
            VerifyError::Transform(e) => {
                matches!(e, TransformError::Truncation { .. } | TransformError::Renormalization { .. })
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfied {
    Holds,
    Violated,
    NoBound,
}

impl Satisfied {
    pub fn tag(self) -> &'static str {
        match self {
            Satisfied::Holds => "holds",
            Satisfied::Violated => "violated",
            Satisfied::NoBound => "no-bound",
        }
    }
}

impl fmt::Display for Satisfied {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// N_α of a state, N_β of its conjugate, and how their product compares with
/// the applicable bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport {
    pub pair: IndexPair,
    pub setting: BoundCase,
    pub region: Region,
    pub n_alpha: EntropyPower,
    pub n_beta: EntropyPower,
    pub product: f64,
    pub bound: Option<f64>,
    pub satisfied: Satisfied,
    /// product − bound.
    pub margin: Option<f64>,
    /// Absolute slack granted to the comparison.
    pub tolerance: f64,
}

impl ProductReport {
    fn build(pair: IndexPair, setting: BoundCase, n_alpha: EntropyPower, n_beta: EntropyPower, bound: Option<f64>) -> Self {
        let product = n_alpha.value * n_beta.value;
        let exact = |m: Method| matches!(m, Method::Analytic | Method::DiscreteSum);
        let rel = if exact(n_alpha.method) && exact(n_beta.method) { ANALYTIC_SLACK } else { QUADRATURE_SLACK };
        let tolerance = bound.map_or(0.0, |b| rel * b);
        let margin = bound.map(|b| product - b);
        let satisfied = match margin {
            None => Satisfied::NoBound,
            Some(m) if m >= -tolerance => Satisfied::Holds,
            Some(_) => Satisfied::Violated,
        };
        Self { pair, setting, region: classify(pair), n_alpha, n_beta, product, bound, satisfied, margin, tolerance }
    }

    /// A violation inside D contradicts a proved inequality and therefore
    /// points at the implementation; small products in D0 are expected.
    pub fn is_defect(&self) -> bool {
        self.satisfied == Satisfied::Violated
    }
}

/// A state in one of the three transform settings.
#[derive(Debug, Clone, PartialEq)]
pub enum Subject {
    Continuous(Wavefunction),
    Discrete(DiscreteState),
}

/// Product for the setting implied by `setting`; discrete–continuous uses
/// the one-dimensional series transform.
pub fn uncertainty_product(
    subject: &Subject,
    pair: IndexPair,
    setting: BoundCase,
    path: Path,
) -> Result<ProductReport, VerifyError> {
    match (subject, setting) {
        (Subject::Continuous(w), BoundCase::ContinuousContinuous) => product_continuous(w, pair, path),
        (Subject::Discrete(s), BoundCase::DiscreteDiscrete { n }) => {
            if n != s.len() {
                return Err(VerifyError::Precondition(format!("n = {n} does not match the state length {}", s.len())));
            }
            product_discrete(s, pair)
        }
        (Subject::Discrete(s), BoundCase::DiscreteContinuous) => product_discrete_continuous(s, 1, pair),
        (_, setting) => Err(VerifyError::Precondition(format!(
            "setting {} does not apply to this kind of state",
            setting.tag()
        ))),
    }
}

/// N_α(Ψ) N_β(Ψ̂) for a continuous state. Closed-form partners are used
/// when they exist; sampled grids go through the numerical transform.
pub fn product_continuous(state: &Wavefunction, pair: IndexPair, path: Path) -> Result<ProductReport, VerifyError> {
    let partner = conjugate_of(state)?;
    let n_alpha = renyi_power_continuous_with(state, pair.alpha, path)?;
    let n_beta = renyi_power_continuous_with(&partner, pair.beta, path)?;
    Ok(ProductReport::build(pair, BoundCase::ContinuousContinuous, n_alpha, n_beta, bound_general(pair).value()))
}

fn conjugate_of(state: &Wavefunction) -> Result<Wavefunction, VerifyError> {
    if state.shape().name() == "sampled" {
        let t = continuous_transform(state)?;
        return Ok(Wavefunction::sampled(t.grid)?);
    }
    Ok(state.fourier_partner()?)
}

/// N_α(Ψ) N_β(DFT Ψ) against (2n/(n+1))², valid for every pair.
pub fn product_discrete(state: &DiscreteState, pair: IndexPair) -> Result<ProductReport, VerifyError> {
    let n = state.len();
    let n_alpha = renyi_power_discrete(state, pair.alpha)?;
    let n_beta = renyi_power_discrete(&dft(state), pair.beta)?;
    Ok(ProductReport::build(pair, BoundCase::DiscreteDiscrete { n }, n_alpha, n_beta, Some(maassen_bound(n)?)))
}

/// N_α(Ψ) N_β(series transform) against 2π in D; no bound in D0.
pub fn product_discrete_continuous(state: &DiscreteState, d: usize, pair: IndexPair) -> Result<ProductReport, VerifyError> {
    let n_alpha = renyi_power_discrete(state, pair.alpha)?;
    let n_beta = renyi_power_torus(&series_transform(state, d)?, pair.beta)?;
    let bound = if classify(pair).in_d() { Some(2.0 * PI) } else { None };
    Ok(ProductReport::build(pair, BoundCase::DiscreteContinuous, n_alpha, n_beta, bound))
}

/// Pair excluded because an entropy power diverges. The product is then
/// +∞ (holds trivially) or 0 (only possible in D0).
#[derive(Debug, Clone, PartialEq)]
pub struct Excluded {
    pub family: String,
    pub pair: IndexPair,
    pub limit: f64,
    pub condition: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub family: String,
    pub pair: IndexPair,
    pub error: VerifyError,
}

/// Outcome of a grid verification. Nothing is dropped: every (state, pair)
/// ends up in exactly one of the three lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionVerification {
    pub reports: Vec<ProductReport>,
    pub excluded: Vec<Excluded>,
    pub failures: Vec<Failure>,
}

impl RegionVerification {
    pub fn violations(&self) -> Vec<&ProductReport> {
        self.reports.iter().filter(|r| r.is_defect()).collect()
    }

    /// Divergences with limit 0 inside D would contradict the bound.
    pub fn vanishing_in_d(&self) -> Vec<&Excluded> {
        self.excluded.iter().filter(|e| e.limit == 0.0 && classify(e.pair).in_d()).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.violations().is_empty() && self.vanishing_in_d().is_empty()
    }
}

/// Evaluates every subject at every pair in parallel; results keep the
/// (subject, pair) order.
pub fn verify_region(
    subjects: &[Subject],
    pairs: &[IndexPair],
    setting: BoundCase,
    path: Path,
) -> RegionVerification {
    let jobs: Vec<(usize, IndexPair)> =
        (0..subjects.len()).flat_map(|i| pairs.iter().map(move |&p| (i, p))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(i, pair)| {
            let setting = match (setting, &subjects[i]) {
                (BoundCase::DiscreteDiscrete { .. }, Subject::Discrete(s)) => BoundCase::DiscreteDiscrete { n: s.len() },
                _ => setting,
            };
            (i, pair, uncertainty_product(&subjects[i], pair, setting, path))
        })
        .collect();
    let mut out = RegionVerification::default();
    for (i, pair, r) in results {
        let family = subject_family(&subjects[i]);
        match r {
            Ok(report) => out.reports.push(report),
            Err(VerifyError::Entropy(EntropyError::Divergent { condition, limit })) => {
                out.excluded.push(Excluded { family, pair, limit, condition })
            }
            Err(error) => out.failures.push(Failure { family, pair, error }),
        }
    }
    out
}

fn subject_family(s: &Subject) -> String {
    match s {
        Subject::Continuous(w) => w.family(),
        Subject::Discrete(d) => format!("discrete(n={})", d.len()),
    }
}

/// Lower edge of the Student-t parameter range at a pair: both powers
/// exist iff ν exceeds max(0, d(1−α)/α, d(β−1)/β).
pub fn student_t_nu_floor(d: usize, pair: IndexPair) -> f64 {
    let df = d as f64;
    let from_alpha = if pair.alpha > 0.0 { df * (1.0 - pair.alpha) / pair.alpha } else { f64::INFINITY };
    let from_beta = if pair.beta > 0.0 { df * (pair.beta - 1.0) / pair.beta } else { 0.0 };
    from_alpha.max(from_beta).max(0.0)
}

/// Product for the Student-t state at ν.
pub fn student_t_product(d: usize, nu: f64, pair: IndexPair, path: Path) -> Result<ProductReport, VerifyError> {
    product_continuous(&Wavefunction::student_t(d, nu)?, pair, path)
}

/// Finds ν with a Student-t product below `epsilon` for a pair in D0.
///
/// The product tends to 0 as ν approaches ν* = max(0, d(β−1)/β). The
/// search scans ν − ν* geometrically downward until the product drops below
/// ε, then bisects on ln(ν − ν*) toward the crossing. The returned ν is the
/// largest one found below ε.
pub fn counterexample(pair: IndexPair, epsilon: f64, d: usize) -> Result<(f64, ProductReport), VerifyError> {
    if classify(pair) != Region::D0 {
        return Err(VerifyError::Precondition(format!(
            "pair {pair} is in {}, not D0; a lower bound exists there",
            classify(pair).tag()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(VerifyError::Precondition(format!("epsilon = {epsilon} must be > 0")));
    }
    if d == 0 {
        return Err(VerifyError::Precondition("d >= 1".into()));
    }
    let nu_star = student_t_nu_floor(d, pair);
    let eval = |u: f64| student_t_product(d, nu_star + u.exp(), pair, Path::Auto);

    let mut upper = (d as f64).ln(); // ln(ν − ν*) where product ≥ ε
    let mut best: Option<(f64, ProductReport)> = None;
    let mut lower = None;
    let mut u = upper;
    for _ in 0..COUNTEREXAMPLE_ITERATIONS {
        let r = eval(u)?;
        if best.as_ref().is_none_or(|(_, b)| r.product < b.product) {
            best = Some((nu_star + u.exp(), r.clone()));
        }
        if r.product < epsilon {
            lower = Some((u, r));
            break;
        }
        upper = u;
        u -= std::f64::consts::LN_2;
    }
    let Some((mut lo, mut lo_report)) = lower else {
        let (best_nu, r) = best.expect("at least one evaluation");
        return Err(VerifyError::NotReached { best_nu, best_product: r.product, epsilon });
    };
    if lo == upper {
        return Ok((nu_star + lo.exp(), lo_report));
    }
    let mut hi = upper;
    for _ in 0..COUNTEREXAMPLE_ITERATIONS {
        if hi - lo < 1e-6 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let r = eval(mid)?;
        if r.product < epsilon {
            lo = mid;
            lo_report = r;
        } else {
            hi = mid;
        }
    }
    Ok((nu_star + lo.exp(), lo_report))
}

/// |P(MΨ) − P(Ψ)| / P(Ψ) for the product P at `pair`.
pub fn scale_invariance_check(
    state: &Wavefunction,
    pair: IndexPair,
    m: &DMatrix<f64>,
    path: Path,
) -> Result<f64, VerifyError> {
    let base = product_continuous(state, pair, path)?.product;
    let scaled = product_continuous(&state.rescale(m)?, pair, path)?.product;
    Ok((scaled - base).abs() / base)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// N_λ of a fixed state against λ.
    Lambda,
    /// N_α(Ψ) N_α(Ψ̂) against α.
    AlphaDiagonal,
    /// Student-t product at a fixed pair against ν.
    Nu,
}

impl SweepKind {
    pub fn tag(self) -> &'static str {
        match self {
            SweepKind::Lambda => "lambda",
            SweepKind::AlphaDiagonal => "alpha-diagonal",
            SweepKind::Nu => "nu",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Lambda { state: Wavefunction, grid: Vec<f64> },
    AlphaDiagonal { state: Wavefunction, grid: Vec<f64> },
    Nu { d: usize, pair: IndexPair, grid: Vec<f64> },
}

/// One grid point. Missing values mark a gap (outside the existence domain
/// or a failed evaluation); `note` says which.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub param: f64,
    pub n_alpha: Option<f64>,
    pub n_beta: Option<f64>,
    pub product: Option<f64>,
    pub bound: Option<f64>,
    pub region: Region,
    pub method: Option<Method>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub parameter: &'static str,
    pub family: String,
    pub d: usize,
    pub pair: Option<IndexPair>,
    pub records: Vec<SweepRecord>,
}

pub const SWEEP_CSV_HEADER: &str = "param,N_alpha,N_beta,product,bound,region";

impl SweepResult {
    pub fn grid(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.param).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        let cell = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                format_number(r.param),
                cell(r.n_alpha),
                cell(r.n_beta),
                cell(r.product),
                cell(r.bound),
                r.region.tag()
            )?;
        }
        Ok(())
    }

    /// Sidecar metadata; gaps are listed with their reason.
    pub fn metadata(&self, seed: Option<u64>) -> serde_json::Value {
        let gaps: Vec<_> = self
            .records
            .iter()
            .filter_map(|r| r.note.as_ref().map(|n| json!({ "param": format_number(r.param), "reason": n })))
            .collect();
        let methods: Vec<_> = self.records.iter().map(|r| r.method.map(|m| m.tag())).collect();
        json!({
            "kind": self.kind.tag(),
            "parameter": self.parameter,
            "family": self.family,
            "d": self.d,
            "pair": self.pair.map(|p| json!({ "alpha": p.alpha, "beta": p.beta })),
            "points": self.records.len(),
            "tolerances": { "analytic": ANALYTIC_SLACK, "quadrature": QUADRATURE_SLACK },
            "seed": seed,
            "methods": methods,
            "gaps": gaps,
        })
    }
}

fn check_grid(grid: &[f64]) -> Result<(), VerifyError> {
    if grid.is_empty() {
        return Err(VerifyError::Precondition("sweep grid is empty".into()));
    }
    if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VerifyError::Precondition("sweep grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn gap(param: f64, pair: Option<IndexPair>, e: &VerifyError) -> SweepRecord {
    let (region, bound) = match pair {
        Some(p) => (classify(p), bound_general(p).value()),
        None => (classify(IndexPair { alpha: param, beta: param }), None),
    };
    SweepRecord { param, n_alpha: None, n_beta: None, product: None, bound, region, method: None, note: Some(e.to_string()) }
}

fn from_report(param: f64, r: &ProductReport) -> SweepRecord {
    let method = if r.n_alpha.method == Method::Analytic { r.n_beta.method } else { r.n_alpha.method };
    SweepRecord {
        param,
        n_alpha: Some(r.n_alpha.value),
        n_beta: Some(r.n_beta.value),
        product: Some(r.product),
        bound: r.bound,
        region: r.region,
        method: Some(method),
        note: None,
    }
}

/// Runs a sweep; points are evaluated in parallel and reported in grid order.
pub fn sweep(spec: &Sweep, path: Path) -> Result<SweepResult, VerifyError> {
    match spec {
        Sweep::Lambda { state, grid } => {
            check_grid(grid)?;
            let records = grid
                .par_iter()
                .map(|&l| {
                    let region = classify(IndexPair { alpha: l, beta: l });
                    match renyi_power_continuous_with(state, l, path) {
                        Ok(p) => SweepRecord {
                            param: l,
                            n_alpha: Some(p.value),
                            n_beta: None,
                            product: None,
                            bound: None,
                            region,
                            method: Some(p.method),
                            note: p.caveat,
                        },
                        Err(e) => gap(l, None, &e.into()),
                    }
                })
                .collect();
            Ok(SweepResult {
                kind: SweepKind::Lambda,
                parameter: "lambda",
                family: state.family(),
                d: state.dim(),
                pair: None,
                records,
            })
        }
        Sweep::AlphaDiagonal { state, grid } => {
            check_grid(grid)?;
            let partner = conjugate_of(state)?;
            let records = grid
                .par_iter()
                .map(|&a| {
                    let pair = IndexPair { alpha: a, beta: a };
                    let r = (|| -> Result<ProductReport, VerifyError> {
                        let n_alpha = renyi_power_continuous_with(state, a, path)?;
                        let n_beta = renyi_power_continuous_with(&partner, a, path)?;
                        let bound = bound_general(pair).value();
                        Ok(ProductReport::build(pair, BoundCase::ContinuousContinuous, n_alpha, n_beta, bound))
                    })();
                    match r {
                        Ok(r) => from_report(a, &r),
                        Err(e) => gap(a, Some(pair), &e),
                    }
                })
                .collect();
            Ok(SweepResult {
                kind: SweepKind::AlphaDiagonal,
                parameter: "alpha",
                family: state.family(),
                d: state.dim(),
                pair: None,
                records,
            })
        }
        Sweep::Nu { d, pair, grid } => {
            check_grid(grid)?;
            IndexPair::new(pair.alpha, pair.beta)?;
            let records = grid
                .par_iter()
                .map(|&nu| match student_t_product(*d, nu, *pair, path) {
                    Ok(r) => from_report(nu, &r),
                    Err(e) => gap(nu, Some(*pair), &e),
                })
                .collect();
            Ok(SweepResult {
                kind: SweepKind::Nu,
                parameter: "nu",
                family: "student-t".into(),
                d: *d,
                pair: Some(*pair),
                records,
            })
        }
    }
}

/// `n` points from `lo` to `hi`, evenly spaced.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// ν grid from just above the existence floor to 10, denser near the floor.
pub fn default_nu_grid(d: usize, pair: IndexPair, n: usize) -> Vec<f64> {
    let floor = student_t_nu_floor(d, pair);
    let span = 10.0 - floor;
    let (lo, hi) = ((1e-3f64).ln(), span.ln());
    linear_grid(lo, hi, n).into_iter().map(|u| floor + u.exp()).collect()
}

/// Nine significant digits, `.` separator, shortest form without trailing
/// zeros; exponent notation outside [1e-5, 1e9).
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Seeded index pairs inside D: `on_c` on the conjugacy curve, `in_s` in the
/// square S and the rest in D∖(S ∪ C). Indices stay within (0, 5].
pub fn sample_pairs_in_d(total: usize, on_c: usize, in_s: usize, seed: u64) -> Vec<IndexPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(total);
    for _ in 0..on_c.min(total) {
        // α ∈ [0.55, 5] keeps α̃ = α/(2α−1) finite and within (0.5, 5.5]
        let a: f64 = rng.random_range(0.55..5.0);
        out.push(IndexPair { alpha: a, beta: a / (2.0 * a - 1.0) });
    }
    for _ in 0..in_s.min(total - out.len()) {
        out.push(IndexPair { alpha: rng.random_range(0.02..0.5), beta: rng.random_range(0.02..0.5) });
    }
    while out.len() < total {
        let p = IndexPair { alpha: rng.random_range(0.02..5.0), beta: rng.random_range(0.02..5.0) };
        if classify(p) == Region::DMinus {
            out.push(p);
        }
    }
    out
}

/// n × n pairs on a log-spaced grid over [lo, hi]².
pub fn log_pair_grid(lo: f64, hi: f64, n: usize) -> Vec<IndexPair> {
    let axis: Vec<f64> = linear_grid(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
    axis.iter().flat_map(|&a| axis.iter().map(move |&b| IndexPair { alpha: a, beta: b })).collect()
}

/// Result of comparing a bound with the product of an extremal discrete
/// pair, reported without judgment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KroneckerGap {
    pub n: usize,
    pub kronecker_product: f64,
    pub maassen_bound: f64,
}

/// The Kronecker state and its flat DFT give the product n at every pair,
/// which exceeds (2n/(n+1))² for n ≥ 2.
pub fn kronecker_gap(n: usize, pair: IndexPair) -> Result<KroneckerGap, VerifyError> {
    let r = product_discrete(&DiscreteState::kronecker(n, 0)?, pair)?;
    Ok(KroneckerGap { n, kronecker_product: r.product, maassen_bound: maassen_bound(n)? })
}

impl GeneralBound {
    /// Satisfaction status of a product against this bound with relative slack.
    pub fn check(self, product: f64, rel_slack: f64) -> Satisfied {
        match self {
            GeneralBound::NoBound => Satisfied::NoBound,
            GeneralBound::Finite(b) if product >= b * (1.0 - rel_slack) => Satisfied::Holds,
            GeneralBound::Finite(_) => Satisfied::Violated,
        }
    }
}
