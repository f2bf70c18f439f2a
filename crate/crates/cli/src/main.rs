#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use renyi_core::entropy::{renyi_power_continuous_with, EntropyError, EntropyPower, Path};
use renyi_core::regions::{
    bound_general, classify_with_tol, maassen_bound, overlap_bound, BoundCase, IndexPair, Region, CLASSIFY_TOL,
};
use renyi_core::states::{random_discrete_state, DiscreteState, SampledGrid, Wavefunction};
use renyi_core::verify::{
    counterexample, default_nu_grid, format_number, linear_grid, log_pair_grid, sample_pairs_in_d, sweep,
    uncertainty_product, verify_region, ProductReport, RegionVerification, Subject, Sweep, VerifyError,
};

/// Thread-count override for the parallel sweeps and grid checks.
const THREADS_ENV: &str = "RENYI_THREADS";

#[derive(Parser)]
#[command(name = "renyi", version, about = "Rényi entropy powers and uncertainty products of conjugate states")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Region of an index pair.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = CLASSIFY_TOL)]
        tol: f64,
    },
    /// Lower bound on the product for a setting.
    Bound {
        #[arg(long, value_enum, default_value_t = Setting::Cc)]
        setting: Setting,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Alphabet size for the discrete–discrete setting.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rényi entropy power of a state or of its Fourier partner.
    Npower {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        lambda: f64,
        /// Evaluate the conjugate state instead.
        #[arg(long)]
        partner: bool,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
    /// N_alpha(state) N_beta(conjugate) against the applicable bound.
    Product {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = Setting::Cc)]
        setting: Setting,
        #[command(flatten)]
        discrete: DiscreteArgs,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
    /// Tabulate a sweep as CSV (with a JSON sidecar when writing to a file).
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepArg,
        #[command(flatten)]
        state: StateArgs,
        /// Index pair for the nu sweep.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
    /// Check an inequality over many states and index pairs.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Continuous)]
        suite: Suite,
        /// Number of index pairs (continuous suite) or states (discrete suites).
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Alphabet size for the discrete suites.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
    /// Search a Student-t state whose product falls below epsilon in D0.
    Counterexample {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_enum, default_value_t = Family::Gaussian)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Degrees of freedom for the Student families.
    #[arg(long)]
    nu: Option<f64>,
    /// Sampled wavefunction CSV (columns x_1..x_d,re,im) for `--family grid-file`.
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Rescale a grid file to unit norm instead of rejecting it.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct DiscreteArgs {
    /// Discrete state for the dd and dc settings.
    #[arg(long, value_enum, default_value_t = DiscreteKind::Random)]
    discrete: DiscreteKind,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Occupied site of the Kronecker state.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Gaussian,
    StudentT,
    StudentR,
    Laplace,
    Uniform,
    GridFile,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Setting {
    Cc,
    Dd,
    Dc,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Auto,
    Analytic,
    Quadrature,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepArg {
    Lambda,
    Alpha,
    Nu,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Continuous families over pairs in D.
    Continuous,
    /// Random discrete states under the DFT.
    DiscreteDiscrete,
    /// Kronecker and random discrete states under the series transform.
    DiscreteContinuous,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DiscreteKind {
    Kronecker,
    Uniform,
    Random,
}

/// Exit status plus a one-line diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = if e.is_numerical() { 2 } else { 1 };
        Self { code, message: e.to_string() }
    }
}

impl From<EntropyError> for Failure {
    fn from(e: EntropyError) -> Self {
        VerifyError::from(e).into()
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::domain(format!("i/o error: {e}"))
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                VerifyError::from(e).into()
            }
        }
    )*};
}
domain_from!(renyi_core::states::StateError, renyi_core::regions::RegionError);

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::domain(format!("{THREADS_ENV} = {raw:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::numerical(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Outcome {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match &cli.command {
        Command::Classify { pair, tol } => cmd_classify(&mut out, cli.format, pair, *tol)?,
        Command::Bound { setting, alpha, beta, n } => cmd_bound(&mut out, cli.format, *setting, *alpha, *beta, *n)?,
        Command::Npower { state, lambda, partner, path } => {
            cmd_npower(&mut out, cli.format, state, *lambda, *partner, *path)?
        }
        Command::Product { state, pair, setting, discrete, path } => {
            cmd_product(&mut out, cli, state, pair, *setting, discrete, *path)?
        }
        Command::Sweep { kind, state, alpha, beta, min, max, points, path } => {
            let args = SweepArgs { kind: *kind, alpha: *alpha, beta: *beta, min: *min, max: *max, points: *points };
            cmd_sweep(&mut out, cli, state, &args, *path)?
        }
        Command::Verify { suite, count, n, path } => cmd_verify(&mut out, cli, *suite, *count, *n, *path)?,
        Command::Counterexample { pair, epsilon, d } => cmd_counterexample(&mut out, cli.format, pair, *epsilon, *d)?,
    }
    out.flush()?;
    Ok(())
}

fn num(x: f64) -> Value {
    let s = format_number(x);
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => json!(v),
        _ => json!(s),
    }
}

fn pair_text(p: IndexPair) -> String {
    format!("({}, {})", format_number(p.alpha), format_number(p.beta))
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_else(|| "none".into())
}

fn power_json(p: &EntropyPower) -> Value {
    json!({
        "value": num(p.value),
        "lambda": num(p.lambda),
        "method": p.method.tag(),
        "abs_error_estimate": num(p.abs_error_estimate),
        "caveat": p.caveat,
    })
}

fn write_json<W: Write + ?Sized>(out: &mut W, v: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn to_path(p: PathArg) -> Path {
    match p {
        PathArg::Auto => Path::Auto,
        PathArg::Analytic => Path::Analytic,
        PathArg::Quadrature => Path::Quadrature,
    }
}

fn make_pair(p: &PairArgs) -> Result<IndexPair, Failure> {
    Ok(IndexPair::new(p.alpha, p.beta)?)
}

fn region_text(region: Region, pair: IndexPair) -> String {
    let bound = bound_general(pair).value();
    match region {
        Region::D0 => "no uncertainty bound exists".into(),
        Region::C => format!("conjugated indices; sharp bound {}", opt(bound)),
        Region::S => format!("both indices below 1/2; bound {}", opt(bound)),
        Region::DMinus => format!("bound B(max(alpha, beta)) = {}", opt(bound)),
    }
}

fn cmd_classify<W: Write + ?Sized>(out: &mut W, format: Format, p: &PairArgs, tol: f64) -> Outcome {
    let pair = make_pair(p)?;
    if !(tol >= 0.0) {
        return Err(Failure::domain(format!("tol = {tol} violates tol >= 0")));
    }
    let region = classify_with_tol(pair, tol);
    if format == Format::Json {
        return write_json(
            out,
            &json!({
                "alpha": num(pair.alpha),
                "beta": num(pair.beta),
                "region": region.tag(),
                "bound": bound_general(pair).value().map(num),
                "method": "analytic",
            }),
        );
    }
    writeln!(out, "{}", region.tag())?;
    writeln!(out, "{}", region_text(region, pair))?;
    Ok(())
}

fn cmd_bound<W: Write + ?Sized>(
    out: &mut W,
    format: Format,
    setting: Setting,
    alpha: Option<f64>,
    beta: Option<f64>,
    n: Option<usize>,
) -> Outcome {
    let need_pair = || -> Result<IndexPair, Failure> {
        match (alpha, beta) {
            (Some(a), Some(b)) => Ok(IndexPair::new(a, b)?),
            _ => Err(Failure::domain("this setting requires --alpha and --beta")),
        }
    };
    let bound = match setting {
        Setting::Cc => bound_general(need_pair()?).value(),
        Setting::Dc => {
            let pair = need_pair()?;
            if classify_with_tol(pair, CLASSIFY_TOL).in_d() {
                Some(2.0 * std::f64::consts::PI)
            } else {
                None
            }
        }
        Setting::Dd => {
            let n = n.ok_or_else(|| Failure::domain("setting dd requires --n"))?;
            Some(maassen_bound(n)?)
        }
    };
    if format == Format::Json {
        return write_json(out, &json!({ "bound": bound.map(num), "method": "analytic" }));
    }
    writeln!(out, "{}", opt(bound))?;
    Ok(())
}

fn build_state(args: &StateArgs) -> Result<Wavefunction, Failure> {
    let need_nu = || args.nu.ok_or_else(|| Failure::domain("this family requires --nu"));
    let d = args.d;
    let w = match args.family {
        Family::Gaussian => Wavefunction::gaussian(d)?,
        Family::StudentT => Wavefunction::student_t(d, need_nu()?)?,
        Family::StudentR => Wavefunction::student_r(d, need_nu()?)?,
        Family::Uniform => Wavefunction::uniform_ball(d)?,
        Family::Laplace => {
            if d != 1 {
                return Err(Failure::domain(format!("laplace is defined for d = 1 (got d = {d})")));
            }
            Wavefunction::laplace()
        }
        Family::GridFile => {
            let path = args.grid_file.as_ref().ok_or_else(|| Failure::domain("grid-file requires --grid-file"))?;
            let grid = read_grid(path)?;
            let grid = if args.normalize { grid.normalized()?.0 } else { grid };
            Wavefunction::sampled(grid)?
        }
    };
    Ok(w)
}

fn read_grid(path: &FsPath) -> Result<SampledGrid, Failure> {
    let f = File::open(path).map_err(|e| Failure::domain(format!("cannot open {}: {e}", path.display())))?;
    Ok(SampledGrid::read_csv(f)?)
}

fn cmd_npower<W: Write + ?Sized>(
    out: &mut W,
    format: Format,
    args: &StateArgs,
    lambda: f64,
    partner: bool,
    path: PathArg,
) -> Outcome {
    let state = build_state(args)?;
    let target = if partner { state.fourier_partner()? } else { state };
    let p = renyi_power_continuous_with(&target, lambda, to_path(path))?;
    if format == Format::Json {
        let mut v = power_json(&p);
        v["family"] = json!(target.family());
        v["d"] = json!(target.dim());
        return write_json(out, &v);
    }
    writeln!(out, "{} {}", format_number(p.value), p.method.tag())?;
    if let Some(c) = &p.caveat {
        writeln!(out, "note: {c}")?;
    }
    Ok(())
}

fn discrete_state(args: &DiscreteArgs, seed: u64) -> Result<DiscreteState, Failure> {
    Ok(match args.discrete {
        DiscreteKind::Kronecker => DiscreteState::kronecker(args.n, args.index)?,
        DiscreteKind::Uniform => DiscreteState::uniform(args.n)?,
        DiscreteKind::Random => random_discrete_state(args.n, seed)?,
    })
}

fn report_json(r: &ProductReport) -> Value {
    json!({
        "alpha": num(r.pair.alpha),
        "beta": num(r.pair.beta),
        "setting": r.setting.tag(),
        "region": r.region.tag(),
        "N_alpha": power_json(&r.n_alpha),
        "N_beta": power_json(&r.n_beta),
        "product": { "value": num(r.product), "method": product_method(r) },
        "bound": r.bound.map(|b| json!({ "value": num(b), "method": "analytic" })),
        "margin": r.margin.map(num),
        "tolerance": num(r.tolerance),
        "satisfied": r.satisfied.tag(),
    })
}

fn product_method(r: &ProductReport) -> &'static str {
    if r.n_alpha.method == r.n_beta.method {
        r.n_alpha.method.tag()
    } else {
        "mixed"
    }
}

fn write_report<W: Write + ?Sized>(out: &mut W, r: &ProductReport) -> Outcome {
    writeln!(out, "N_alpha {} {}", format_number(r.n_alpha.value), r.n_alpha.method.tag())?;
    writeln!(out, "N_beta {} {}", format_number(r.n_beta.value), r.n_beta.method.tag())?;
    writeln!(out, "product {}", format_number(r.product))?;
    writeln!(out, "bound {}", opt(r.bound))?;
    writeln!(out, "margin {}", opt(r.margin))?;
    writeln!(out, "region {}", r.region.tag())?;
    writeln!(out, "status {}", r.satisfied.tag())?;
    Ok(())
}

fn cmd_product<W: Write + ?Sized>(
    out: &mut W,
    cli: &Cli,
    state: &StateArgs,
    p: &PairArgs,
    setting: Setting,
    discrete: &DiscreteArgs,
    path: PathArg,
) -> Outcome {
    let pair = make_pair(p)?;
    let (subject, case) = match setting {
        Setting::Cc => (Subject::Continuous(build_state(state)?), BoundCase::ContinuousContinuous),
        Setting::Dd => {
            let s = discrete_state(discrete, cli.seed)?;
            let n = s.len();
            (Subject::Discrete(s), BoundCase::DiscreteDiscrete { n })
        }
        Setting::Dc => (Subject::Discrete(discrete_state(discrete, cli.seed)?), BoundCase::DiscreteContinuous),
    };
    let r = uncertainty_product(&subject, pair, case, to_path(path))?;
    if cli.format == Format::Json {
        return write_json(out, &report_json(&r));
    }
    write_report(out, &r)
}

struct SweepArgs {
    kind: SweepArg,
    alpha: Option<f64>,
    beta: Option<f64>,
    min: Option<f64>,
    max: Option<f64>,
    points: usize,
}

fn cmd_sweep<W: Write + ?Sized>(out: &mut W, cli: &Cli, state: &StateArgs, a: &SweepArgs, path: PathArg) -> Outcome {
    if a.points < 2 {
        return Err(Failure::domain(format!("points = {} violates points >= 2", a.points)));
    }
    let spec = match a.kind {
        SweepArg::Lambda => {
            let grid = linear_grid(a.min.unwrap_or(0.05), a.max.unwrap_or(5.0), a.points);
            Sweep::Lambda { state: build_state(state)?, grid }
        }
        SweepArg::Alpha => {
            let grid = linear_grid(a.min.unwrap_or(0.03), a.max.unwrap_or(3.0), a.points);
            Sweep::AlphaDiagonal { state: build_state(state)?, grid }
        }
        SweepArg::Nu => {
            let (Some(alpha), Some(beta)) = (a.alpha, a.beta) else {
                return Err(Failure::domain("the nu sweep requires --alpha and --beta"));
            };
            let pair = IndexPair::new(alpha, beta)?;
            let grid = match (a.min, a.max) {
                (None, None) => default_nu_grid(state.d, pair, a.points),
                (lo, hi) => {
                    let lo = lo.unwrap_or(1e-3);
                    let hi = hi.unwrap_or(10.0);
                    if !(lo > 0.0 && hi > lo) {
                        return Err(Failure::domain("nu range requires 0 < min < max"));
                    }
                    linear_grid(lo.ln(), hi.ln(), a.points).into_iter().map(f64::exp).collect()
                }
            };
            Sweep::Nu { d: state.d, pair, grid }
        }
    };
    let result = sweep(&spec, to_path(path))?;
    let meta = result.metadata(Some(cli.seed));
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = result
                .records
                .iter()
                .map(|r| {
                    json!({
                        "param": num(r.param),
                        "N_alpha": r.n_alpha.map(num),
                        "N_beta": r.n_beta.map(num),
                        "product": r.product.map(num),
                        "bound": r.bound.map(num),
                        "region": r.region.tag(),
                        "method": r.method.map(|m| m.tag()),
                        "note": r.note,
                    })
                })
                .collect();
            write_json(out, &json!({ "metadata": meta, "records": rows }))
        }
        _ => {
            result.write_csv(&mut *out)?;
            if let Some(p) = &cli.output {
                let mut side = p.clone().into_os_string();
                side.push(".json");
                let f = File::create(PathBuf::from(side))?;
                serde_json::to_writer_pretty(f, &meta).map_err(|e| Failure::domain(e.to_string()))?;
            }
            Ok(())
        }
    }
}

fn continuous_families() -> Result<Vec<Subject>, Failure> {
    Ok(vec![
        Subject::Continuous(Wavefunction::gaussian(1)?),
        Subject::Continuous(Wavefunction::student_t(1, 3.0)?),
        Subject::Continuous(Wavefunction::student_t(1, 5.0)?),
        Subject::Continuous(Wavefunction::student_r(1, 3.0)?),
        Subject::Continuous(Wavefunction::laplace()),
        Subject::Continuous(Wavefunction::uniform_ball(1)?),
    ])
}

fn cmd_verify<W: Write + ?Sized>(
    out: &mut W,
    cli: &Cli,
    suite: Suite,
    count: usize,
    n: usize,
    path: PathArg,
) -> Outcome {
    let path = to_path(path);
    let seeds = |count: usize| (0..count as u64).map(move |i| cli.seed.wrapping_add(i));
    let v: RegionVerification = match suite {
        Suite::Continuous => {
            let on_c = count / 5;
            let pairs = sample_pairs_in_d(count, on_c, on_c, cli.seed);
            verify_region(&continuous_families()?, &pairs, BoundCase::ContinuousContinuous, path)
        }
        Suite::DiscreteDiscrete => {
            let states = seeds(count)
                .map(|s| random_discrete_state(n, s).map(Subject::Discrete))
                .collect::<Result<Vec<_>, _>>()?;
            verify_region(&states, &log_pair_grid(0.25, 4.0, 6), BoundCase::DiscreteDiscrete { n }, path)
        }
        Suite::DiscreteContinuous => {
            let mut states = (0..n)
                .map(|i| DiscreteState::kronecker(n, i).map(Subject::Discrete))
                .collect::<Result<Vec<_>, _>>()?;
            for s in seeds(count) {
                states.push(Subject::Discrete(random_discrete_state(n, s)?));
            }
            let pairs: Vec<IndexPair> = log_pair_grid(0.25, 4.0, 6)
                .into_iter()
                .filter(|p| classify_with_tol(*p, CLASSIFY_TOL).in_d())
                .collect();
            verify_region(&states, &pairs, BoundCase::DiscreteContinuous, path)
        }
    };
    let violations = v.violations();
    let vanishing = v.vanishing_in_d();
    let min_margin = v
        .reports
        .iter()
        .filter_map(|r| r.margin.zip(r.bound).map(|(m, b)| m / b))
        .fold(f64::INFINITY, f64::min);
    if cli.format == Format::Json {
        let first: Vec<Value> = violations.iter().take(10).map(|r| report_json(r)).collect();
        write_json(
            out,
            &json!({
                "evaluated": v.reports.len(),
                "excluded": v.excluded.len(),
                "failures": v.failures.iter().map(|f| json!({
                    "family": f.family, "alpha": num(f.pair.alpha), "beta": num(f.pair.beta),
                    "error": f.error.to_string(),
                })).collect::<Vec<_>>(),
                "violations": violations.len(),
                "vanishing_in_d": vanishing.len(),
                "min_relative_margin": num(min_margin),
                "first_violations": first,
                "seed": cli.seed,
            }),
        )?;
    } else {
        writeln!(out, "evaluated {}", v.reports.len())?;
        writeln!(out, "excluded {} (divergent entropy power; product infinite)", v.excluded.len())?;
        writeln!(out, "failures {}", v.failures.len())?;
        for f in &v.failures {
            writeln!(out, "  {} at {}: {}", f.family, pair_text(f.pair), f.error)?;
        }
        writeln!(out, "violations {}", violations.len() + vanishing.len())?;
        for r in violations.iter().take(10) {
            writeln!(out, "  {} product {} bound {}", pair_text(r.pair), format_number(r.product), opt(r.bound))?;
        }
        writeln!(out, "min relative margin {}", format_number(min_margin))?;
        if suite == Suite::DiscreteDiscrete {
            let min = v.reports.iter().map(|r| r.product).fold(f64::INFINITY, f64::min);
            writeln!(out, "min product {}", format_number(min))?;
            writeln!(out, "overlap bound (2 sqrt(n)/(sqrt(n)+1))^2 {}", format_number(overlap_bound(n)?))?;
        }
    }
    if !v.failures.is_empty() || !violations.is_empty() || !vanishing.is_empty() {
        return Err(Failure::numerical("verification found violations or failures"));
    }
    Ok(())
}

fn cmd_counterexample<W: Write + ?Sized>(out: &mut W, format: Format, p: &PairArgs, epsilon: f64, d: usize) -> Outcome {
    let pair = make_pair(p)?;
    let (nu, r) = counterexample(pair, epsilon, d)?;
    if format == Format::Json {
        let mut v = report_json(&r);
        v["nu"] = num(nu);
        v["epsilon"] = num(epsilon);
        return write_json(out, &v);
    }
    writeln!(out, "nu {}", format_number(nu))?;
    write_report(out, &r)
}
