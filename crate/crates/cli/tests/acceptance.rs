//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed outside `KNOWN_RED`.

use std::f64::consts::{E, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use renyi_core::entropy::{renyi_power_continuous_with, student_t_partner_power_analytic, EntropyError, Path};
use renyi_core::regions::{
    bound_b, classify, conjugate_index, maassen_bound, overlap_bound, BoundCase, IndexPair, Region,
};
use renyi_core::specfun::bessel_k;
use renyi_core::states::{random_discrete_state, DiscreteState, Wavefunction};
use renyi_core::transforms::dft;
use renyi_core::verify::{
    counterexample, default_nu_grid, gaussian_product_analytic, log_pair_grid, product_continuous,
    product_discrete, product_discrete_continuous, sample_pairs_in_d, student_t_nu_floor, student_t_product, sweep,
    verify_region, Subject, Sweep,
};

const SEED: u64 = 20_240_601;

/// Criteria that cannot hold as stated. They still run and print FAIL, but do
/// not fail the target. Criterion 7: the DFT pair attains
/// ((1 + 1/√n)/2)^{-2} at (∞, ∞), which is below (2n/(n+1))² for n ≥ 2,
/// and the gap persists on the [0.25, 4]² grid for n ≤ 5.
const KNOWN_RED: [u32; 1] = [7];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn pair(a: f64, b: f64) -> IndexPair {
    IndexPair::new(a, b).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn cli(args: &[&str]) -> (String, Duration, bool) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_renyi")).args(args).output().expect("run renyi");
    (String::from_utf8(out.stdout).unwrap(), t.elapsed(), out.status.success())
}

fn field(stdout: &str, key: &str) -> Option<f64> {
    stdout.lines().find_map(|l| l.strip_prefix(key)?.trim().split(' ').next()?.parse().ok())
}

fn criterion_1() -> Outcome {
    let target = 8.0 * PI / 5.0;
    let base = ["product", "--family", "student-t", "--nu", "3", "--d", "1", "--alpha", "2", "--beta", "2"];
    let (out, t_analytic, ok_a) = cli(&base);
    let analytic = field(&out, "product ").unwrap_or(f64::NAN);
    let mut quad_args = base.to_vec();
    quad_args.extend(["--path", "quadrature"]);
    let (out, t_quad, ok_q) = cli(&quad_args);
    let quad = field(&out, "product ").unwrap_or(f64::NAN);
    let pass = ok_a
        && ok_q
        && (analytic - target).abs() <= 1e-6
        && (quad - target).abs() <= 1e-3
        && t_analytic < Duration::from_secs(2)
        && t_quad < Duration::from_secs(2);
    Outcome::new(
        pass,
        format!(
            "analytic {analytic} (err {:.1e}, {:.2}s), quadrature {quad} (err {:.1e}, {:.2}s)",
            (analytic - target).abs(),
            t_analytic.as_secs_f64(),
            (quad - target).abs(),
            t_quad.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let g = Wavefunction::gaussian(1).unwrap();
    let mut worst = (0.0f64, 0.0f64);
    let mut ok = true;
    for a in [0.6, 0.8, 1.0 - 1e-4, 1.0 + 1e-4, 1.5, 2.0, 5.0] {
        let p = pair(a, conjugate_index(a).unwrap());
        let b = bound_b(a).unwrap();
        let an = product_continuous(&g, p, Path::Analytic).map(|r| rel(r.product, b));
        let qu = product_continuous(&g, p, Path::Quadrature).map(|r| rel(r.product, b));
        match (an, qu) {
            (Ok(x), Ok(y)) => {
                worst = (worst.0.max(x), worst.1.max(y));
                ok &= x <= 1e-8 && y <= 1e-4;
            }
            _ => ok = false,
        }
    }
    Outcome::new(ok, format!("max relative deviation from B: analytic {:.1e}, quadrature {:.1e}", worst.0, worst.1))
}

fn criterion_3() -> Outcome {
    let g = Wavefunction::gaussian(1).unwrap();
    let axis = [0.3, 0.6, 1.5, 2.5, 4.0];
    let mut worst = 0.0f64;
    let mut ok = true;
    for &a in &axis {
        for &b in &axis {
            let p = pair(a, b);
            match product_continuous(&g, p, Path::Quadrature) {
                Ok(r) => {
                    let d = rel(r.product, gaussian_product_analytic(p));
                    worst = worst.max(d);
                    ok &= d <= 1e-4;
                }
                Err(_) => ok = false,
            }
        }
    }
    // the band around 1: both factors tend to √e, product to eπ
    let band = product_continuous(&g, pair(1.0, 1.0), Path::Quadrature).map(|r| rel(r.product, E * PI));
    let band_analytic = rel(gaussian_product_analytic(pair(1.0, 1.0)), E * PI);
    let band_ok = matches!(band, Ok(d) if d <= 1e-4) && band_analytic <= 1e-12;
    Outcome::new(
        ok && band_ok,
        format!("5x5 grid max relative deviation {worst:.1e}; (1,1) vs e*pi {:.1e}", band.unwrap_or(f64::NAN)),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let families = vec![
        Subject::Continuous(Wavefunction::gaussian(1).unwrap()),
        Subject::Continuous(Wavefunction::student_t(1, 3.0).unwrap()),
        Subject::Continuous(Wavefunction::student_t(1, 5.0).unwrap()),
        Subject::Continuous(Wavefunction::student_r(1, 3.0).unwrap()),
        Subject::Continuous(Wavefunction::laplace()),
        Subject::Continuous(Wavefunction::uniform_ball(1).unwrap()),
    ];
    let pairs = sample_pairs_in_d(100, 20, 20, SEED);
    let v = verify_region(&families, &pairs, BoundCase::ContinuousContinuous, Path::Auto);
    let elapsed = t.elapsed();
    let slack_ok = v.reports.iter().all(|r| r.product >= r.bound.unwrap() * (1.0 - 1e-6));
    let pass = v.is_clean() && slack_ok && elapsed < Duration::from_secs(60);
    let min_margin = v
        .reports
        .iter()
        .map(|r| r.margin.unwrap() / r.bound.unwrap())
        .fold(f64::INFINITY, f64::min);
    Outcome::new(
        pass,
        format!(
            "{} products, {} infinite (divergent power), {} failures, {} violations, min relative margin {min_margin:.1e}, {:.1}s",
            v.reports.len(),
            v.excluded.len(),
            v.failures.len(),
            v.violations().len() + v.vanishing_in_d().len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [pair(2.0, 2.0), pair(2.0, 0.75), pair(3.0, 1.2)] {
        let found = counterexample(p, 0.01, 1);
        let sw = sweep(&Sweep::Nu { d: 1, pair: p, grid: default_nu_grid(1, p, 40) }, Path::Auto);
        let g = gaussian_product_analytic(p);
        match (found, sw) {
            (Ok((nu, r)), Ok(s)) => {
                let min = s.records.iter().filter_map(|r| r.product).fold(f64::INFINITY, f64::min);
                ok &= r.product < 0.01 && min < 0.1 * g;
                notes.push(format!("{p}: nu {nu:.4} product {:.2e}, sweep min/gaussian {:.1e}", r.product, min / g));
            }
            _ => {
                ok = false;
                notes.push(format!("{p}: search or sweep failed"));
            }
        }
    }
    let p = pair(2.0, 2.0);
    let star_ok = (student_t_nu_floor(1, p) - 0.5).abs() < 1e-15;
    let near = student_t_product(1, 0.51, p, Path::Auto).map(|r| r.product);
    let far = student_t_product(1, 1.0, p, Path::Auto).map(|r| r.product);
    let mono = matches!((&near, &far), (Ok(a), Ok(b)) if a < b);
    notes.push(format!("(2, 2): nu* = 0.5, P(0.51) = {:.4}, P(1) = {:.4}", near.unwrap_or(f64::NAN), far.unwrap_or(f64::NAN)));
    Outcome::new(ok && star_ok && mono, notes.join("; "))
}

fn pairs_in_d() -> Vec<IndexPair> {
    log_pair_grid(0.25, 4.0, 6).into_iter().filter(|p| classify(*p).in_d()).collect()
}

fn criterion_6() -> Outcome {
    let pairs = pairs_in_d();
    let mut kron_dev = 0.0f64;
    let mut ok = true;
    for n in 1..=8 {
        for i in 0..n {
            let s = DiscreteState::kronecker(n, i).unwrap();
            for &p in &pairs {
                match product_discrete_continuous(&s, 1, p) {
                    Ok(r) => kron_dev = kron_dev.max((r.product - 2.0 * PI).abs()),
                    Err(_) => ok = false,
                }
            }
        }
    }
    ok &= kron_dev <= 1e-8;
    let states: Vec<Subject> = (0..1000u64)
        .map(|i| Subject::Discrete(random_discrete_state(1 + (i % 16) as usize, SEED + i).unwrap()))
        .collect();
    let v = verify_region(&states, &pairs, BoundCase::DiscreteContinuous, Path::Auto);
    let min = v.reports.iter().map(|r| r.product).fold(f64::INFINITY, f64::min);
    let random_ok = v.failures.is_empty()
        && v.excluded.is_empty()
        && v.reports.len() == states.len() * pairs.len()
        && min >= 2.0 * PI * (1.0 - 1e-6);
    Outcome::new(
        ok && random_ok,
        format!(
            "{} pairs in D; Kronecker max |P - 2pi| {kron_dev:.1e}; 1000 random states min P/2pi - 1 = {:.1e}",
            pairs.len(),
            min / (2.0 * PI) - 1.0
        ),
    )
}

fn criterion_7() -> Outcome {
    let grid = log_pair_grid(0.25, 4.0, 6);
    let mut ok = true;
    let mut reference_ok = true;
    let mut gaps = Vec::new();
    for n in 2..=8usize {
        let bound = maassen_bound(n).unwrap();
        let states: Vec<Subject> = (0..10_000u64)
            .map(|i| Subject::Discrete(random_discrete_state(n, SEED ^ ((n as u64) << 32) ^ i).unwrap()))
            .collect();
        let v = verify_region(&states, &grid, BoundCase::DiscreteDiscrete { n }, Path::Auto);
        let min = v.reports.iter().map(|r| r.product).fold(f64::INFINITY, f64::min);
        ok &= v.failures.is_empty() && v.reports.len() == states.len() * grid.len() && min >= bound * (1.0 - 1e-9);
        reference_ok &= min >= overlap_bound(n).unwrap() * (1.0 - 1e-9);
        // Kronecker state against its flat transform
        let kron = grid
            .iter()
            .map(|&p| product_discrete(&DiscreteState::kronecker(n, 0).unwrap(), p).unwrap().product)
            .fold(0.0f64, |m, x| m.max((x - n as f64).abs()));
        ok &= kron <= 1e-12;
        gaps.push(format!("n={n} min {min:.4} bound {bound:.4} gap {:+.3}", min - bound));
    }
    // n = 2, Ψ = (cos π/8, sin π/8) at (4, 4): a deterministic point below (2n/(n+1))²
    let t = PI / 8.0;
    let s = DiscreteState::new(vec![Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)]).unwrap();
    let explicit = product_discrete(&s, pair(4.0, 4.0)).unwrap().product;
    Outcome::new(
        ok,
        format!(
            "Kronecker product = n; {}; explicit n=2 state at (4,4) gives {explicit:.4} < {:.4}; \
             overlap bound (2 sqrt n/(sqrt n + 1))^2 holds for all: {reference_ok}",
            gaps.join(", "),
            maassen_bound(2).unwrap()
        ),
    )
}

fn all_families() -> Vec<Wavefunction> {
    let base = vec![
        Wavefunction::gaussian(1).unwrap(),
        Wavefunction::gaussian(2).unwrap(),
        Wavefunction::student_t(1, 3.0).unwrap(),
        Wavefunction::student_t(1, 5.0).unwrap(),
        Wavefunction::student_t(2, 1.5).unwrap(),
        Wavefunction::student_r(1, 3.0).unwrap(),
        Wavefunction::student_r(3, 6.0).unwrap(),
        Wavefunction::laplace(),
        Wavefunction::uniform_ball(1).unwrap(),
        Wavefunction::uniform_ball(2).unwrap(),
    ];
    let mut all = base.clone();
    for w in &base {
        if let Ok(p) = w.fourier_partner() {
            all.push(p);
        }
    }
    all
}

fn criterion_8() -> Outcome {
    let grid: Vec<f64> = (0..21).map(|i| 0.1 * 100f64.powf(i as f64 / 20.0)).collect();
    let mut ok = true;
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    let mut flat = 0.0f64;
    for w in all_families() {
        for path in [Path::Auto, Path::Quadrature] {
            let mut prev: Option<(f64, f64)> = None;
            for &l in &grid {
                let v = match renyi_power_continuous_with(&w, l, path) {
                    Ok(v) => v,
                    Err(EntropyError::Divergent { .. }) => {
                        prev = None;
                        continue;
                    }
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                let slack = if path == Path::Auto && v.abs_error_estimate == 0.0 { 1e-9 } else { 1e-6 };
                if let Some((pv, _)) = prev {
                    let step = (pv - v.value) / pv;
                    worst = worst.min(step);
                    ok &= v.value <= pv * (1.0 + slack);
                    checked += 1;
                }
                prev = Some((v.value, l));
                if w.family().starts_with("uniform") {
                    let vol = renyi_power_continuous_with(&w, 1.0, Path::Analytic).unwrap().value;
                    flat = flat.max(rel(v.value, vol));
                }
            }
        }
    }
    ok &= flat <= 1e-10;
    Outcome::new(
        ok,
        format!("{checked} consecutive pairs, largest relative increase {:.1e}; uniform ball spread {flat:.1e}", (-worst).max(0.0)),
    )
}

fn criterion_9() -> Outcome {
    let c = pair(2.0, 2.0 / 3.0);
    let grid: Vec<f64> = (0..12).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0 - 2.0)).collect();
    let sc = sweep(&Sweep::Nu { d: 1, pair: c, grid }, Path::Auto);
    let finite = match &sc {
        Ok(s) => {
            let p: Vec<f64> = s.records.iter().take(3).filter_map(|r| r.product).collect();
            let spread = p.iter().cloned().fold(0.0, f64::max) / p.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
            (p.len() == 3 && spread < 0.05, format!("(2, 2/3) smallest-nu products {p:.4?} spread {spread:.1e}"))
        }
        Err(e) => (false, e.to_string()),
    };
    let d = pair(2.0, 0.5);
    let b2 = bound_b(2.0).unwrap();
    let sd = sweep(&Sweep::Nu { d: 1, pair: d, grid: default_nu_grid(1, d, 40) }, Path::Auto);
    let infinite = match &sd {
        Ok(s) => {
            let max = s.records.iter().filter_map(|r| r.product).fold(0.0f64, f64::max);
            (max > 10.0 * b2 && classify(d) == Region::DMinus, format!("(2, 1/2) max product / B(2) = {:.1}", max / b2))
        }
        Err(e) => (false, e.to_string()),
    };
    Outcome::new(finite.0 && infinite.0, format!("{}; {}", finite.1, infinite.1))
}

fn criterion_10() -> Outcome {
    let mut bessel = 0.0f64;
    for i in 0..60 {
        let x = 0.01 * 1.2f64.powi(i);
        let k12 = (PI / (2.0 * x)).sqrt() * (-x).exp();
        for (mu, v) in [(0.5, k12), (1.5, k12 * (1.0 + 1.0 / x)), (2.5, k12 * (1.0 + 3.0 / x + 3.0 / (x * x)))] {
            bessel = bessel.max(rel(bessel_k(mu, x).unwrap(), v));
            bessel = bessel.max(rel(bessel_k(-mu, x).unwrap(), v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut parseval = 0.0f64;
    for n in 1..=64 {
        let amps: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let s = DiscreteState::from_unnormalized(amps).unwrap();
        let norm: f64 = dft(&s).amplitudes().iter().map(|z| z.norm_sqr()).sum();
        parseval = parseval.max((norm - 1.0).abs());
    }
    let mut agree = 0.0f64;
    let mut ok = true;
    for nu in [0.5, 1.0, 2.0, 3.0, 5.0, 10.0] {
        for l in [0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0] {
            let t = Wavefunction::student_t(1, nu).unwrap();
            let partner = t.fourier_partner().unwrap();
            for (w, analytic) in [
                (&t, renyi_power_continuous_with(&t, l, Path::Analytic)),
                (&partner, student_t_partner_power_analytic(1, nu, l)),
            ] {
                let quad = renyi_power_continuous_with(w, l, Path::Quadrature);
                match (analytic, quad) {
                    (Ok(a), Ok(q)) => agree = agree.max(rel(q.value, a.value)),
                    (Err(EntropyError::Divergent { .. }), Err(EntropyError::Divergent { .. })) => {}
                    _ => ok = false,
                }
            }
        }
    }
    Outcome::new(
        ok && bessel <= 1e-10 && parseval <= 1e-12 && agree <= 1e-6,
        format!("Bessel K half-integer {bessel:.1e}, Parseval {parseval:.1e}, analytic vs quadrature {agree:.1e}"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Student-t nu=3 product 8pi/5", criterion_1),
        (2, "Gaussian saturation on C", criterion_2),
        (3, "Gaussian general product", criterion_3),
        (4, "bounds hold across D", criterion_4),
        (5, "arbitrarily small products in D0", criterion_5),
        (6, "discrete-continuous bound and equality", criterion_6),
        (7, "discrete-discrete bound fuzz", criterion_7),
        (8, "monotonicity in lambda", criterion_8),
        (9, "finite vs infinite small-nu limit", criterion_9),
        (10, "numerics floor", criterion_10),
    ];
    let mut failed = 0;
    let mut known = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let status = match (o.pass, KNOWN_RED.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => {
                known += 1;
                "FAIL (known)"
            }
            (false, false) => {
                failed += 1;
                "FAIL"
            }
        };
        println!("criterion {id:>2} {status}: {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed, {known} known failures", 10 - failed - known);
    if failed > 0 {
        std::process::exit(1);
    }
}
