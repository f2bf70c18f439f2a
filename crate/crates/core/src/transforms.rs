//! Fourier transforms in the three settings: the series transform of a
//! discrete state onto the torus, the unitary DFT, and the numerical
//! continuous transform of a sampled wavefunction.
//!
//! All continuous conventions use (2π)^{-d/2} ∫ Ψ(x) e^{-i uᵀx} dx.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::states::{DiscreteState, GridSpec, SampledGrid, Shape, StateError, Wavefunction};

/// Largest boundary density, relative to the peak, accepted by
/// [`continuous_transform`].
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Largest accepted deviation of the renormalization factor from 1.
pub const RENORMALIZATION_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("boundary density is {ratio:e} of the peak (needs < {tol:e}); widen the grid")]
    Truncation { ratio: f64, tol: f64 },
    #[error("renormalization factor {factor} deviates from 1 by more than {tol:e}")]
    Renormalization { factor: f64, tol: f64 },
    #[error("dimension must be >= 1")]
    Dimension,
    #[error(transparent)]
    State(#[from] StateError),
}

/// x ↦ |(2π)^{-d/2} Σ_a Ψ(a) e^{-i aᵀx}|² on [0, 2π)^d.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicDensity {
    dim: usize,
    terms: Vec<(Vec<f64>, Complex64)>,
}

impl PeriodicDensity {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero (alphabet point, amplitude) pairs.
    pub fn terms(&self) -> &[(Vec<f64>, Complex64)] {
        &self.terms
    }

    /// Largest |a_i| over the support, per axis maximum; bounds the
    /// trigonometric degree of the density.
    pub fn degree(&self) -> usize {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, _) in &self.terms {
            for v in a {
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
        }
        if self.terms.is_empty() {
            0
        } else {
            (hi - lo) as usize
        }
    }

    pub fn amplitude_at(&self, x: &[f64]) -> Complex64 {
        let norm = (2.0 * PI).powf(-0.5 * self.dim as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, psi) in &self.terms {
            let phase: f64 = a.iter().zip(x).map(|(ai, xi)| ai * xi).sum();
            acc += psi * Complex64::from_polar(1.0, -phase);
        }
        acc * norm
    }

    pub fn density_at(&self, x: &[f64]) -> f64 {
        self.amplitude_at(x).norm_sqr()
    }
}

/// Series transform of a discrete state. For d > 1 the alphabet index a is
/// read as a multi-index in base m = ⌈n^{1/d}⌉ (first axis fastest), which
/// is one concrete bijection between the flat and the d-dimensional lattice.
pub fn series_transform(state: &DiscreteState, d: usize) -> Result<PeriodicDensity, TransformError> {
    if d == 0 {
        return Err(TransformError::Dimension);
    }
    let n = state.len();
    let mut m = (n as f64).powf(1.0 / d as f64).ceil() as usize;
    while m.pow(d as u32) < n {
        m += 1;
    }
    let m = m.max(1);
    let terms = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .map(|(flat, z)| {
            let mut rem = flat;
            let mut idx = Vec::with_capacity(d);
            for _ in 0..d {
                idx.push((rem % m) as f64);
                rem /= m;
            }
            (idx, *z)
        })
        .collect();
    Ok(PeriodicDensity { dim: d, terms })
}

fn unitary_fft(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut buf = input.to_vec();
    fft.process(&mut buf);
    let scale = (n as f64).sqrt().recip();
    for z in &mut buf {
        *z *= scale;
    }
    buf
}

/// Ψ̂(k) = n^{-1/2} Σ_a Ψ(a) e^{-2πi ak/n}.
pub fn dft(state: &DiscreteState) -> DiscreteState {
    renormalized(unitary_fft(state.amplitudes(), false))
}

/// Inverse of [`dft`].
pub fn inverse_dft(state: &DiscreteState) -> DiscreteState {
    renormalized(unitary_fft(state.amplitudes(), true))
}

fn renormalized(amps: Vec<Complex64>) -> DiscreteState {
    // unitary up to rounding; the tiny correction keeps the 1e-12 invariant
    DiscreteState::from_unnormalized(amps).expect("unitary image of a unit vector")
}

/// Result of [`continuous_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedGrid {
    pub grid: SampledGrid,
    /// Factor applied to reach unit norm.
    pub renormalization: f64,
    /// Largest boundary density of the input relative to its peak.
    pub boundary_ratio: f64,
}

/// Conjugate grid: spacing 2π/(N Δx), N points, centred on the origin.
pub fn conjugate_grid(spec: &GridSpec) -> GridSpec {
    let d = spec.dim();
    let mut lower = Vec::with_capacity(d);
    let mut spacing = Vec::with_capacity(d);
    for axis in 0..d {
        let n = spec.points[axis];
        let dk = 2.0 * PI / (n as f64 * spec.spacing[axis]);
        lower.push(-((n / 2) as f64) * dk);
        spacing.push(dk);
    }
    GridSpec { lower, spacing, points: spec.points.clone() }
}

/// Numerical continuous transform of a sampled wavefunction, evaluated as a
/// Riemann sum on the conjugate grid with one FFT per axis.
pub fn continuous_transform(state: &Wavefunction) -> Result<TransformedGrid, TransformError> {
    let grid = match state.shape() {
        Shape::Sampled(g) => g,
        _ => {
            return Err(StateError::Unsupported(
                "continuous_transform needs a sampled grid; use fourier_partner for analytic families".into(),
            )
            .into())
        }
    };
    let boundary_ratio = grid.boundary_ratio();
    if boundary_ratio >= BOUNDARY_TOL {
        return Err(TransformError::Truncation { ratio: boundary_ratio, tol: BOUNDARY_TOL });
    }
    let spec = grid.spec();
    let out_spec = conjugate_grid(spec);
    let mut data = grid.samples().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let d = spec.dim();
    for axis in 0..d {
        let n = spec.points[axis];
        let stride: usize = spec.points[axis + 1..].iter().product();
        let outer: usize = spec.points[..axis].iter().product();
        let dx = spec.spacing[axis];
        let x0 = spec.lower[axis];
        let k0 = out_spec.lower[axis];
        let dk = out_spec.spacing[axis];
        let pre: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, -(j as f64) * dx * k0)).collect();
        let post: Vec<Complex64> = (0..n)
            .map(|m| Complex64::from_polar(dx / (2.0 * PI).sqrt(), -x0 * (k0 + m as f64 * dk)))
            .collect();
        let fft = planner.plan_fft_forward(n);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for j in 0..n {
                    line[j] = data[base + j * stride] * pre[j];
                }
                fft.process(&mut line);
                for m in 0..n {
                    data[base + m * stride] = line[m] * post[m];
                }
            }
        }
    }
    let raw = SampledGrid::new(out_spec, data)?;
    let (grid, renormalization) = raw.normalized()?;
    if (renormalization - 1.0).abs() > RENORMALIZATION_TOL {
        return Err(TransformError::Renormalization { factor: renormalization, tol: RENORMALIZATION_TOL });
    }
    Ok(TransformedGrid { grid, renormalization, boundary_ratio })
}

/// Direct O(N²) evaluation of the same Riemann sum for one-dimensional
/// grids, at arbitrary output points.
pub fn continuous_transform_direct(grid: &SampledGrid, k: &[f64]) -> Result<Vec<Complex64>, TransformError> {
    let spec = grid.spec();
    if spec.dim() != 1 {
        return Err(StateError::Unsupported("direct transform is one-dimensional".into()).into());
    }
    let dx = spec.spacing[0];
    let norm = dx / (2.0 * PI).sqrt();
    Ok(k.iter()
        .map(|&kk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, z) in grid.samples().iter().enumerate() {
                let x = spec.coordinate(0, j);
                acc += z * Complex64::from_polar(1.0, -kk * x);
            }
            acc * norm
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{Domain, Integrator};
    use crate::states::random_discrete_state;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn series_examples() {
        let k = DiscreteState::kronecker(5, 3).unwrap();
        for d in 1..=3 {
            let p = series_transform(&k, d).unwrap();
            let x = vec![0.7; d];
            assert!((p.density_at(&x) - (2.0 * PI).powi(-(d as i32))).abs() < 1e-15);
        }
        let s = 0.5f64.sqrt();
        let two = DiscreteState::new(vec![c(s), c(s)]).unwrap();
        let p = series_transform(&two, 1).unwrap();
        for i in 0..50 {
            let x = 2.0 * PI * i as f64 / 50.0;
            let direct = {
                let z = c(s) + c(s) * Complex64::from_polar(1.0, -x);
                z.norm_sqr() / (2.0 * PI)
            };
            let expected = (1.0 + x.cos()) / (2.0 * PI);
            assert!((p.density_at(&[x]) - expected).abs() < 1e-14);
            assert!((direct - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn series_density_is_normalized_on_torus() {
        for seed in 0..5 {
            let s = random_discrete_state(7, seed).unwrap();
            let p = series_transform(&s, 1).unwrap();
            let total = Integrator::new(1e-12)
                .integrate(|x| p.density_at(&[x]), Domain::Finite(0.0, 2.0 * PI))
                .unwrap()
                .value;
            assert!((total - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn dft_examples() {
        let delta = DiscreteState::kronecker(4, 0).unwrap();
        for z in dft(&delta).amplitudes() {
            assert!((z.norm() - 0.5).abs() < 1e-15);
        }
        let flat = DiscreteState::uniform(6).unwrap();
        let back = dft(&flat);
        assert!((back.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        for z in &back.amplitudes()[1..] {
            assert!(z.norm() < 1e-12);
        }
        // explicit formula
        let s = random_discrete_state(5, 2).unwrap();
        let t = dft(&s);
        for k in 0..5 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, z) in s.amplitudes().iter().enumerate() {
                acc += z * Complex64::from_polar(1.0, -2.0 * PI * (a * k) as f64 / 5.0);
            }
            acc /= 5f64.sqrt();
            assert!((acc - t.amplitudes()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn dft_is_unitary() {
        for seed in 0..20 {
            let s = random_discrete_state(8, seed).unwrap();
            let t = dft(&s);
            let norm: f64 = t.probabilities().iter().sum();
            assert!((norm - 1.0).abs() < 1e-12);
            let back = inverse_dft(&t);
            for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_gaussian_is_self_conjugate() {
        // covariance 1/2 is the self-conjugate Gaussian
        let cov = nalgebra::DMatrix::from_element(1, 1, 0.5);
        let g = Wavefunction::gaussian_with_covariance(cov).unwrap();
        let spec = GridSpec::symmetric_1d(12.0, 513).unwrap();
        let w = Wavefunction::sampled(g.sample_on(&spec).unwrap()).unwrap();
        let out = continuous_transform(&w).unwrap();
        assert!((out.renormalization - 1.0).abs() < 1e-10);
        let spec_k = out.grid.spec();
        for (p, z) in spec_k.points().zip(out.grid.samples()) {
            let expected = g.density_at(&p).unwrap();
            assert!((z.norm_sqr() - expected).abs() < 1e-6, "k={}", p[0]);
        }
        // identity covariance maps to covariance 1/4
        let g1 = Wavefunction::gaussian(1).unwrap();
        let w1 = Wavefunction::sampled(g1.sample_on(&spec).unwrap()).unwrap();
        let out1 = continuous_transform(&w1).unwrap();
        let partner = g1.fourier_partner().unwrap();
        for (p, z) in out1.grid.spec().points().zip(out1.grid.samples()) {
            assert!((z.norm_sqr() - partner.density_at(&p).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn parity_is_preserved() {
        let lap = Wavefunction::laplace();
        let spec = GridSpec::symmetric_1d(30.0, 2049).unwrap();
        let w = Wavefunction::sampled(lap.sample_on(&spec).unwrap().normalized().unwrap().0).unwrap();
        let out = continuous_transform(&w).unwrap();
        let s = out.grid.samples();
        let n = s.len();
        for i in 0..n {
            assert!(s[i].im.abs() < 1e-8);
            assert!((s[i] - s[n - 1 - i]).norm() < 1e-8);
        }
    }

    #[test]
    fn fft_matches_direct_sum() {
        let spec = GridSpec::symmetric_1d(8.0, 129).unwrap();
        let g = Wavefunction::gaussian(1).unwrap().rescale_isotropic(0.9).unwrap();
        let grid = g.sample_on(&spec).unwrap();
        let w = Wavefunction::sampled(grid.clone()).unwrap();
        let out = continuous_transform(&w).unwrap();
        let ks: Vec<f64> = out.grid.spec().points().map(|p| p[0]).collect();
        let direct = continuous_transform_direct(&grid, &ks).unwrap();
        for (a, b) in direct.iter().zip(out.grid.samples()) {
            assert!((a / out.renormalization - b).norm() < 1e-12);
        }
    }

    #[test]
    fn two_dimensional_gaussian() {
        let spec = GridSpec::new(vec![-8.0, -8.0], vec![0.25, 0.25], vec![65, 65]).unwrap();
        let g = Wavefunction::gaussian(2).unwrap();
        let w = Wavefunction::sampled(g.sample_on(&spec).unwrap()).unwrap();
        let out = continuous_transform(&w).unwrap();
        let partner = g.fourier_partner().unwrap();
        for (p, z) in out.grid.spec().points().zip(out.grid.samples()) {
            assert!((z.norm_sqr() - partner.density_at(&p).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let spec = GridSpec::symmetric_1d(3.0, 101).unwrap();
        let w = Wavefunction::sampled(
            Wavefunction::gaussian(1).unwrap().sample_on(&spec).unwrap().normalized().unwrap().0,
        )
        .unwrap();
        assert!(matches!(continuous_transform(&w), Err(TransformError::Truncation { .. })));
        assert!(continuous_transform(&Wavefunction::laplace()).is_err());
    }
}
