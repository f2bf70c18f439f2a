//! Quantum states: continuous wavefunctions (analytic families and sampled
//! grids) and finite discrete amplitude vectors.
//!
//! Every analytic family is stored in a canonical radial form together with
//! an optional linear map M, so that the represented state is
//! |det M|^{-1/2} Ψ(M⁻¹x). This keeps the closed-form normalizations exact
//! while allowing arbitrary covariance and rescaling.

use std::f64::consts::PI;
use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::specfun::{bessel_j, ln_bessel_k_of_ln, log_gamma_unchecked};

/// Normalization tolerance for sampled wavefunctions.
pub const GRID_NORM_TOL: f64 = 1e-8;
/// Normalization tolerance for discrete states.
pub const DISCRETE_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter {name} = {value}: requires {condition}")]
    InvalidParameter { name: &'static str, condition: &'static str, value: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular scaling matrix")]
    Singular,
    #[error("state is not normalized: norm² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("discrete state needs at least one amplitude")]
    Empty,
    #[error("grid: {0}")]
    Grid(String),
    #[error("csv: {0}")]
    Csv(String),
}

fn invalid(name: &'static str, condition: &'static str, value: f64) -> StateError {
    StateError::InvalidParameter { name, condition, value }
}

/// Canonical (unscaled) shape of a continuous wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// |Ψ|² is the standard normal density N(0, I).
    Gaussian,
    /// Ψ ∝ (1 + xᵀx)^{-(d+ν)/4}.
    StudentT { nu: f64 },
    /// Fourier transform of `StudentT`: Ψ ∝ |x|^{(ν-d)/4} K_{(d-ν)/4}(|x|).
    StudentTPartner { nu: f64 },
    /// Ψ ∝ (1 - xᵀx)_+^{(ν-d)/4} on the unit ball, ν ≥ d.
    StudentR { nu: f64 },
    /// Constant on the unit ball.
    UniformBall,
    /// Ψ(x) = e^{-|x|}, d = 1.
    Laplace,
    /// Fourier transform of √c (1 - x²)_+^κ on [-1, 1], d = 1. Covers the
    /// one-dimensional `StudentR` (κ = (ν-1)/4) and `UniformBall` (κ = 0).
    CompactPartner { kappa: f64 },
    /// Complex samples on a uniform Cartesian grid.
    Sampled(SampledGrid),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Gaussian => "gaussian",
            Shape::StudentT { .. } => "student-t",
            Shape::StudentTPartner { .. } => "student-t-partner",
            Shape::StudentR { .. } => "student-r",
            Shape::UniformBall => "uniform",
            Shape::Laplace => "laplace",
            Shape::CompactPartner { .. } => "compact-partner",
            Shape::Sampled(_) => "grid",
        }
    }
}

/// Linear change of variables x ↦ M x applied to a canonical shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Scale {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    abs_det: f64,
    isotropic: Option<f64>,
}

impl Scale {
    fn new(matrix: DMatrix<f64>) -> Result<Self, StateError> {
        if !matrix.is_square() {
            return Err(StateError::Grid("scaling matrix must be square".into()));
        }
        let det = matrix.determinant();
        if !det.is_finite() || det == 0.0 {
            return Err(StateError::Singular);
        }
        let inverse = matrix.clone().try_inverse().ok_or(StateError::Singular)?;
        let d = matrix.nrows();
        let s = det.abs().powf(1.0 / d as f64);
        // M Mᵀ = s² I  ⇔  M is s times an orthogonal matrix
        let gram = &matrix * matrix.transpose();
        let target = DMatrix::<f64>::identity(d, d) * (s * s);
        let isotropic = ((gram - target).amax() <= 1e-12 * s * s).then_some(s);
        Ok(Self { matrix, inverse, abs_det: det.abs(), isotropic })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn abs_det(&self) -> f64 {
        self.abs_det
    }

    /// `Some(s)` when M is s times an orthogonal matrix, so that radial
    /// shapes stay radial with length scale s.
    pub fn isotropic_factor(&self) -> Option<f64> {
        self.isotropic
    }
}

/// A continuous d-dimensional wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    dim: usize,
    shape: Shape,
    scale: Option<Scale>,
}

fn check_dim(d: usize) -> Result<(), StateError> {
    if d == 0 {
        return Err(invalid("d", "d >= 1", 0.0));
    }
    Ok(())
}

fn check_nu(nu: f64) -> Result<(), StateError> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(invalid("nu", "nu > 0", nu));
    }
    Ok(())
}

impl Wavefunction {
    /// |Ψ|² = N(0, I_d).
    pub fn gaussian(d: usize) -> Result<Self, StateError> {
        check_dim(d)?;
        Ok(Self { dim: d, shape: Shape::Gaussian, scale: None })
    }

    /// |Ψ|² = N(0, Σ) for a symmetric positive-definite Σ.
    pub fn gaussian_with_covariance(covariance: DMatrix<f64>) -> Result<Self, StateError> {
        let d = covariance.nrows();
        check_dim(d)?;
        if !covariance.is_square() {
            return Err(StateError::Grid("covariance must be square".into()));
        }
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-12 * covariance.amax() {
            return Err(invalid("covariance", "symmetric matrix", asym));
        }
        let chol = covariance
            .cholesky()
            .ok_or_else(|| invalid("covariance", "positive definite", f64::NAN))?;
        Self::gaussian(d)?.with_scale(chol.l())
    }

    /// The power-law state Ψ = √(Γ((d+ν)/2)/(π^{d/2}Γ(ν/2))) (1+xᵀx)^{-(d+ν)/4}.
    pub fn student_t(d: usize, nu: f64) -> Result<Self, StateError> {
        check_dim(d)?;
        check_nu(nu)?;
        Ok(Self { dim: d, shape: Shape::StudentT { nu }, scale: None })
    }

    /// Student-t scaled to identity covariance, Ψ ∝ (1 + xᵀx/(ν-2))^{-(d+ν)/4}.
    pub fn student_t_unit_covariance(d: usize, nu: f64) -> Result<Self, StateError> {
        if !(nu > 2.0) {
            return Err(invalid("nu", "nu > 2 for finite covariance", nu));
        }
        Self::student_t(d, nu)?.rescale_isotropic((nu - 2.0).sqrt())
    }

    /// The Fourier partner of [`Wavefunction::student_t`], written directly.
    pub fn student_t_partner(d: usize, nu: f64) -> Result<Self, StateError> {
        check_dim(d)?;
        check_nu(nu)?;
        Ok(Self { dim: d, shape: Shape::StudentTPartner { nu }, scale: None })
    }

    /// Student-r on the unit ball, Ψ ∝ (1 - xᵀx)^{(ν-d)/4}.
    pub fn student_r(d: usize, nu: f64) -> Result<Self, StateError> {
        check_dim(d)?;
        if !(nu >= d as f64) || !nu.is_finite() {
            return Err(invalid("nu", "nu >= d", nu));
        }
        Ok(Self { dim: d, shape: Shape::StudentR { nu }, scale: None })
    }

    /// Student-r with identity covariance, Ψ ∝ (1 - xᵀx/(ν+2))^{(ν-d)/4}.
    pub fn student_r_unit_covariance(d: usize, nu: f64) -> Result<Self, StateError> {
        Self::student_r(d, nu)?.rescale_isotropic((nu + 2.0).sqrt())
    }

    /// Uniform density on the unit ball.
    pub fn uniform_ball(d: usize) -> Result<Self, StateError> {
        check_dim(d)?;
        Ok(Self { dim: d, shape: Shape::UniformBall, scale: None })
    }

    /// Uniform density on the ball of radius √(d+2) (identity covariance).
    pub fn uniform_ball_unit_covariance(d: usize) -> Result<Self, StateError> {
        Self::uniform_ball(d)?.rescale_isotropic((d as f64 + 2.0).sqrt())
    }

    /// Ψ(x) = e^{-|x|} in one dimension.
    pub fn laplace() -> Self {
        Self { dim: 1, shape: Shape::Laplace, scale: None }
    }

    pub fn sampled(grid: SampledGrid) -> Result<Self, StateError> {
        let norm_sq = grid.norm_sq();
        if (norm_sq - 1.0).abs() > GRID_NORM_TOL {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(Self { dim: grid.spec.dim(), shape: Shape::Sampled(grid), scale: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn scale(&self) -> Option<&Scale> {
        self.scale.as_ref()
    }

    /// |det M| of the applied scaling (1 when unscaled).
    pub fn scale_det(&self) -> f64 {
        self.scale.as_ref().map_or(1.0, |s| s.abs_det)
    }

    /// Length scale s when the state is an isotropically scaled radial
    /// shape (1 when unscaled), `None` for anisotropic scalings.
    pub fn isotropic_scale(&self) -> Option<f64> {
        match &self.scale {
            None => Some(1.0),
            Some(s) => s.isotropic,
        }
    }

    /// Covariance of |Ψ|² for Gaussian states.
    pub fn covariance(&self) -> Option<DMatrix<f64>> {
        if !matches!(self.shape, Shape::Gaussian) {
            return None;
        }
        Some(match &self.scale {
            None => DMatrix::identity(self.dim, self.dim),
            Some(s) => &s.matrix * s.matrix.transpose(),
        })
    }

    fn with_scale(mut self, m: DMatrix<f64>) -> Result<Self, StateError> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(StateError::DimensionMismatch { expected: self.dim, got: m.nrows() });
        }
        if matches!(self.shape, Shape::Sampled(_)) {
            return Err(StateError::Unsupported(
                "rescaling a sampled grid; resample the scaled state instead".into(),
            ));
        }
        let combined = match &self.scale {
            None => m,
            Some(s) => m * &s.matrix,
        };
        let identity = DMatrix::<f64>::identity(self.dim, self.dim);
        self.scale = if (&combined - &identity).amax() == 0.0 {
            None
        } else {
            Some(Scale::new(combined)?)
        };
        Ok(self)
    }

    /// Ψ(x) ↦ |det M|^{-1/2} Ψ(M⁻¹x). The unit L² norm is preserved.
    pub fn rescale(&self, m: &DMatrix<f64>) -> Result<Self, StateError> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(StateError::DimensionMismatch { expected: self.dim, got: m.nrows() });
        }
        let det = m.determinant();
        if !det.is_finite() || det == 0.0 {
            return Err(StateError::Singular);
        }
        self.clone().with_scale(m.clone())
    }

    /// Rescale by s·I.
    pub fn rescale_isotropic(&self, s: f64) -> Result<Self, StateError> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(StateError::Singular);
        }
        self.rescale(&(DMatrix::identity(self.dim, self.dim) * s))
    }

    /// Analytic Fourier partner (the state of the conjugate observable).
    pub fn fourier_partner(&self) -> Result<Self, StateError> {
        let d = self.dim;
        let (shape, own_scale) = match &self.shape {
            Shape::Gaussian => (Shape::Gaussian, Some(0.5)),
            Shape::StudentT { nu } => (Shape::StudentTPartner { nu: *nu }, None),
            Shape::StudentTPartner { nu } => (Shape::StudentT { nu: *nu }, None),
            Shape::Laplace => (Shape::StudentT { nu: 3.0 }, None),
            Shape::StudentR { nu } if d == 1 => {
                (Shape::CompactPartner { kappa: (nu - 1.0) / 4.0 }, None)
            }
            Shape::UniformBall if d == 1 => (Shape::CompactPartner { kappa: 0.0 }, None),
            Shape::CompactPartner { kappa } => {
                if *kappa == 0.0 {
                    (Shape::UniformBall, None)
                } else {
                    (Shape::StudentR { nu: 4.0 * kappa + 1.0 }, None)
                }
            }
            Shape::StudentR { .. } | Shape::UniformBall => {
                return Err(StateError::Unsupported(format!(
                    "analytic Fourier partner of {} in d = {d}",
                    self.shape.name()
                )))
            }
            Shape::Sampled(_) => {
                return Err(StateError::Unsupported(
                    "sampled grids: use transforms::continuous_transform".into(),
                ))
            }
        };
        // FT of |det M|^{-1/2}Ψ(M⁻¹x) is |det M'|^{-1/2}Ψ̂(M'⁻¹k) with M' = M^{-T}.
        let mut m = match &self.scale {
            None => DMatrix::identity(d, d),
            Some(s) => s.inverse.transpose(),
        };
        if let Some(p) = own_scale {
            m *= p;
        }
        let partner = Self { dim: d, shape, scale: None };
        let identity = DMatrix::<f64>::identity(d, d);
        if (&m - &identity).amax() == 0.0 {
            Ok(partner)
        } else {
            partner.with_scale(m)
        }
    }

    fn canonical_point(&self, x: &[f64]) -> Result<Vec<f64>, StateError> {
        if x.len() != self.dim {
            return Err(StateError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("x", "finite coordinates", f64::NAN));
        }
        Ok(match &self.scale {
            None => x.to_vec(),
            Some(s) => {
                let v = nalgebra::DVector::from_column_slice(x);
                (&s.inverse * v).iter().copied().collect()
            }
        })
    }

    /// Probability density |Ψ(x)|².
    pub fn density_at(&self, x: &[f64]) -> Result<f64, StateError> {
        let y = self.canonical_point(x)?;
        let inv_det = 1.0 / self.scale_det();
        if let Shape::Sampled(grid) = &self.shape {
            return Ok(grid.interpolate(&y).norm_sqr());
        }
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ln_rho = canonical_ln_density(&self.shape, self.dim, r.ln());
        Ok(inv_det * ln_rho.exp())
    }

    /// Amplitude Ψ(x). Analytic families are real; the compact-support
    /// partners change sign.
    pub fn amplitude_at(&self, x: &[f64]) -> Result<Complex64, StateError> {
        let y = self.canonical_point(x)?;
        let factor = self.scale_det().powf(-0.5);
        if let Shape::Sampled(grid) = &self.shape {
            return Ok(grid.interpolate(&y));
        }
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let magnitude = (0.5 * canonical_ln_density(&self.shape, self.dim, r.ln())).exp();
        let sign = match self.shape {
            Shape::CompactPartner { kappa } => compact_partner_reduced(kappa, r).signum(),
            _ => 1.0,
        };
        Ok(Complex64::new(factor * sign * magnitude, 0.0))
    }

    /// Samples Ψ on `spec` (any family, including other sampled grids).
    pub fn sample_on(&self, spec: &GridSpec) -> Result<SampledGrid, StateError> {
        if spec.dim() != self.dim {
            return Err(StateError::DimensionMismatch { expected: self.dim, got: spec.dim() });
        }
        let samples = spec
            .points()
            .map(|p| self.amplitude_at(&p))
            .collect::<Result<Vec<_>, _>>()?;
        SampledGrid::new(spec.clone(), samples)
    }

    /// Family label for reports.
    pub fn family(&self) -> String {
        match &self.shape {
            Shape::StudentT { nu } | Shape::StudentTPartner { nu } | Shape::StudentR { nu } => {
                format!("{}(nu={nu})", self.shape.name())
            }
            Shape::CompactPartner { kappa } => format!("compact-partner(kappa={kappa})"),
            other => other.name().to_string(),
        }
    }
}

/// ln of the canonical radial density at radius r = e^t. Sampled shapes are
/// not radial and return NaN.
pub(crate) fn canonical_ln_density(shape: &Shape, d: usize, t: f64) -> f64 {
    let df = d as f64;
    let ln_pi = PI.ln();
    match shape {
        Shape::Gaussian => -0.5 * df * (2.0 * PI).ln() - 0.5 * (2.0 * t).exp(),
        Shape::StudentT { nu } => {
            let a = 0.5 * (df + nu);
            student_t_ln_norm(d, *nu) - a * (2.0 * t).exp().ln_1p()
        }
        Shape::StudentTPartner { nu } => {
            let mu = (df - nu) / 4.0;
            if t == f64::NEG_INFINITY {
                // r^{(ν-d)/2} K_μ(r)² → Γ(|μ|)² 2^{(ν-d)/2} / 4 when ν > d
                return if *nu > df {
                    student_t_partner_ln_norm(d, *nu)
                        + 2.0 * log_gamma_unchecked(mu.abs())
                        + (0.5 * (nu - df) - 2.0) * std::f64::consts::LN_2
                } else {
                    f64::INFINITY
                };
            }
            match ln_bessel_k_of_ln(mu, t) {
                Ok(ln_k) => student_t_partner_ln_norm(d, *nu) + 0.5 * (nu - df) * t + 2.0 * ln_k,
                Err(_) => f64::NAN,
            }
        }
        Shape::StudentR { nu } => {
            if t >= 0.0 {
                return f64::NEG_INFINITY;
            }
            let m = 0.5 * (nu - df);
            let base = log_gamma_unchecked(m + 1.0 + 0.5 * df)
                - 0.5 * df * ln_pi
                - log_gamma_unchecked(m + 1.0);
            if m == 0.0 {
                base
            } else {
                base + m * (-(2.0 * t).exp()).ln_1p()
            }
        }
        Shape::UniformBall => {
            if t >= 0.0 {
                f64::NEG_INFINITY
            } else {
                log_gamma_unchecked(0.5 * df + 1.0) - 0.5 * df * ln_pi
            }
        }
        Shape::Laplace => -2.0 * t.exp(),
        Shape::CompactPartner { kappa } => {
            let r = t.exp();
            let red = compact_partner_reduced(*kappa, r);
            compact_partner_ln_norm(*kappa) + 2.0 * red.abs().ln()
        }
        Shape::Sampled(_) => f64::NAN,
    }
}

/// ln[Γ((d+ν)/2) / (π^{d/2} Γ(ν/2))].
pub(crate) fn student_t_ln_norm(d: usize, nu: f64) -> f64 {
    let df = d as f64;
    log_gamma_unchecked(0.5 * (df + nu)) - 0.5 * df * PI.ln() - log_gamma_unchecked(0.5 * nu)
}

/// ln of the squared prefactor of the Student-t Fourier partner,
/// 2^{(4-d-ν)/2} Γ((d+ν)/2) / (π^{d/2} Γ(ν/2) Γ²((d+ν)/4)).
pub(crate) fn student_t_partner_ln_norm(d: usize, nu: f64) -> f64 {
    let df = d as f64;
    0.5 * (4.0 - df - nu) * std::f64::consts::LN_2 + student_t_ln_norm(d, nu)
        - 2.0 * log_gamma_unchecked(0.25 * (df + nu))
}

/// Density constant c of (1 - x²)^{2κ} on [-1, 1].
fn compact_density_ln_norm(kappa: f64) -> f64 {
    let m = 2.0 * kappa;
    log_gamma_unchecked(m + 1.5) - 0.5 * PI.ln() - log_gamma_unchecked(m + 1.0)
}

/// ln[(c/2) Γ(κ+1)²]: the partner density is this times ((2/k)^{ν} J_ν(k))².
pub(crate) fn compact_partner_ln_norm(kappa: f64) -> f64 {
    compact_density_ln_norm(kappa) - std::f64::consts::LN_2 + 2.0 * log_gamma_unchecked(kappa + 1.0)
}

/// (2/k)^ν J_ν(k) with ν = κ + 1/2, evaluated without the 0/0 at k = 0.
pub(crate) fn compact_partner_reduced(kappa: f64, k: f64) -> f64 {
    let nu = kappa + 0.5;
    let k = k.abs();
    if k <= 12.0 + nu {
        let half = 0.5 * k;
        let mut term = (-log_gamma_unchecked(nu + 1.0)).exp();
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
    } else {
        (nu * (2.0 / k).ln()).exp() * bessel_j(nu, k).unwrap_or(f64::NAN)
    }
}

/// Uniform Cartesian grid: `lower[i] + j * spacing[i]`, j < points[i].
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub spacing: Vec<f64>,
    pub points: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, spacing: Vec<f64>, points: Vec<usize>) -> Result<Self, StateError> {
        let d = lower.len();
        if d == 0 || spacing.len() != d || points.len() != d {
            return Err(StateError::Grid("lower, spacing and points must share a length >= 1".into()));
        }
        if d > 3 {
            return Err(StateError::Unsupported(format!("sampled grids with d = {d} > 3")));
        }
        if spacing.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(StateError::Grid("spacing must be positive".into()));
        }
        if points.iter().any(|&n| n < 2) {
            return Err(StateError::Grid("each axis needs at least two points".into()));
        }
        Ok(Self { lower, spacing, points })
    }

    /// `n` points from -half_width to half_width inclusive; symmetric about
    /// the origin (and containing it) when `n` is odd.
    pub fn symmetric_1d(half_width: f64, n: usize) -> Result<Self, StateError> {
        if n < 2 {
            return Err(StateError::Grid("each axis needs at least two points".into()));
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        Self::new(vec![-half_width], vec![h], vec![n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn coordinate(&self, axis: usize, j: usize) -> f64 {
        self.lower[axis] + j as f64 * self.spacing[axis]
    }

    /// Grid points in row-major order (last axis fastest).
    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |flat| {
            let mut rem = flat;
            let mut p = vec![0.0; self.dim()];
            for axis in (0..self.dim()).rev() {
                let j = rem % self.points[axis];
                rem /= self.points[axis];
                p[axis] = self.coordinate(axis, j);
            }
            p
        })
    }
}

/// Complex amplitudes on a [`GridSpec`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

impl SampledGrid {
    pub fn new(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self, StateError> {
        if samples.len() != spec.len() {
            return Err(StateError::Grid(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                spec.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StateError::Grid("non-finite sample".into()));
        }
        Ok(Self { spec, samples })
    }

    /// Rescales the samples to unit norm; returns the grid and the factor
    /// that was applied.
    pub fn normalized(mut self) -> Result<(Self, f64), StateError> {
        let norm_sq = self.norm_sq();
        if !(norm_sq > 0.0) {
            return Err(StateError::NotNormalized { norm_sq });
        }
        let factor = norm_sq.sqrt().recip();
        for z in &mut self.samples {
            *z *= factor;
        }
        Ok((self, factor))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Riemann sum Σ|Ψ|² ΔV.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.spec.cell_volume()
    }

    /// Largest sample density on the outer faces relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.samples.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let d = self.spec.dim();
        let mut worst: f64 = 0.0;
        for (flat, z) in self.samples.iter().enumerate() {
            let mut rem = flat;
            let mut on_face = false;
            for axis in (0..d).rev() {
                let j = rem % self.spec.points[axis];
                rem /= self.spec.points[axis];
                on_face |= j == 0 || j + 1 == self.spec.points[axis];
            }
            if on_face {
                worst = worst.max(z.norm_sqr());
            }
        }
        worst / peak
    }

    /// Multilinear interpolation; zero outside the grid.
    pub fn interpolate(&self, x: &[f64]) -> Complex64 {
        let d = self.spec.dim();
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for axis in 0..d {
            let u = (x[axis] - self.spec.lower[axis]) / self.spec.spacing[axis];
            let n = self.spec.points[axis];
            if !(u >= 0.0) || u > (n - 1) as f64 {
                return Complex64::new(0.0, 0.0);
            }
            let j = (u.floor() as usize).min(n - 2);
            base[axis] = j;
            frac[axis] = u - j as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut weight = 1.0;
            let mut flat = 0usize;
            for axis in 0..d {
                let bit = (corner >> axis) & 1;
                weight *= if bit == 1 { frac[axis] } else { 1.0 - frac[axis] };
                flat = flat * self.spec.points[axis] + base[axis] + bit;
            }
            if weight != 0.0 {
                acc += self.samples[flat] * weight;
            }
        }
        acc
    }

    /// Writes `x_1,...,x_d,re,im` rows in row-major grid order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), StateError> {
        let mut w = csv::Writer::from_writer(writer);
        let d = self.spec.dim();
        let mut header: Vec<String> = (1..=d).map(|i| format!("x_{i}")).collect();
        header.push("re".into());
        header.push("im".into());
        w.write_record(&header).map_err(|e| StateError::Csv(e.to_string()))?;
        for (p, z) in self.spec.points().zip(&self.samples) {
            let mut row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            row.push(z.re.to_string());
            row.push(z.im.to_string());
            w.write_record(&row).map_err(|e| StateError::Csv(e.to_string()))?;
        }
        w.flush().map_err(|e| StateError::Csv(e.to_string()))
    }

    /// Reads the format produced by [`SampledGrid::write_csv`]. The grid is
    /// recovered from the coordinates, which must be uniform and row-major.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, StateError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers().map_err(|e| StateError::Csv(e.to_string()))?.clone();
        let cols = header.len();
        if cols < 3 {
            return Err(StateError::Csv("expected x_1,...,x_d,re,im".into()));
        }
        let d = cols - 2;
        let expected: Vec<String> = (1..=d)
            .map(|i| format!("x_{i}"))
            .chain(["re".to_string(), "im".to_string()])
            .collect();
        if header.iter().map(str::trim).ne(expected.iter().map(String::as_str)) {
            return Err(StateError::Csv(format!("header must be {}", expected.join(","))));
        }
        let mut coords: Vec<Vec<f64>> = Vec::new();
        let mut samples = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| StateError::Csv(e.to_string()))?;
            let vals = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| StateError::Csv(e.to_string()))?;
            if vals.len() != cols {
                return Err(StateError::Csv("ragged row".into()));
            }
            coords.push(vals[..d].to_vec());
            samples.push(Complex64::new(vals[d], vals[d + 1]));
        }
        if coords.is_empty() {
            return Err(StateError::Csv("no rows".into()));
        }
        let mut lower = Vec::with_capacity(d);
        let mut spacing = Vec::with_capacity(d);
        let mut points = Vec::with_capacity(d);
        for axis in 0..d {
            let mut axis_vals: Vec<f64> = coords.iter().map(|c| c[axis]).collect();
            axis_vals.sort_by(f64::total_cmp);
            axis_vals.dedup();
            if axis_vals.len() < 2 {
                return Err(StateError::Csv(format!("axis {} has fewer than two values", axis + 1)));
            }
            lower.push(axis_vals[0]);
            spacing.push((axis_vals[axis_vals.len() - 1] - axis_vals[0]) / (axis_vals.len() - 1) as f64);
            points.push(axis_vals.len());
        }
        let spec = GridSpec::new(lower, spacing, points)?;
        if spec.len() != samples.len() {
            return Err(StateError::Csv("rows do not form a full Cartesian grid".into()));
        }
        for (expected, got) in spec.points().zip(&coords) {
            for axis in 0..d {
                let tol = 1e-9 * spec.spacing[axis];
                if (expected[axis] - got[axis]).abs() > tol {
                    return Err(StateError::Csv("grid is not uniform or not in row-major order".into()));
                }
            }
        }
        SampledGrid::new(spec, samples)
    }
}

/// Unit-norm amplitude vector on the alphabet {0, ..., n-1}. States on a
/// countable alphabet with finitely many nonzero amplitudes are stored
/// through their support, since shifting the alphabet only changes a global
/// phase of the transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteState {
    amplitudes: Vec<Complex64>,
}

impl DiscreteState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if amplitudes.is_empty() {
            return Err(StateError::Empty);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > DISCRETE_NORM_TOL {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_unnormalized(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if amplitudes.is_empty() {
            return Err(StateError::Empty);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(StateError::NotNormalized { norm_sq: norm * norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Kronecker indicator at `index` on an alphabet of size n.
    pub fn kronecker(n: usize, index: usize) -> Result<Self, StateError> {
        if index >= n {
            return Err(invalid("index", "index < n", index as f64));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Flat state 1/√n.
    pub fn uniform(n: usize) -> Result<Self, StateError> {
        if n == 0 {
            return Err(StateError::Empty);
        }
        let a = Complex64::new((n as f64).sqrt().recip(), 0.0);
        Self::new(vec![a; n])
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Haar-like random state: independent complex standard normals,
/// normalized. Deterministic given `seed`.
pub fn random_discrete_state(n: usize, seed: u64) -> Result<DiscreteState, StateError> {
    if n == 0 {
        return Err(StateError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    DiscreteState::from_unnormalized(amps)
}
