use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::spectral::decay_exponent_fit;

/// `A_{k,ℓ} = (−Δ)^ℓ + |x|^{2k}` on `ℝⁿ`, with the negative power `μ` used by
/// the decay check and the box discretization for the solver.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnharmonicSpec {
    pub k: u32,
    pub ell: u32,
    pub n: u32,
    pub mu: f64,
    /// Interior grid points on `[−extent, extent]`.
    pub points: usize,
    pub extent: f64,
}

impl AnharmonicSpec {
    pub fn new(k: u32, ell: u32, mu: f64) -> Self {
        Self {
            k,
            ell,
            n: 1,
            mu,
            points: 2000,
            extent: 12.0,
        }
    }

    pub fn with_grid(mut self, points: usize, extent: f64) -> Self {
        self.points = points;
        self.extent = extent;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.ell < 1 {
            return Err(invalid!("k and ell must be at least 1"));
        }
        if self.n != 1 {
            return Err(invalid!(
                "the Galerkin solver is one-dimensional (n = {})",
                self.n
            ));
        }
        if self.points < 100 {
            return Err(invalid!(
                "need at least 100 grid points, got {}",
                self.points
            ));
        }
        if !(self.extent > 0.0) || !self.extent.is_finite() {
            return Err(invalid!("extent must be positive, got {}", self.extent));
        }
        if !(self.mu >= 0.0) || !self.mu.is_finite() {
            return Err(invalid!("mu must be nonnegative, got {}", self.mu));
        }
        Ok(())
    }
}

/// Lowest eigenvalues of the discretized operator.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub count: usize,
    pub points: usize,
    pub extent: f64,
    /// Number of sine modes in the Galerkin basis.
    pub modes: usize,
    pub hermiticity_residual: f64,
}

/// `(k + ℓ) n / (2 k ℓ p)`: `(I + A_{k,ℓ})^{−μ}` is in `S_p` for `μ` above it.
pub fn anharmonic_schatten_threshold(k: u32, ell: u32, n: u32, p: f64) -> Result<f64> {
    if k < 1 || ell < 1 || n < 1 {
        return Err(invalid!(
            "k, ell and n must be at least 1 (got {k}, {ell}, {n})"
        ));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid!("p must be positive, got {p}"));
    }
    let (k, ell, n) = (k as f64, ell as f64, n as f64);
    Ok((k + ell) * n / (2.0 * k * ell * p))
}

/// Galerkin basis size: enough sine modes to resolve `count` levels.
fn mode_count(points: usize, count: usize) -> usize {
    points.min((8 * count).max(200))
}

/// Lowest `count` eigenvalues of `(−d²/dx²)^ℓ + |x|^{2k}` on
/// `[−extent, extent]` with Dirichlet walls.
///
/// The operator is projected onto the first sine modes of the box, where the
/// kinetic part is diagonal with entries `(mπ / 2L)^{2ℓ}`. Potential matrix
/// elements use the discrete sine transform quadrature on the interior grid,
/// which reduces to `c(|m−m'|) − c(m+m')` with `c` a cosine sum of the sampled
/// potential.
pub fn anharmonic_galerkin_spectrum(spec: &AnharmonicSpec, count: usize) -> Result<SpectrumResult> {
    spec.validate()?;
    if count == 0 || count > spec.points / 10 {
        return Err(invalid!(
            "count must be in 1..={} for {} grid points, got {count}",
            spec.points / 10,
            spec.points
        ));
    }
    let n = spec.points;
    let half = spec.extent;
    let h = 2.0 * half / (n + 1) as f64;
    let modes = mode_count(n, count);
    let potential: Vec<f64> = (1..=n)
        .map(|j| {
            let x = -half + j as f64 * h;
            x.abs().powi(2 * spec.k as i32)
        })
        .collect();

    let scale = 1.0 / (n + 1) as f64;
    let cosine_sum: Vec<f64> = (0..=2 * modes)
        .map(|q| {
            let theta = PI * q as f64 / (n + 1) as f64;
            scale
                * potential
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (theta * (j + 1) as f64).cos())
                    .sum::<f64>()
        })
        .collect();

    let wave = PI / (2.0 * half);
    let mut hamiltonian = DMatrix::<f64>::from_fn(modes, modes, |a, b| {
        let (ma, mb) = (a + 1, b + 1);
        cosine_sum[ma.abs_diff(mb)] - cosine_sum[ma + mb]
    });
    for a in 0..modes {
        hamiltonian[(a, a)] += (wave * (a + 1) as f64).powi(2 * spec.ell as i32);
    }

    let residual = (&hamiltonian - hamiltonian.transpose()).amax();
    if residual > 1e-8 {
        return Err(Error::NotHermitian(residual));
    }
    let mut eigenvalues: Vec<f64> =
        SymmetricEigen::try_new(hamiltonian, f64::EPSILON, crate::max_iterations(modes))
            .ok_or(Error::NoConvergence("symmetric eigensolver", modes))?
            .eigenvalues
            .iter()
            .copied()
            .collect();
    eigenvalues.sort_by(f64::total_cmp);
    eigenvalues.truncate(count);
    Ok(SpectrumResult {
        count: eigenvalues.len(),
        eigenvalues,
        points: n,
        extent: spec.extent,
        modes,
        hermiticity_residual: residual,
    })
}

/// Slope margin in [`anharmonic_decay_check`]: at `μ` equal to the threshold
/// the fitted slope sits on `−1/p` up to discretization noise, which must not
/// decide the outcome.
pub const DECAY_MARGIN: f64 = 1e-2;

/// Finite-sample evidence for `(1 + E_m)^{−μ} = o(m^{−1/p})`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayCheck {
    pub fitted_slope: f64,
    pub half_width: f64,
    /// `−1/p`.
    pub threshold_slope: f64,
    /// Smallest `μ` for which membership in `S_p` is guaranteed.
    pub threshold_mu: f64,
    /// `fitted_slope + half_width < threshold_slope − margin`.
    pub pass: bool,
    pub margin: f64,
}

pub fn anharmonic_decay_check(spec: &AnharmonicSpec, p: f64, count: usize) -> Result<DecayCheck> {
    let threshold_mu = anharmonic_schatten_threshold(spec.k, spec.ell, spec.n, p)?;
    let spectrum = anharmonic_galerkin_spectrum(spec, count)?;
    let values: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|e| (1.0 + e).powf(-spec.mu))
        .collect();
    let fit = decay_exponent_fit(&values)?;
    let threshold_slope = -1.0 / p;
    Ok(DecayCheck {
        fitted_slope: fit.slope,
        half_width: fit.half_width,
        threshold_slope,
        threshold_mu,
        pass: fit.slope + fit.half_width < threshold_slope - DECAY_MARGIN,
        margin: DECAY_MARGIN,
    })
}
