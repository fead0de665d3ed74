//! Dixmier-trace estimation for operators `A = T_a ∘ β(D)` on the circle,
//! with `a ≥ 0` a trigonometric polynomial and `β ≥ 0` a Fourier multiplier.
//!
//! The estimate follows `Tr_ω(A) = lim_{p→1⁺} (p−1) Tr(Aᵖ)`: the spectrum of
//! each truncated factor is computed once, `Tr(Aᵖ)` is re-summed at every grid
//! point, and `g(p) = (p−1) Π Tr(A_mᵖ)` is extrapolated linearly to `p = 1`.
//!
//! Near `p = 1` the truncation `|j| ≤ J` alone is useless for slowly decaying
//! `β`: the neglected tail is of relative size `J^{1−p}`. Multipliers with a
//! known closed form therefore carry an Euler–Maclaurin tail
//! `Σ_{|j|>J} β(j)ᵖ`, weighted by the mean of `aᵖ` over the circle.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::SymmetricEigen;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::accel::linear_fit;
use crate::error::{invalid, Error, Result};
use crate::{CMatrix, C64};

/// Relative Hermitian-part skewness above which a factor is flagged.
pub const SKEW_WARNING: f64 = 1e-6;
/// Negative eigenvalues below `−NEGATIVE_TOL · ‖M‖` violate positivity.
pub const NEGATIVE_TOL: f64 = 1e-8;
/// Relative slack in `g(p) ≤ h(p)`.
pub const BOUND_SLACK: f64 = 1e-8;
/// Largest RMS residual of the linear fit, relative to `max |g|` over the
/// grid, for a converged limit.
pub const RESIDUAL_TOL: f64 = 1e-3;
/// Largest relative change of `Π Tr(A_mᵖ)` between `J/2` and `J` at the
/// smallest grid point for a converged limit.
pub const DRIFT_TOL: f64 = 1e-3;
/// Successive `h(p)` changes must stay below this fraction of `max |h|`.
pub const STABILIZATION_TOL: f64 = 0.05;

/// Largest cutoff for which a non-constant `a` is diagonalized densely; the
/// matrix has side `2J + 1`.
pub const MAX_DENSE_CUTOFF: usize = 1024;

/// Nonnegative Fourier multiplier `β: ℤ → [0, ∞)`.
#[derive(Clone)]
pub enum Multiplier {
    /// `(1 + j²)^{−s/2}`; `s = 1` is the inverse square root of `1 + j²`.
    InvPower { s: f64 },
    /// Finitely supported values; zero elsewhere.
    Finite(BTreeMap<i64, f64>),
    /// Arbitrary values with no tail model.
    Custom(Arc<dyn Fn(i64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplier::InvPower { s } => f.debug_struct("InvPower").field("s", s).finish(),
            Multiplier::Finite(m) => f.debug_tuple("Finite").field(m).finish(),
            Multiplier::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Multiplier {
    pub fn inv_sqrt_quadratic() -> Self {
        Multiplier::InvPower { s: 1.0 }
    }

    pub fn eval(&self, j: i64) -> f64 {
        match self {
            Multiplier::InvPower { s } => (1.0 + (j as f64) * (j as f64)).powf(-s / 2.0),
            Multiplier::Finite(m) => m.get(&j).copied().unwrap_or(0.0),
            Multiplier::Custom(f) => f(j),
        }
    }

    /// `Σ_{|j|>J} β(j)ᵖ`, or `None` when no tail model is available.
    /// Divergent tails are `+∞`.
    pub fn tail_power_sum(&self, p: f64, cutoff: usize) -> Option<f64> {
        match self {
            Multiplier::InvPower { s } => Some(inv_power_tail(p * s / 2.0, cutoff)),
            Multiplier::Finite(m) => Some(
                m.iter()
                    .filter(|(j, _)| j.unsigned_abs() as usize > cutoff)
                    .map(|(_, v)| v.powf(p))
                    .sum(),
            ),
            Multiplier::Custom(_) => None,
        }
    }
}

/// Start of the asymptotic tail expansion; smaller cutoffs are summed directly
/// up to here.
const TAIL_START: usize = 64;

/// `2 Σ_{j>J} (1 + j²)^{−q}`.
fn inv_power_tail(q: f64, cutoff: usize) -> f64 {
    if q <= 0.5 {
        return f64::INFINITY;
    }
    let f = |x: f64| (1.0 + x * x).powf(-q);
    let start = cutoff.max(TAIL_START);
    let direct: f64 = (cutoff + 1..=start).map(|j| f(j as f64)).sum();
    2.0 * (direct + euler_maclaurin_tail(q, start as f64))
}

/// `Σ_{j>x} (1 + j²)^{−q}` for `x ≥ TAIL_START` by Euler–Maclaurin:
/// `∫_x^∞ f − f(x)/2 − f'(x)/12 + f'''(x)/720`.
fn euler_maclaurin_tail(q: f64, x: f64) -> f64 {
    let u = 1.0 + x * x;
    let f = u.powf(-q);
    let f1 = -2.0 * q * x * u.powf(-q - 1.0);
    let f3 = 12.0 * q * (q + 1.0) * x * u.powf(-q - 2.0)
        - 8.0 * q * (q + 1.0) * (q + 2.0) * x * x * x * u.powf(-q - 3.0);
    inv_power_integral(q, x) - f / 2.0 - f1 / 12.0 + f3 / 720.0
}

/// `∫_x^∞ (1 + t²)^{−q} dt` for `x > 1`, from the binomial series of
/// `t^{−2q} (1 + t^{−2})^{−q}`.
fn inv_power_integral(q: f64, x: f64) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 0..200 {
        let e = 2.0 * q + 2.0 * k as f64 - 1.0;
        let term = binom * x.powf(-e) / e;
        total += term;
        if term.abs() <= 1e-18 * total.abs() {
            break;
        }
        binom *= (-q - k as f64) / (k as f64 + 1.0);
    }
    total
}

/// Separable torus symbol `σ(x, j) = a(x) β(j)` with `a` a real, nonnegative
/// trigonometric polynomial given by its Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SeparableSymbol {
    a_hat: BTreeMap<i64, C64>,
    beta: Multiplier,
    degree: usize,
    /// `a(x_i)` on `max(8·degree, 16)` equispaced points.
    samples: Vec<f64>,
    a_sup: f64,
}

impl SeparableSymbol {
    pub fn new(a_hat: BTreeMap<i64, C64>, beta: Multiplier) -> Result<Self> {
        if a_hat.is_empty() {
            return Err(invalid!("a_hat must have at least one coefficient"));
        }
        let scale = a_hat.values().map(|z| z.norm()).fold(0.0, f64::max);
        for (&j, &c) in &a_hat {
            let mirror = a_hat.get(&-j).copied().unwrap_or(C64::new(0.0, 0.0));
            if (mirror - c.conj()).norm() > 1e-12 * scale.max(1.0) {
                return Err(invalid!(
                    "a_hat is not conjugate-symmetric at frequency {j}"
                ));
            }
        }
        let degree = a_hat
            .keys()
            .map(|j| j.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let count = (8 * degree).max(16);
        let samples: Vec<f64> = (0..count)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / count as f64;
                a_hat
                    .iter()
                    .map(|(&j, c)| (c * C64::new(0.0, j as f64 * x).exp()).re)
                    .sum()
            })
            .collect();
        if let Some(min) = samples.iter().copied().reduce(f64::min) {
            if min < -1e-12 * scale.max(1.0) {
                return Err(invalid!("a takes the negative value {min:e}"));
            }
        }
        let a_sup = samples.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Ok(Self {
            a_hat,
            beta,
            degree,
            samples,
            a_sup,
        })
    }

    /// `a ≡ c`.
    pub fn constant(c: f64, beta: Multiplier) -> Result<Self> {
        let mut a_hat = BTreeMap::new();
        a_hat.insert(0, C64::new(c, 0.0));
        Self::new(a_hat, beta)
    }

    pub fn a_hat(&self) -> &BTreeMap<i64, C64> {
        &self.a_hat
    }

    pub fn beta(&self) -> &Multiplier {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `‖a‖_∞`, from the oversampled grid.
    pub fn a_sup(&self) -> f64 {
        self.a_sup
    }

    /// `(1/2π) ∫ aᵖ`, by the trapezoid rule on the sample grid.
    pub fn a_mean_power(&self, p: f64) -> f64 {
        self.samples.iter().map(|v| v.max(0.0).powf(p)).sum::<f64>() / self.samples.len() as f64
    }

    /// The multiplication part is the constant `â(0)`.
    pub fn is_diagonal(&self) -> bool {
        self.degree == 0
    }

    fn beta_checked(&self, j: i64) -> Result<f64> {
        let b = self.beta.eval(j);
        if !(b >= 0.0) || !b.is_finite() {
            return Err(invalid!(
                "beta({j}) = {b} is not a nonnegative finite number"
            ));
        }
        Ok(b)
    }
}

/// Fourier-side matrix of `T_a ∘ β(D)` on frequencies `−J..=J`:
/// `A_{jk} = â(j−k) β(k)`.
pub fn assemble_truncated_matrix(s: &SeparableSymbol, cutoff: usize) -> Result<CMatrix> {
    if cutoff < s.degree() {
        return Err(invalid!(
            "cutoff {cutoff} is below the degree {} of a",
            s.degree()
        ));
    }
    let size = 2 * cutoff + 1;
    let j0 = cutoff as i64;
    let beta = (0..size)
        .map(|k| s.beta_checked(k as i64 - j0))
        .collect::<Result<Vec<_>>>()?;
    let zero = C64::new(0.0, 0.0);
    Ok(CMatrix::from_fn(size, size, |r, c| {
        let diff = r as i64 - c as i64;
        s.a_hat.get(&diff).copied().unwrap_or(zero) * beta[c]
    }))
}

/// Spectrum of one truncated factor, computed once and re-summed per `p`.
#[derive(Clone, Debug)]
pub struct FactorSpectrum {
    pub cutoff: usize,
    /// Eigenvalues of the Hermitian part, negatives within tolerance clipped.
    pub eigenvalues: Vec<f64>,
    /// `β(j)` for `|j| ≤ J`, ascending `j`.
    pub beta_values: Vec<f64>,
    /// `‖M − M*‖ / (2‖M‖)` in Frobenius norm.
    pub skew: f64,
    symbol: SeparableSymbol,
}

impl FactorSpectrum {
    pub fn new(s: &SeparableSymbol, cutoff: usize) -> Result<Self> {
        if cutoff < s.degree() {
            return Err(invalid!(
                "cutoff {cutoff} is below the degree {} of a",
                s.degree()
            ));
        }
        if !s.is_diagonal() && cutoff > MAX_DENSE_CUTOFF {
            return Err(invalid!(
                "cutoff {cutoff} exceeds {MAX_DENSE_CUTOFF}, the dense limit for non-constant a"
            ));
        }
        let j0 = cutoff as i64;
        let beta_values = (0..=2 * cutoff)
            .map(|k| s.beta_checked(k as i64 - j0))
            .collect::<Result<Vec<_>>>()?;
        let (eigenvalues, skew) = if s.is_diagonal() {
            let c = s.a_hat[&0].re;
            (beta_values.iter().map(|b| c * b).collect(), 0.0)
        } else {
            hermitian_spectrum(&assemble_truncated_matrix(s, cutoff)?)?
        };
        Ok(Self {
            cutoff,
            eigenvalues,
            beta_values,
            skew,
            symbol: s.clone(),
        })
    }

    /// `Σ λᵢᵖ` over the truncation.
    pub fn trace_power(&self, p: f64) -> f64 {
        self.eigenvalues.iter().map(|l| l.powf(p)).sum()
    }

    /// `Σ_{|j|>J} β(j)ᵖ`, when the multiplier has a tail model.
    pub fn beta_tail(&self, p: f64) -> Option<f64> {
        self.symbol.beta.tail_power_sum(p, self.cutoff)
    }

    /// [`Self::trace_power`] plus the tail `mean(aᵖ) · Σ_{|j|>J} β(j)ᵖ`.
    pub fn trace_power_with_tail(&self, p: f64) -> Option<f64> {
        self.beta_tail(p)
            .map(|tail| self.trace_power(p) + self.symbol.a_mean_power(p) * tail)
    }

    /// `‖β‖_{ℓᵖ}ᵖ` over `|j| ≤ J`, plus the tail when `with_tail` and available.
    pub fn beta_norm_pow(&self, p: f64, with_tail: bool) -> f64 {
        let head: f64 = self.beta_values.iter().map(|b| b.powf(p)).sum();
        match (with_tail, self.beta_tail(p)) {
            (true, Some(t)) => head + t,
            _ => head,
        }
    }

    pub fn a_sup(&self) -> f64 {
        self.symbol.a_sup
    }
}

fn hermitian_spectrum(m: &CMatrix) -> Result<(Vec<f64>, f64)> {
    let adjoint = m.adjoint();
    let norm = m.norm();
    let skew = if norm == 0.0 {
        0.0
    } else {
        (m - &adjoint).norm() / (2.0 * norm)
    };
    let hermitian = (m + adjoint).scale(0.5);
    let n = hermitian.nrows();
    let raw = SymmetricEigen::try_new(hermitian, f64::EPSILON, crate::max_iterations(n))
        .ok_or(Error::NoConvergence("Hermitian eigensolver", n))?
        .eigenvalues;
    let top = raw.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let threshold = NEGATIVE_TOL * top;
    let mut eigenvalues = Vec::with_capacity(raw.len());
    for &l in raw.iter() {
        if l < -threshold {
            return Err(Error::PositivityViolation {
                eigenvalue: l,
                threshold,
            });
        }
        eigenvalues.push(l.max(0.0));
    }
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok((eigenvalues, skew))
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(invalid!("trace powers need p > 1, got {p}"));
    }
    Ok(())
}

/// `Tr(Aᵖ)` of the truncated factor (Hermitian part, clipped spectrum).
pub fn trace_power(s: &SeparableSymbol, p: f64, cutoff: usize) -> Result<f64> {
    check_exponent(p)?;
    Ok(FactorSpectrum::new(s, cutoff)?.trace_power(p))
}

/// `Tr((⊗A_m)ᵖ) = Π Tr(A_mᵖ)`.
pub fn tensor_trace_power(symbols: &[SeparableSymbol], p: f64, cutoff: usize) -> Result<f64> {
    check_exponent(p)?;
    if symbols.is_empty() {
        return Err(invalid!("need at least one factor"));
    }
    symbols.iter().map(|s| trace_power(s, p, cutoff)).product()
}

/// `pₖ = 1 + 2^{−k}(p₀ − 1)` for `k = 0..len`.
pub fn geometric_grid(p0: f64, len: usize) -> Result<Vec<f64>> {
    if !(p0 > 1.0) || !p0.is_finite() {
        return Err(invalid!("p0 must exceed 1, got {p0}"));
    }
    Ok((0..len)
        .map(|k| 1.0 + (p0 - 1.0) * 0.5f64.powi(k as i32))
        .collect())
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.len() < 3 {
        return Err(invalid!("the p grid needs at least 3 points"));
    }
    if p_grid.iter().any(|&p| !(p > 1.0) || !p.is_finite()) {
        return Err(invalid!("every grid point must exceed 1"));
    }
    if p_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid!("the p grid must be strictly decreasing"));
    }
    Ok(())
}

/// Result of [`dixmier_estimate`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DixmierEstimate {
    /// Intercept of the linear fit of `g` against `p − 1`.
    pub limit_value: f64,
    pub p_grid: Vec<f64>,
    /// `(p−1) Π Tr(A_mᵖ)`.
    pub g_values: Vec<f64>,
    /// `(p−1) Π ‖a_m‖_∞ᵖ ‖β_m‖_{ℓᵖ}ᵖ`.
    pub h_values: Vec<f64>,
    /// RMS residual of the fit.
    pub extrapolation_residual: f64,
    /// `g(p) ≤ h(p)` at every grid point.
    pub bound_check: bool,
    /// Residual and truncation drift are both within tolerance.
    pub converged: bool,
    /// All factors carried a tail model, so `g` and `h` include `|j| > J`.
    pub tail_corrected: bool,
    /// Relative change of `Π Tr(A_mᵖ)` from `J/2` to `J` at the smallest `p`.
    pub truncation_drift: f64,
    /// Some factor had a Hermitian-part skewness above [`SKEW_WARNING`].
    pub skew_warning: bool,
    pub cutoff: usize,
}

struct GridValues {
    g: Vec<f64>,
    h: Vec<f64>,
    tail_corrected: bool,
}

fn grid_values(factors: &[FactorSpectrum], p_grid: &[f64]) -> GridValues {
    let tail_corrected = factors.iter().all(|f| f.beta_tail(p_grid[0]).is_some());
    let mut g = Vec::with_capacity(p_grid.len());
    let mut h = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let trace: f64 = factors
            .iter()
            .map(|f| {
                if tail_corrected {
                    f.trace_power_with_tail(p).unwrap_or(f64::NAN)
                } else {
                    f.trace_power(p)
                }
            })
            .product();
        let bound: f64 = factors
            .iter()
            .map(|f| f.a_sup().powf(p) * f.beta_norm_pow(p, tail_corrected))
            .product();
        g.push((p - 1.0) * trace);
        h.push((p - 1.0) * bound);
    }
    GridValues {
        g,
        h,
        tail_corrected,
    }
}

/// Estimate `Tr_ω(⊗A_m)` as `lim_{p→1⁺} (p−1) Π Tr(A_mᵖ)`.
pub fn dixmier_estimate(
    symbols: &[SeparableSymbol],
    p_grid: &[f64],
    cutoff: usize,
) -> Result<DixmierEstimate> {
    check_grid(p_grid)?;
    if symbols.is_empty() {
        return Err(invalid!("need at least one factor"));
    }
    let factors = symbols
        .iter()
        .map(|s| FactorSpectrum::new(s, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let values = grid_values(&factors, p_grid);

    let window = p_grid.len().div_ceil(2);
    let start = p_grid.len() - window;
    let x: Vec<f64> = p_grid[start..].iter().map(|p| p - 1.0).collect();
    let fit = linear_fit(&x, &values.g[start..]).ok_or_else(|| invalid!("degenerate p grid"))?;
    let scale = values.g.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let relative_residual = if scale == 0.0 {
        0.0
    } else {
        fit.residual_rms / scale
    };

    let bound_check = values
        .g
        .iter()
        .zip(&values.h)
        .all(|(g, h)| *g <= h * (1.0 + BOUND_SLACK) + f64::MIN_POSITIVE);

    let truncation_drift = {
        let half = (cutoff / 2).max(symbols.iter().map(|s| s.degree()).max().unwrap_or(0));
        let p_last = [p_grid[p_grid.len() - 1]];
        let coarse = symbols
            .iter()
            .map(|s| FactorSpectrum::new(s, half))
            .collect::<Result<Vec<_>>>()?;
        let g_fine = values.g[p_grid.len() - 1];
        let g_coarse = grid_values(&coarse, &p_last).g[0];
        if g_fine == 0.0 {
            0.0
        } else {
            ((g_fine - g_coarse) / g_fine).abs()
        }
    };

    let converged = fit.intercept.is_finite()
        && relative_residual <= RESIDUAL_TOL
        && truncation_drift <= DRIFT_TOL;
    Ok(DixmierEstimate {
        limit_value: fit.intercept,
        p_grid: p_grid.to_vec(),
        g_values: values.g,
        h_values: values.h,
        extrapolation_residual: fit.residual_rms,
        bound_check,
        converged,
        tail_corrected: values.tail_corrected,
        truncation_drift,
        skew_warning: factors.iter().any(|f| f.skew > SKEW_WARNING),
        cutoff,
    })
}

/// Finite-sample proxy for the existence of
/// `lim_{p→1⁺} (p−1) Π ‖a_m‖_∞ᵖ ‖β_m‖_{ℓᵖ}ᵖ`. Not a proof of the limit.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypothesisReport {
    pub p_grid: Vec<f64>,
    pub h_values: Vec<f64>,
    /// The last three values changed by less than
    /// [`STABILIZATION_TOL`]` · max |h|` between neighbours.
    pub stabilized: bool,
    pub tail_corrected: bool,
}

pub fn hypothesis_check(
    symbols: &[SeparableSymbol],
    p_grid: &[f64],
    cutoff: usize,
) -> Result<HypothesisReport> {
    check_grid(p_grid)?;
    if symbols.is_empty() {
        return Err(invalid!("need at least one factor"));
    }
    let factors = symbols
        .iter()
        .map(|s| FactorSpectrum::new(s, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let values = grid_values(&factors, p_grid);
    let h = values.h;
    let scale = h.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let n = h.len();
    let stabilized = scale.is_finite()
        && h[n - 3..]
            .windows(2)
            .all(|w| (w[1] - w[0]).abs() < STABILIZATION_TOL * scale);
    Ok(HypothesisReport {
        p_grid: p_grid.to_vec(),
        h_values: h,
        stabilized,
        tail_corrected: values.tail_corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_plus_two_cos() -> BTreeMap<i64, C64> {
        let mut a = BTreeMap::new();
        a.insert(0, C64::new(2.0, 0.0));
        a.insert(1, C64::new(1.0, 0.0));
        a.insert(-1, C64::new(1.0, 0.0));
        a
    }

    #[test]
    fn diagonal_assembly() {
        let s = SeparableSymbol::constant(1.0, Multiplier::inv_sqrt_quadratic()).unwrap();
        let m = assemble_truncated_matrix(&s, 2).unwrap();
        let expected = [
            5f64.powf(-0.5),
            0.5f64.sqrt(),
            1.0,
            0.5f64.sqrt(),
            5f64.powf(-0.5),
        ];
        for r in 0..5 {
            for c in 0..5 {
                let want = if r == c { expected[r] } else { 0.0 };
                assert!((m[(r, c)].re - want).abs() < 1e-15 && m[(r, c)].im == 0.0);
            }
        }
    }

    #[test]
    fn tridiagonal_assembly() {
        let s = SeparableSymbol::new(two_plus_two_cos(), Multiplier::Custom(Arc::new(|_| 1.0)))
            .unwrap();
        assert!((s.a_sup() - 4.0).abs() < 1e-12);
        let m = assemble_truncated_matrix(&s, 1).unwrap();
        let want = [[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m[(r, c)], C64::new(want[r][c], 0.0));
            }
        }
        assert!(assemble_truncated_matrix(&s, 0).is_err());
        assert!(FactorSpectrum::new(&s, MAX_DENSE_CUTOFF + 1).is_err());
    }

    #[test]
    fn rank_one_trace_power() {
        let mut b = BTreeMap::new();
        b.insert(0, 5.0);
        let s = SeparableSymbol::constant(1.0, Multiplier::Finite(b)).unwrap();
        assert!((trace_power(&s, 3.0, 4).unwrap() - 125.0).abs() < 1e-12);
        assert!(trace_power(&s, 1.0, 4).is_err());
    }

    #[test]
    fn rejects_invalid_a() {
        let mut a = BTreeMap::new();
        a.insert(1, C64::new(1.0, 0.0));
        assert!(SeparableSymbol::new(a.clone(), Multiplier::inv_sqrt_quadratic()).is_err());
        a.insert(-1, C64::new(1.0, 0.0));
        // 2cos x changes sign.
        assert!(SeparableSymbol::new(a, Multiplier::inv_sqrt_quadratic()).is_err());
    }

    #[test]
    fn indefinite_matrix_violates_positivity() {
        // a ≥ 0 but β oscillating makes the Hermitian part indefinite.
        let s = SeparableSymbol::new(
            two_plus_two_cos(),
            Multiplier::Custom(Arc::new(|j| if j % 2 == 0 { 1.0 } else { 1e-3 })),
        )
        .unwrap();
        assert!(matches!(
            trace_power(&s, 2.0, 8),
            Err(Error::PositivityViolation { .. })
        ));
    }

    #[test]
    fn tail_matches_direct_summation() {
        // 2 Σ_{j>100} (1+j²)^{-1}, direct sum to 10^6 plus 2/10^6 remainder.
        let direct: f64 = (101..=1_000_000)
            .map(|j| 1.0 / (1.0 + (j as f64).powi(2)))
            .sum::<f64>()
            * 2.0
            + 2.0 / 1_000_000.5;
        let tail = inv_power_tail(1.0, 100);
        assert!(
            ((tail - direct) / direct).abs() < 1e-10,
            "{tail} vs {direct}"
        );
    }

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[1.5, 1.25]).is_err());
        assert!(check_grid(&[1.5, 1.5, 1.25]).is_err());
        assert!(check_grid(&[1.5, 1.25, 1.0]).is_err());
        assert!(check_grid(&geometric_grid(1.5, 4).unwrap()).is_ok());
        assert_eq!(geometric_grid(1.5, 3).unwrap(), vec![1.5, 1.25, 1.125]);
    }
}
