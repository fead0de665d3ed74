//! Singular values per block and truncated Schatten functionals.
//!
//! Infinite series are summed block by block in ascending index order, so the
//! result does not depend on how blocks were produced. See
//! [`TruncationPolicy`] for the stopping rule.

use alloc::vec::Vec;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::accel::{linear_fit, SeriesMonitor};
use nalgebra::SVD;

use crate::error::{invalid, Error, Result};
use crate::symbol::MatrixSymbol;
use crate::{CMatrix, C64};

pub use crate::accel::StopReason;

/// When to stop summing an infinite block series.
///
/// Blocks `0..=ell_max` are the budget. Summation stops early once
/// `min_blocks` consecutive blocks change the partial sum by a relative
/// amount `≤ tail_tol`, or once `min_blocks` consecutive Levin-accelerated
/// limits (at least two) agree to that tolerance. `tail_tol = 0` disables early stopping and sums the whole budget.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruncationPolicy {
    pub ell_max: usize,
    pub tail_tol: f64,
    pub min_blocks: usize,
}

impl TruncationPolicy {
    pub fn new(ell_max: usize, tail_tol: f64, min_blocks: usize) -> Result<Self> {
        let t = Self {
            ell_max,
            tail_tol,
            min_blocks,
        };
        t.validate()?;
        Ok(t)
    }

    /// Sum every block up to `ell_max` without early stopping.
    pub fn exhaustive(ell_max: usize) -> Self {
        Self {
            ell_max,
            tail_tol: 0.0,
            min_blocks: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_blocks == 0 || self.ell_max < self.min_blocks {
            return Err(invalid!(
                "need ell_max >= min_blocks >= 1 (ell_max {}, min_blocks {})",
                self.ell_max,
                self.min_blocks
            ));
        }
        if !(self.tail_tol >= 0.0) {
            return Err(invalid!(
                "tail_tol must be nonnegative, got {}",
                self.tail_tol
            ));
        }
        Ok(())
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            ell_max: 400,
            tail_tol: 1e-8,
            min_blocks: 3,
        }
    }
}

/// Truncated Schatten functional with its stopping metadata.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchattenEstimate {
    /// `(Σ_{ℓ≤L} mult(ℓ) Σ_k s_k(σ(ℓ))^p)^{1/p}` over the blocks actually used.
    pub value: f64,
    pub p: f64,
    pub blocks_used: usize,
    /// Relative size of the last change that decided the stopping rule.
    pub last_increment: f64,
    pub converged: bool,
    /// Estimate of the untruncated value: the Levin limit when that route
    /// stopped the series, the partial value for the other converged cases.
    #[cfg_attr(
        feature = "serde",
        serde(skip_serializing_if = "Option::is_none", default)
    )]
    pub limit: Option<f64>,
    pub stop: StopReason,
}

/// Per-block singular values, descending, each block weighted by its
/// multiplicity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularSpectrum {
    pub blocks: Vec<SpectrumBlock>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumBlock {
    pub index: usize,
    pub multiplicity: u64,
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    /// All singular values with multiplicities expanded, sorted descending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| {
                b.values
                    .iter()
                    .flat_map(move |&v| core::iter::repeat_n(v, b.multiplicity as usize))
            })
            .collect();
        all.sort_by(|a, b| b.total_cmp(a));
        all
    }
}

/// Singular values of a square complex matrix, descending.
pub fn singular_values_block(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| z.re.is_nan() || z.im.is_nan()) {
        return Err(Error::NotANumber { block: 0 });
    }
    let mut s: Vec<f64> = if m.nrows() == 0 {
        Vec::new()
    } else {
        let n = m.nrows();
        SVD::try_new(
            m.clone(),
            false,
            false,
            f64::EPSILON,
            crate::max_iterations(n),
        )
        .ok_or(Error::NoConvergence("singular value decomposition", n))?
        .singular_values
        .iter()
        .copied()
        .collect()
    };
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Singular values of `σ(ℓ)` using the structure hint where possible.
pub fn block_singular_values(s: &MatrixSymbol, ell: usize) -> Result<Vec<f64>> {
    let nan = |v: &[f64]| v.iter().any(|x| x.is_nan());
    let mut values = if let Some(c) = s.scalar_value(ell) {
        alloc::vec![c.norm(); s.partition().dim(ell)?]
    } else if let Some(diag) = s.diagonal_entries(ell)? {
        diag.iter().map(|z| z.norm()).collect()
    } else {
        return singular_values_block(&s.block(ell)?).map_err(|e| match e {
            Error::NotANumber { .. } => Error::NotANumber { block: ell },
            other => other,
        });
    };
    if nan(&values) {
        return Err(Error::NotANumber { block: ell });
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Spectrum of blocks `0..=ell_max` (clipped to the partition).
pub fn singular_spectrum(s: &MatrixSymbol, ell_max: usize) -> Result<SingularSpectrum> {
    let last = last_block(s, ell_max)?;
    let blocks = (0..=last)
        .map(|ell| {
            Ok(SpectrumBlock {
                index: ell,
                multiplicity: s.multiplicity(ell),
                values: block_singular_values(s, ell)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SingularSpectrum { blocks })
}

fn last_block(s: &MatrixSymbol, ell_max: usize) -> Result<usize> {
    match s.partition().len() {
        Some(0) => Err(invalid!("symbol has no blocks")),
        Some(n) => Ok(ell_max.min(n - 1)),
        None => Ok(ell_max),
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0) || p.is_nan() {
        return Err(invalid!("Schatten exponent must be positive, got {p}"));
    }
    Ok(())
}

/// `mult(ℓ) · Σ_k s_k(σ(ℓ))^p`.
pub(crate) fn block_power_sum(s: &MatrixSymbol, ell: usize, p: f64) -> Result<f64> {
    let sv = block_singular_values(s, ell)?;
    let sum: f64 = sv.iter().map(|v| v.powf(p)).sum();
    Ok(s.multiplicity(ell) as f64 * sum)
}

/// Running record of `Σ_{ℓ≤L} mult(ℓ)‖σ(ℓ)‖_{S_p}^p`, exposed for tables.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    pub p: f64,
    /// Block contributions `mult(ℓ)‖σ(ℓ)‖_{S_p}^p`, ascending ℓ.
    pub terms: Vec<f64>,
    /// Cumulative sums of `terms`.
    pub partial_sums: Vec<f64>,
    pub estimate: SchattenEstimate,
}

/// `‖s‖_{S_p}` truncated by `t`. For `0 < p < 1` this is the quasi-norm.
pub fn schatten_norm(s: &MatrixSymbol, p: f64, t: &TruncationPolicy) -> Result<SchattenEstimate> {
    schatten_series(s, p, t).map(|series| series.estimate)
}

/// Same as [`schatten_norm`] but keeps every term and partial sum.
pub fn schatten_series(s: &MatrixSymbol, p: f64, t: &TruncationPolicy) -> Result<PowerSeries> {
    check_p(p)?;
    t.validate()?;
    let last = last_block(s, t.ell_max)?;
    let mut monitor = SeriesMonitor::new(t.tail_tol, t.min_blocks);
    let mut stop = None;
    for ell in 0..=last {
        let term = block_power_sum(s, ell, p)?;
        if term.is_nan() {
            return Err(Error::NotANumber { block: ell });
        }
        if let Some(reason) = monitor.push(term) {
            stop = Some(reason);
            break;
        }
    }
    let exhausted = s.partition().len().is_some_and(|n| monitor.len() == n);
    let stop = match stop {
        Some(r) => r,
        None if exhausted => StopReason::Exhausted,
        None => StopReason::Budget,
    };
    let root = |x: f64| x.powf(1.0 / p);
    let value = root(monitor.sum());
    let (last_increment, limit) = match stop {
        StopReason::Extrapolation => (
            monitor.last_extrapolation_change(),
            monitor.levin_estimate().map(root),
        ),
        StopReason::Exhausted => (0.0, Some(value)),
        StopReason::Budget => (monitor.last_increment(), None),
        _ => (monitor.last_increment(), Some(value)),
    };
    Ok(PowerSeries {
        p,
        terms: monitor.terms().to_vec(),
        partial_sums: monitor.partial_sums().to_vec(),
        estimate: SchattenEstimate {
            value,
            p,
            blocks_used: monitor.len(),
            last_increment,
            converged: stop.converged(),
            limit,
            stop,
        },
    })
}

/// Truncated trace `Σ_{ℓ≤L} mult(ℓ) Tr σ(ℓ)`, summed over the same blocks as
/// the absolute (`p = 1`) series that decides convergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEstimate {
    pub value: C64,
    /// Levin-accelerated trace when the absolute series stopped by
    /// extrapolation and the trace terms allowed it; `value` otherwise.
    pub limit: Option<C64>,
    pub blocks_used: usize,
    pub converged: bool,
    pub absolute: SchattenEstimate,
}

pub fn trace(s: &MatrixSymbol, t: &TruncationPolicy) -> Result<TraceEstimate> {
    let absolute = schatten_norm(s, 1.0, t)?;
    let mut re = Vec::with_capacity(absolute.blocks_used);
    let mut im = Vec::with_capacity(absolute.blocks_used);
    for ell in 0..absolute.blocks_used {
        let m = s.multiplicity(ell) as f64;
        let tr = match s.diagonal_entries(ell)? {
            Some(diag) => diag.iter().sum::<C64>(),
            None => s.block(ell)?.trace(),
        };
        re.push(m * tr.re);
        im.push(m * tr.im);
    }
    let value = C64::new(re.iter().sum(), im.iter().sum());
    let limit = match absolute.stop {
        StopReason::Budget => None,
        StopReason::Extrapolation => Some(C64::new(accelerate(&re), accelerate(&im))),
        _ => Some(value),
    };
    Ok(TraceEstimate {
        value,
        limit,
        blocks_used: absolute.blocks_used,
        converged: absolute.converged,
        absolute,
    })
}

/// Levin limit of a real series over its first `LEVIN_MAX_ORDER + 1` terms,
/// or its plain sum if the transform is not applicable.
fn accelerate(terms: &[f64]) -> f64 {
    let plain: f64 = terms.iter().sum();
    if terms.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    let n = terms.len().min(crate::accel::LEVIN_MAX_ORDER + 1);
    let sums: Vec<f64> = terms[..n]
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    crate::accel::levin_u(&sums, &terms[..n]).unwrap_or(plain)
}

/// `sup_ℓ s_1(σ(ℓ))` over scanned blocks.
///
/// Convergence is a heuristic: it is declared once `min_blocks` consecutive
/// block norms are nonincreasing and raise the running supremum by a relative
/// amount `≤ tail_tol`. A later block could still exceed it.
pub fn operator_norm(s: &MatrixSymbol, t: &TruncationPolicy) -> Result<SchattenEstimate> {
    t.validate()?;
    let last = last_block(s, t.ell_max)?;
    let mut sup: f64 = 0.0;
    let mut prev = f64::INFINITY;
    let mut streak = 0;
    let mut used = 0;
    let mut last_increment = f64::INFINITY;
    let mut stop = None;
    for ell in 0..=last {
        let top = block_singular_values(s, ell)?
            .first()
            .copied()
            .unwrap_or(0.0);
        used += 1;
        let new_sup = sup.max(top);
        last_increment = if new_sup == 0.0 {
            0.0
        } else {
            (new_sup - sup) / new_sup
        };
        sup = new_sup;
        if top <= prev && last_increment <= t.tail_tol {
            streak += 1;
        } else {
            streak = 0;
        }
        prev = top;
        if used >= t.min_blocks && streak >= t.min_blocks {
            stop = Some(StopReason::Monotone);
            break;
        }
    }
    let exhausted = s.partition().len().is_some_and(|n| used == n);
    let stop = match stop {
        Some(r) => r,
        None if exhausted => StopReason::Exhausted,
        None => StopReason::Budget,
    };
    if stop == StopReason::Exhausted {
        last_increment = 0.0;
    }
    Ok(SchattenEstimate {
        value: sup,
        p: f64::INFINITY,
        blocks_used: used,
        last_increment,
        converged: stop.converged(),
        limit: stop.converged().then_some(sup),
        stop,
    })
}

/// Power-law fit `log λ_m ≈ c + slope · log m` over the tail half of the data.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayFit {
    pub slope: f64,
    /// 1.96 standard errors of the slope.
    pub half_width: f64,
    pub intercept: f64,
    pub points_used: usize,
}

/// Fit the decay exponent of `values` (indexed from `m = 1`), using the
/// points `m > n/2`.
pub fn decay_exponent_fit(values: &[f64]) -> Result<DecayFit> {
    if values.len() < 10 {
        return Err(invalid!(
            "decay fit needs at least 10 values, got {}",
            values.len()
        ));
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0) || !v.is_finite())
    {
        return Err(invalid!(
            "decay fit needs positive finite values; entry {i} is {v}"
        ));
    }
    let start = values.len() / 2;
    let (x, y): (Vec<f64>, Vec<f64>) = values[start..]
        .iter()
        .enumerate()
        .map(|(i, v)| (((start + i + 1) as f64).ln(), v.ln()))
        .unzip();
    let fit = linear_fit(&x, &y).ok_or_else(|| invalid!("degenerate decay fit"))?;
    Ok(DecayFit {
        slope: fit.slope,
        half_width: 1.96 * fit.slope_stderr,
        intercept: fit.intercept,
        points_used: x.len(),
    })
}
