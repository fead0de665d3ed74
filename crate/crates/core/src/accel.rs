//! Series bookkeeping: the stopping rule used by every truncated Schatten
//! functional, Levin u-transform acceleration, and small least-squares fits.

use alloc::vec::Vec;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

/// Highest Levin order attempted. Beyond this the alternating binomial sums
/// lose more digits to cancellation than acceleration gains.
pub const LEVIN_MAX_ORDER: usize = 20;

/// Levin u-transform `L_k^{(0)}` of order `k = partial_sums.len() - 1`
/// with `β = 1` and remainder estimates `ω_n = (n + 1) a_n`.
///
/// Returns `None` if any term is zero or not finite, or the denominator
/// vanishes.
pub fn levin_u(partial_sums: &[f64], terms: &[f64]) -> Option<f64> {
    debug_assert_eq!(partial_sums.len(), terms.len());
    let k = partial_sums.len().checked_sub(1)?;
    let beta = 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let a = terms[j];
        if a == 0.0 || !a.is_finite() {
            return None;
        }
        let omega = (j as f64 + beta) * a;
        let ratio = ((beta + j as f64) / (beta + k as f64)).powi(k as i32 - 1);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom * ratio / omega;
        num += c * partial_sums[j];
        den += c;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let value = num / den;
    (den != 0.0 && value.is_finite()).then_some(value)
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Standard error of the slope (0 for fewer than three points).
    pub slope_stderr: f64,
    /// Root-mean-square residual.
    pub residual_rms: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let slope_stderr = if n > 2 {
        (ss_res / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LinearFit {
        intercept,
        slope,
        slope_stderr,
        residual_rms: (ss_res / nf).sqrt(),
    })
}

/// Why a monitored series stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopReason {
    /// Raw relative increments stayed below tolerance.
    Increment,
    /// Successive Levin estimates of the limit agreed to tolerance.
    Extrapolation,
    /// Heuristic for suprema: block values stopped growing.
    Monotone,
    /// The partition ran out of blocks; the sum is exact.
    Exhausted,
    /// Block budget spent without meeting the stopping rule.
    Budget,
}

impl StopReason {
    pub fn converged(self) -> bool {
        !matches!(self, StopReason::Budget)
    }
}

/// Streaming monitor for a series of nonnegative terms.
///
/// Convergence is declared when `min_blocks` consecutive blocks add a
/// relative increment `≤ tol` to the partial sum, or when `min_blocks`
/// consecutive Levin estimates of the limit (at least two) agree to a
/// relative `tol`. The Levin route is only trusted while every term is
/// positive, the tail decays faster than `n^{-1}` on a log-log fit, and the
/// estimate does not undershoot the partial sum.
#[derive(Clone, Debug)]
pub(crate) struct SeriesMonitor {
    tol: f64,
    min_blocks: usize,
    sums: Vec<f64>,
    terms: Vec<f64>,
    raw_streak: usize,
    extrap_streak: usize,
    last_raw: f64,
    last_extrap: f64,
    levin: Option<f64>,
    positive: bool,
}

impl SeriesMonitor {
    pub fn new(tol: f64, min_blocks: usize) -> Self {
        Self {
            tol,
            min_blocks,
            sums: Vec::new(),
            terms: Vec::new(),
            raw_streak: 0,
            extrap_streak: 0,
            last_raw: f64::INFINITY,
            last_extrap: f64::INFINITY,
            levin: None,
            positive: true,
        }
    }

    pub fn sum(&self) -> f64 {
        self.sums.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    pub fn last_increment(&self) -> f64 {
        self.last_raw
    }

    pub fn last_extrapolation_change(&self) -> f64 {
        self.last_extrap
    }

    pub fn levin_estimate(&self) -> Option<f64> {
        self.levin
    }

    /// Add a term and report whether the stopping rule has fired.
    pub fn push(&mut self, term: f64) -> Option<StopReason> {
        let prev = self.sum();
        let sum = prev + term;
        self.terms.push(term);
        self.sums.push(sum);
        self.positive &= term > 0.0;

        self.last_raw = if term == 0.0 { 0.0 } else { term / sum };
        if self.last_raw <= self.tol {
            self.raw_streak += 1;
        } else {
            self.raw_streak = 0;
        }

        self.update_levin(sum);

        if self.tol == 0.0 || self.len() < self.min_blocks {
            return None;
        }
        if self.raw_streak >= self.min_blocks {
            Some(StopReason::Increment)
        } else if self.extrap_streak >= self.min_blocks.max(2) {
            Some(StopReason::Extrapolation)
        } else {
            None
        }
    }

    fn update_levin(&mut self, sum: f64) {
        let order = self.len() - 1;
        if !self.positive {
            self.levin = None;
            self.extrap_streak = 0;
            return;
        }
        if order > LEVIN_MAX_ORDER {
            // Estimate stays frozen at the highest trusted order.
            self.extrap_streak = 0;
            return;
        }
        if order == 0 {
            return;
        }
        let trusted = levin_u(&self.sums, &self.terms)
            .filter(|&e| e >= sum * (1.0 - 1e-12) && self.tail_decays());
        match (trusted, self.levin) {
            (Some(now), Some(before)) => {
                self.last_extrap = (now - before).abs() / now.abs();
                if self.last_extrap <= self.tol {
                    self.extrap_streak += 1;
                } else {
                    self.extrap_streak = 1;
                }
            }
            (Some(_), None) => self.extrap_streak = 1,
            (None, _) => self.extrap_streak = 0,
        }
        self.levin = trusted;
    }

    /// Log-log slope of the trailing half of the terms is below `-1`.
    fn tail_decays(&self) -> bool {
        let n = self.terms.len();
        if n < 6 {
            return false;
        }
        let start = n / 2;
        let (x, y): (Vec<f64>, Vec<f64>) = (start..n)
            .map(|i| (((i + 1) as f64).ln(), self.terms[i].ln()))
            .unzip();
        linear_fit(&x, &y).is_some_and(|fit| fit.slope < -1.0)
    }
}
