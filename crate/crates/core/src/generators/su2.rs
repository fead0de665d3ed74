use alloc::string::String;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};
use crate::spectral::{schatten_norm, SchattenEstimate, TruncationPolicy};
use crate::{MatrixSymbol, Partition, C64};

/// Display form of the SU(2) weight `ℓ = t/2`.
pub fn su2_weight_label(t: usize) -> String {
    if t.is_multiple_of(2) {
        alloc::format!("{}", t / 2)
    } else {
        alloc::format!("{t}/2")
    }
}

/// Scalar symbol `(1 + ℓ(ℓ+1))^{-α/2}` of `(I - Δ_{SU(2)})^{-α/2}`.
///
/// Weights `ℓ ∈ ½ℕ₀` are enumerated by `t = 2ℓ`. Each block has dimension 1
/// and multiplicity `(2ℓ+1)² = (t+1)²`, the number of times the eigenvalue
/// occurs in the full operator.
pub fn su2_laplacian_power_symbol(alpha: f64) -> Result<MatrixSymbol> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid!("alpha must be positive, got {alpha}"));
    }
    let partition = Partition::uniform(1, None)?.with_label(su2_weight_label);
    Ok(MatrixSymbol::scalar(partition, move |t| {
        let ell = t as f64 / 2.0;
        C64::new((1.0 + ell * (ell + 1.0)).powf(-alpha / 2.0), 0.0)
    })
    .with_multiplicity_fn(|t| ((t + 1) * (t + 1)) as u64))
}

/// Schatten norm of `(I-Δ)^{-α/2} ⊗ (I-Δ)^{-β/2}` on `SU(2) × SU(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Su2TensorNorm {
    pub estimate: SchattenEstimate,
    pub alpha_factor: SchattenEstimate,
    pub beta_factor: SchattenEstimate,
    /// `αp > 3` and `βp > 3`, the regime where both series converge.
    pub hypothesis_holds: bool,
}

pub fn su2_tensor_norm(
    alpha: f64,
    beta: f64,
    p: f64,
    t: &TruncationPolicy,
) -> Result<Su2TensorNorm> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid!("p must be positive, got {p}"));
    }
    let a = schatten_norm(&su2_laplacian_power_symbol(alpha)?, p, t)?;
    let b = schatten_norm(&su2_laplacian_power_symbol(beta)?, p, t)?;
    let converged = a.converged && b.converged;
    let estimate = SchattenEstimate {
        value: a.value * b.value,
        p,
        blocks_used: a.blocks_used * b.blocks_used,
        last_increment: a.last_increment.max(b.last_increment),
        converged,
        limit: if converged {
            a.limit.zip(b.limit).map(|(x, y)| x * y)
        } else {
            None
        },
        stop: if converged {
            a.stop
        } else {
            crate::StopReason::Budget
        },
    };
    Ok(Su2TensorNorm {
        estimate,
        alpha_factor: a,
        beta_factor: b,
        hypothesis_holds: alpha * p > 3.0 && beta * p > 3.0,
    })
}
