use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::{MatrixSymbol, Partition, C64};

/// Diagonal symbol of `I + H_γ` on SO(3), with blocks of dimension `2ℓ+1`:
/// `σ(ℓ)_{mm} = 1 + m − γm² + γℓ(ℓ+1)` for `m = −ℓ, …, ℓ`.
pub fn so3_schrodinger_symbol(gamma: f64) -> Result<MatrixSymbol> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid!("gamma must satisfy 0 < gamma < inf, got {gamma}"));
    }
    let partition = Partition::from_fn(None, |ell| 2 * ell + 1);
    Ok(MatrixSymbol::diagonal(partition, move |ell| {
        let l = ell as f64;
        (-(ell as i64)..=ell as i64)
            .map(|m| {
                let m = m as f64;
                C64::new(1.0 + m - gamma * m * m + gamma * l * (l + 1.0), 0.0)
            })
            .collect::<Vec<_>>()
    }))
}
