//! Tensor products of partitions and symbols.
//!
//! The symbol of `A₁ ⊗ … ⊗ Aₙ` at the multi-index `(j₁, …, jₙ)` is the
//! Kronecker product `σ₁(j₁) ⊗ … ⊗ σₙ(jₙ)`. Norms and traces are evaluated
//! in product form; multi-indices are never flattened into one sequence.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::spectral::{
    operator_norm, schatten_norm, trace, SchattenEstimate, StopReason, TruncationPolicy,
};
use crate::{CMatrix, MatrixSymbol, Partition, C64};

/// Kronecker product with row pairs `(r, s)` and column pairs `(p, q)`:
/// entry `((r,s),(p,q))` is `a[r,p] · b[s,q]`, pair `(r,s)` at `r·rows(b) + s`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block index `(j₁, …, jₙ)` in a product partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// `⊗ H_i` partitioned by `H_{1,j₁} ⊗ … ⊗ H_{n,jₙ}`.
#[derive(Clone, Debug)]
pub struct ProductPartition {
    factors: Vec<Partition>,
}

impl ProductPartition {
    pub fn new(factors: Vec<Partition>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(invalid!("a product partition needs at least two factors"));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Partition] {
        &self.factors
    }

    /// `Π_i d_{i, jᵢ}`.
    pub fn dim(&self, index: &MultiIndex) -> Result<usize> {
        self.check_arity(index)?;
        self.factors
            .iter()
            .zip(&index.0)
            .try_fold(1usize, |acc, (p, &j)| Ok(acc * p.dim(j)?))
    }

    fn check_arity(&self, index: &MultiIndex) -> Result<()> {
        if index.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "multi-index of length {} for {} factors",
                index.len(),
                self.factors.len()
            )));
        }
        Ok(())
    }
}

/// Symbol of a tensor product of invariant operators.
#[derive(Clone, Debug)]
pub struct TensorSymbol {
    factors: Vec<MatrixSymbol>,
    partition: ProductPartition,
}

/// Tensor product of at least two symbols.
pub fn tensor_symbols(factors: Vec<MatrixSymbol>) -> Result<TensorSymbol> {
    let partition = ProductPartition::new(factors.iter().map(|f| f.partition().clone()).collect())?;
    Ok(TensorSymbol { factors, partition })
}

impl TensorSymbol {
    pub fn factors(&self) -> &[MatrixSymbol] {
        &self.factors
    }

    pub fn partition(&self) -> &ProductPartition {
        &self.partition
    }

    /// `σ₁(j₁) ⊗ … ⊗ σₙ(jₙ)`, folded from the left.
    pub fn block(&self, index: &MultiIndex) -> Result<CMatrix> {
        self.partition.check_arity(index)?;
        let mut it = self.factors.iter().zip(&index.0);
        let (f0, &j0) = it.next().expect("at least two factors");
        it.try_fold(f0.block(j0)?, |acc, (f, &j)| Ok(kron(&acc, &f.block(j)?)))
    }

    /// Product of the factor multiplicities.
    pub fn multiplicity(&self, index: &MultiIndex) -> Result<u64> {
        self.partition.check_arity(index)?;
        Ok(self
            .factors
            .iter()
            .zip(&index.0)
            .map(|(f, &j)| f.multiplicity(j))
            .product())
    }

    /// `c_{j₁} ⋯ c_{jₙ}` when every factor is scalar.
    pub fn scalar_value(&self, index: &MultiIndex) -> Option<C64> {
        if index.len() != self.factors.len() {
            return None;
        }
        self.factors
            .iter()
            .zip(&index.0)
            .map(|(f, &j)| f.scalar_value(j))
            .product()
    }
}

/// Combine factor estimates into the estimate for the tensor product.
fn combine(estimates: &[SchattenEstimate], p: f64) -> SchattenEstimate {
    let value = estimates.iter().map(|e| e.value).product();
    let converged = estimates.iter().all(|e| e.converged);
    let limit = if converged {
        estimates.iter().map(|e| e.limit).product()
    } else {
        None
    };
    let stop = estimates
        .iter()
        .map(|e| e.stop)
        .find(|s| *s == StopReason::Budget)
        .or_else(|| {
            estimates
                .iter()
                .map(|e| e.stop)
                .find(|s| *s != StopReason::Exhausted)
        })
        .unwrap_or(StopReason::Exhausted);
    SchattenEstimate {
        value,
        p,
        blocks_used: estimates.iter().map(|e| e.blocks_used).product(),
        last_increment: estimates
            .iter()
            .map(|e| e.last_increment)
            .fold(0.0, f64::max),
        converged,
        limit,
        stop,
    }
}

/// `‖⊗Aᵢ‖_{S_p} = Π ‖Aᵢ‖_{S_p}`, each factor truncated by `t`.
///
/// `blocks_used` counts multi-indices in the summed rectangle.
pub fn tensor_schatten_norm(
    ts: &TensorSymbol,
    p: f64,
    t: &TruncationPolicy,
) -> Result<SchattenEstimate> {
    let per_factor = tensor_factor_norms(ts, p, t)?;
    Ok(combine(&per_factor, p))
}

/// Factor estimates behind [`tensor_schatten_norm`].
pub fn tensor_factor_norms(
    ts: &TensorSymbol,
    p: f64,
    t: &TruncationPolicy,
) -> Result<Vec<SchattenEstimate>> {
    ts.factors.iter().map(|f| schatten_norm(f, p, t)).collect()
}

/// `‖⊗Aᵢ‖_{op} = Π ‖Aᵢ‖_{op}`.
pub fn tensor_operator_norm(ts: &TensorSymbol, t: &TruncationPolicy) -> Result<SchattenEstimate> {
    let per_factor = ts
        .factors
        .iter()
        .map(|f| operator_norm(f, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(&per_factor, f64::INFINITY))
}

/// `Tr(⊗Aᵢ) = Π Tr(Aᵢ)` with the combined convergence flag.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorTrace {
    pub value: C64,
    pub limit: Option<C64>,
    pub converged: bool,
    pub factors: Vec<crate::TraceEstimate>,
}

pub fn tensor_trace(ts: &TensorSymbol, t: &TruncationPolicy) -> Result<TensorTrace> {
    let factors = ts
        .factors
        .iter()
        .map(|f| trace(f, t))
        .collect::<Result<Vec<_>>>()?;
    let converged = factors.iter().all(|f| f.converged);
    Ok(TensorTrace {
        value: factors.iter().map(|f| f.value).product(),
        limit: if converged {
            factors.iter().map(|f| f.limit).product()
        } else {
            None
        },
        converged,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CVector;
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(v.len(), v.iter().map(|&x| c(x))))
    }

    #[test]
    fn identity_factor_gives_block_diagonal() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let k = kron(&CMatrix::identity(2, 2), &m);
        let mut expected = CMatrix::zeros(4, 4);
        expected.view_mut((0, 0), (2, 2)).copy_from(&m);
        expected.view_mut((2, 2), (2, 2)).copy_from(&m);
        assert_eq!(k, expected);
    }

    #[test]
    fn index_convention_matches_pairing() {
        let a = CMatrix::from_fn(2, 3, |r, p| c((10 * r + p) as f64 + 1.0));
        let b = CMatrix::from_fn(3, 2, |s, q| c((10 * s + q) as f64 + 0.5));
        let k = kron(&a, &b);
        for r in 0..2 {
            for s in 0..3 {
                for p in 0..3 {
                    for q in 0..2 {
                        assert_eq!(k[(r * 3 + s, p * 2 + q)], a[(r, p)] * b[(s, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn scalars_multiply() {
        let k = kron(
            &CMatrix::from_element(1, 1, c(2.0)),
            &CMatrix::from_element(1, 1, c(3.0)),
        );
        assert_eq!(k[(0, 0)], c(6.0));
    }

    #[test]
    fn tensor_of_diagonals() {
        let a = MatrixSymbol::from_blocks(vec![diag(&[1.0, 2.0])]).unwrap();
        let b = MatrixSymbol::from_blocks(vec![diag(&[3.0, 4.0])]).unwrap();
        let ts = tensor_symbols(vec![a, b]).unwrap();
        let t = TruncationPolicy::exhaustive(4);
        let n1 = tensor_schatten_norm(&ts, 1.0, &t).unwrap();
        assert!((n1.value - 21.0).abs() < 1e-12);
        let tr = tensor_trace(&ts, &t).unwrap();
        assert!((tr.value - c(21.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_tensor_norm() {
        let a = MatrixSymbol::from_blocks(vec![CMatrix::identity(2, 2)]).unwrap();
        let b = MatrixSymbol::from_blocks(vec![CMatrix::identity(3, 3)]).unwrap();
        let ts = tensor_symbols(vec![a, b]).unwrap();
        let est = tensor_schatten_norm(&ts, 2.0, &TruncationPolicy::exhaustive(1)).unwrap();
        assert!((est.value - 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(
            ts.block(&MultiIndex(vec![0, 0])).unwrap(),
            CMatrix::identity(6, 6)
        );
    }

    #[test]
    fn zero_trace_factor_absorbs() {
        let a = MatrixSymbol::from_blocks(vec![diag(&[1.0, -1.0])]).unwrap();
        let b = MatrixSymbol::from_blocks(vec![diag(&[3.0, 4.0])]).unwrap();
        let ts = tensor_symbols(vec![a, b]).unwrap();
        assert_eq!(
            tensor_trace(&ts, &TruncationPolicy::exhaustive(1))
                .unwrap()
                .value,
            c(0.0)
        );
    }

    #[test]
    fn scalar_factors_give_scalar_products() {
        let p = Partition::uniform(1, None).unwrap();
        let a = MatrixSymbol::scalar(p.clone(), |j| c(1.0 + j as f64));
        let b = MatrixSymbol::scalar(p, |k| c(0.5 * k as f64));
        let ts = tensor_symbols(vec![a, b]).unwrap();
        let idx = MultiIndex(vec![2, 3]);
        assert_eq!(ts.scalar_value(&idx), Some(c(4.5)));
        assert_eq!(ts.block(&idx).unwrap()[(0, 0)], c(4.5));
    }

    #[test]
    fn needs_two_factors_and_matching_arity() {
        let a = MatrixSymbol::from_blocks(vec![diag(&[1.0])]).unwrap();
        assert!(tensor_symbols(vec![a.clone()]).is_err());
        let ts = tensor_symbols(vec![a.clone(), a]).unwrap();
        assert!(ts.block(&MultiIndex(vec![0])).is_err());
        assert_eq!(ts.partition().dim(&MultiIndex(vec![0, 0])).unwrap(), 1);
    }
}
