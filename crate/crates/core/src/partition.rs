use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::{CVector, C64};

type DimFn = Arc<dyn Fn(usize) -> usize + Send + Sync>;
type LabelFn = Arc<dyn Fn(usize) -> String + Send + Sync>;

#[derive(Clone)]
enum Dims {
    Explicit(Arc<[usize]>),
    Constant(usize),
    Lazy(DimFn),
}

/// A decomposition `H = ⊕_ℓ H_ℓ` given by the block dimensions `d_ℓ`.
///
/// Partitions are either finite (`len()` is `Some`) or lazily generated over
/// all of `ℕ₀`. Dimension generators must be deterministic.
#[derive(Clone)]
pub struct Partition {
    dims: Dims,
    len: Option<usize>,
    label: Option<LabelFn>,
}

impl Partition {
    /// Finite partition with the given block dimensions.
    pub fn from_dims(dims: Vec<usize>) -> Result<Self> {
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(invalid!("block {pos} has dimension 0"));
        }
        let len = dims.len();
        Ok(Self {
            dims: Dims::Explicit(dims.into()),
            len: Some(len),
            label: None,
        })
    }

    /// Every block has dimension `dim`; `len = None` makes it infinite.
    pub fn uniform(dim: usize, len: Option<usize>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid!("block dimension must be positive"));
        }
        Ok(Self {
            dims: Dims::Constant(dim),
            len,
            label: None,
        })
    }

    /// Lazily generated dimensions. The generator must return `d_ℓ ≥ 1`;
    /// this is checked whenever a dimension is queried through [`Partition::dim`].
    pub fn from_fn<F>(len: Option<usize>, f: F) -> Self
    where
        F: Fn(usize) -> usize + Send + Sync + 'static,
    {
        Self {
            dims: Dims::Lazy(Arc::new(f)),
            len,
            label: None,
        }
    }

    /// Attach a display label per index (e.g. half-integer weights).
    pub fn with_label<F>(mut self, f: F) -> Self
    where
        F: Fn(usize) -> String + Send + Sync + 'static,
    {
        self.label = Some(Arc::new(f));
        self
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.len.is_none_or(|n| index < n)
    }

    /// Dimension `d_ℓ` of block `index`.
    pub fn dim(&self, index: usize) -> Result<usize> {
        if let Some(len) = self.len {
            if index >= len {
                return Err(Error::OutOfRange { index, len });
            }
        }
        let d = match &self.dims {
            Dims::Explicit(d) => d[index],
            Dims::Constant(d) => *d,
            Dims::Lazy(f) => f(index),
        };
        if d == 0 {
            return Err(invalid!(
                "partition generator returned dimension 0 at block {index}"
            ));
        }
        Ok(d)
    }

    pub fn label(&self, index: usize) -> String {
        match &self.label {
            Some(f) => f(index),
            None => alloc::format!("{index}"),
        }
    }

    /// Explicit dimension list, if the partition was built from one.
    pub fn explicit_dims(&self) -> Option<&[usize]> {
        match &self.dims {
            Dims::Explicit(d) => Some(d),
            _ => None,
        }
    }

    /// Check that `other` agrees with `self` in length and on the given blocks.
    pub fn check_compatible<I>(&self, other: &Partition, blocks: I) -> Result<()>
    where
        I: IntoIterator<Item = usize>,
    {
        if self.len != other.len {
            return Err(Error::DimensionMismatch(alloc::format!(
                "partition lengths differ ({:?} vs {:?})",
                self.len,
                other.len
            )));
        }
        for ell in blocks {
            let (a, b) = (self.dim(ell)?, other.dim(ell)?);
            if a != b {
                return Err(Error::DimensionMismatch(alloc::format!(
                    "block {ell} has dimension {a} vs {b}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.dims {
            Dims::Explicit(d) => return f.debug_struct("Partition").field("dims", d).finish(),
            Dims::Constant(d) => alloc::format!("constant({d})"),
            Dims::Lazy(_) => String::from("lazy"),
        };
        f.debug_struct("Partition")
            .field("dims", &kind)
            .field("len", &self.len)
            .finish()
    }
}

/// Sparse Fourier coefficients `ℓ ↦ f̂(ℓ) ∈ ℂ^{d_ℓ}`; absent blocks are zero.
#[derive(Clone, Debug)]
pub struct FourierCoefficients {
    partition: Partition,
    blocks: BTreeMap<usize, CVector>,
}

impl FourierCoefficients {
    pub fn zero(partition: Partition) -> Self {
        Self {
            partition,
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_blocks<I>(partition: Partition, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, CVector)>,
    {
        let mut out = Self::zero(partition);
        for (ell, v) in blocks {
            out.insert(ell, v)?;
        }
        Ok(out)
    }

    /// Store block `ell`; its length must equal `d_ℓ`.
    pub fn insert(&mut self, ell: usize, v: CVector) -> Result<()> {
        let d = self.partition.dim(ell)?;
        if v.len() != d {
            return Err(Error::DimensionMismatch(alloc::format!(
                "block {ell} expects length {d}, got {}",
                v.len()
            )));
        }
        self.blocks.insert(ell, v);
        Ok(())
    }

    /// Basis vector `e_ℓ^k`.
    pub fn basis(partition: Partition, ell: usize, k: usize) -> Result<Self> {
        let d = partition.dim(ell)?;
        if k >= d {
            return Err(Error::OutOfRange { index: k, len: d });
        }
        let mut v = CVector::zeros(d);
        v[k] = C64::new(1.0, 0.0);
        Self::from_blocks(partition, [(ell, v)])
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn block(&self, ell: usize) -> Option<&CVector> {
        self.blocks.get(&ell)
    }

    /// Stored blocks in ascending index order.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, &CVector)> {
        self.blocks.iter().map(|(&k, v)| (k, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.keys().copied()
    }

    /// `Σ_ℓ Σ_k |f̂(ℓ,k)|²` in ascending block order.
    pub fn norm_squared(&self) -> f64 {
        self.blocks
            .values()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Largest `‖f̂(ℓ)‖` over stored blocks other than `keep`.
    pub(crate) fn max_norm_outside(&self, keep: usize) -> f64 {
        self.blocks
            .iter()
            .filter(|(&k, _)| k != keep)
            .map(|(_, v)| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}
