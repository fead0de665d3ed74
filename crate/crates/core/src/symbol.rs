use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::partition::{FourierCoefficients, Partition};
use crate::{CMatrix, CVector, C64, INVARIANCE_TOL, UNITARITY_TOL};

/// Structure of every block of a symbol, used for fast paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Structure {
    General,
    Diagonal,
    Scalar,
}

type DenseFn = Arc<dyn Fn(usize) -> CMatrix + Send + Sync>;
type DiagFn = Arc<dyn Fn(usize) -> Vec<C64> + Send + Sync>;
type ScalarFn = Arc<dyn Fn(usize) -> C64 + Send + Sync>;
type MultFn = Arc<dyn Fn(usize) -> u64 + Send + Sync>;

#[derive(Clone)]
enum Blocks {
    Explicit(Arc<[CMatrix]>),
    Dense(DenseFn),
    Diagonal(DiagFn),
    Scalar(ScalarFn),
}

#[derive(Clone)]
enum Multiplicity {
    One,
    Explicit(Arc<[u64]>),
    Lazy(MultFn),
}

/// Matrix symbol `ℓ ↦ σ(ℓ)` of an invariant operator.
///
/// Blocks are produced on demand. A block may stand for several identical
/// copies inside the operator; `multiplicity(ℓ)` counts them.
#[derive(Clone)]
pub struct MatrixSymbol {
    partition: Partition,
    blocks: Blocks,
    structure: Structure,
    multiplicity: Multiplicity,
}

impl MatrixSymbol {
    /// Symbol with explicitly stored blocks; the partition is read off the
    /// block shapes. The structure hint is detected from the entries.
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        let mut dims = Vec::with_capacity(blocks.len());
        for (ell, b) in blocks.iter().enumerate() {
            if !b.is_square() {
                return Err(Error::DimensionMismatch(alloc::format!(
                    "block {ell} is {}x{}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            dims.push(b.nrows());
        }
        let structure = detect_structure(&blocks);
        Ok(Self {
            partition: Partition::from_dims(dims)?,
            blocks: Blocks::Explicit(blocks.into()),
            structure,
            multiplicity: Multiplicity::One,
        })
    }

    /// Lazily generated dense blocks. Shapes are checked on every access.
    pub fn from_fn<F>(partition: Partition, f: F) -> Self
    where
        F: Fn(usize) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            partition,
            blocks: Blocks::Dense(Arc::new(f)),
            structure: Structure::General,
            multiplicity: Multiplicity::One,
        }
    }

    /// Diagonal blocks given by their diagonal entries.
    pub fn diagonal<F>(partition: Partition, f: F) -> Self
    where
        F: Fn(usize) -> Vec<C64> + Send + Sync + 'static,
    {
        Self {
            partition,
            blocks: Blocks::Diagonal(Arc::new(f)),
            structure: Structure::Diagonal,
            multiplicity: Multiplicity::One,
        }
    }

    /// Blocks `σ(ℓ) = c_ℓ · I_{d_ℓ}`.
    pub fn scalar<F>(partition: Partition, f: F) -> Self
    where
        F: Fn(usize) -> C64 + Send + Sync + 'static,
    {
        Self {
            partition,
            blocks: Blocks::Scalar(Arc::new(f)),
            structure: Structure::Scalar,
            multiplicity: Multiplicity::One,
        }
    }

    pub fn identity(partition: Partition) -> Self {
        Self::scalar(partition, |_| C64::new(1.0, 0.0))
    }

    pub fn with_multiplicities(mut self, mult: Vec<u64>) -> Result<Self> {
        if let Some(len) = self.partition.len() {
            if mult.len() != len {
                return Err(Error::DimensionMismatch(alloc::format!(
                    "{} multiplicities for {len} blocks",
                    mult.len()
                )));
            }
        }
        if mult.contains(&0) {
            return Err(invalid!("multiplicities must be positive"));
        }
        self.multiplicity = Multiplicity::Explicit(mult.into());
        Ok(self)
    }

    pub fn with_multiplicity_fn<F>(mut self, f: F) -> Self
    where
        F: Fn(usize) -> u64 + Send + Sync + 'static,
    {
        self.multiplicity = Multiplicity::Lazy(Arc::new(f));
        self
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn multiplicity(&self, ell: usize) -> u64 {
        match &self.multiplicity {
            Multiplicity::One => 1,
            Multiplicity::Explicit(m) => m.get(ell).copied().unwrap_or(1),
            Multiplicity::Lazy(f) => f(ell).max(1),
        }
    }

    /// Explicit multiplicities, if any were attached as a list.
    pub fn explicit_multiplicities(&self) -> Option<&[u64]> {
        match &self.multiplicity {
            Multiplicity::Explicit(m) => Some(m),
            _ => None,
        }
    }

    /// Stored blocks, when the symbol was built from a block list.
    pub fn explicit_blocks(&self) -> Option<&[CMatrix]> {
        match &self.blocks {
            Blocks::Explicit(b) => Some(b),
            _ => None,
        }
    }

    /// Materialize `σ(ℓ)`.
    pub fn block(&self, ell: usize) -> Result<CMatrix> {
        let d = self.partition.dim(ell)?;
        let m = match &self.blocks {
            Blocks::Explicit(b) => b[ell].clone(),
            Blocks::Dense(f) => f(ell),
            Blocks::Diagonal(f) => {
                let diag = f(ell);
                if diag.len() != d {
                    return Err(shape_error(ell, d, diag.len(), 1));
                }
                CMatrix::from_diagonal(&CVector::from_vec(diag))
            }
            Blocks::Scalar(f) => CMatrix::from_diagonal_element(d, d, f(ell)),
        };
        if m.nrows() != d || m.ncols() != d {
            return Err(shape_error(ell, d, m.nrows(), m.ncols()));
        }
        Ok(m)
    }

    /// Scalar value `c_ℓ` when the symbol is scalar.
    pub fn scalar_value(&self, ell: usize) -> Option<C64> {
        match &self.blocks {
            Blocks::Scalar(f) => Some(f(ell)),
            _ => None,
        }
    }

    /// Diagonal of `σ(ℓ)` when the symbol is diagonal or scalar.
    pub fn diagonal_entries(&self, ell: usize) -> Result<Option<Vec<C64>>> {
        let d = self.partition.dim(ell)?;
        Ok(match (&self.blocks, self.structure) {
            (Blocks::Scalar(f), _) => Some(alloc::vec![f(ell); d]),
            (Blocks::Diagonal(f), _) => {
                let diag = f(ell);
                if diag.len() != d {
                    return Err(shape_error(ell, d, diag.len(), 1));
                }
                Some(diag)
            }
            (Blocks::Explicit(b), Structure::Diagonal | Structure::Scalar) => {
                Some(b[ell].diagonal().iter().copied().collect())
            }
            _ => None,
        })
    }

    /// New symbol with `f` applied to every diagonal entry. Only defined for
    /// diagonal and scalar symbols.
    pub fn map_diagonal<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(C64) -> C64 + Send + Sync + 'static,
    {
        if self.structure == Structure::General {
            return Err(invalid!("map_diagonal needs a diagonal or scalar symbol"));
        }
        let inner = self.clone();
        let mut out = match &self.blocks {
            Blocks::Scalar(g) => {
                let g = g.clone();
                Self::scalar(self.partition.clone(), move |ell| f(g(ell)))
            }
            _ => Self::diagonal(self.partition.clone(), move |ell| {
                inner
                    .diagonal_entries(ell)
                    .ok()
                    .flatten()
                    .unwrap_or_default()
                    .into_iter()
                    .map(&f)
                    .collect()
            }),
        };
        out.multiplicity = self.multiplicity.clone();
        Ok(out)
    }
}

impl fmt::Debug for MatrixSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixSymbol")
            .field("partition", &self.partition)
            .field("structure", &self.structure)
            .finish_non_exhaustive()
    }
}

fn shape_error(ell: usize, d: usize, rows: usize, cols: usize) -> Error {
    Error::DimensionMismatch(alloc::format!(
        "block {ell} should be {d}x{d}, generator produced {rows}x{cols}"
    ))
}

fn detect_structure(blocks: &[CMatrix]) -> Structure {
    let zero = C64::new(0.0, 0.0);
    let diagonal = blocks.iter().all(|b| {
        b.iter()
            .enumerate()
            .all(|(idx, z)| idx % (b.nrows() + 1) == 0 || *z == zero)
    });
    if !diagonal {
        return Structure::General;
    }
    let scalar = blocks
        .iter()
        .all(|b| b.diagonal().iter().all(|z| *z == b[(0, 0)]));
    if scalar && !blocks.is_empty() {
        Structure::Scalar
    } else {
        Structure::Diagonal
    }
}

/// Block-unitary change of basis `ℓ ↦ U(ℓ)`.
#[derive(Clone)]
pub struct BlockUnitary {
    partition: Partition,
    block: DenseFn,
}

impl BlockUnitary {
    pub fn from_fn<F>(partition: Partition, f: F) -> Self
    where
        F: Fn(usize) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            partition,
            block: Arc::new(f),
        }
    }

    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        let dims = blocks.iter().map(|b| b.nrows()).collect();
        let blocks: Arc<[CMatrix]> = blocks.into();
        Ok(Self::from_fn(Partition::from_dims(dims)?, move |ell| {
            blocks[ell].clone()
        }))
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `U(ℓ)`, checked for shape and for `U U* = I` within [`UNITARITY_TOL`].
    pub fn block(&self, ell: usize) -> Result<CMatrix> {
        let d = self.partition.dim(ell)?;
        let u = (self.block)(ell);
        if u.nrows() != d || u.ncols() != d {
            return Err(shape_error(ell, d, u.nrows(), u.ncols()));
        }
        let residual = unitarity_residual(&u);
        if residual.is_nan() || residual > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                block: ell,
                residual,
            });
        }
        Ok(u)
    }
}

/// Largest entry of `|U U* − I|`.
pub(crate) fn unitarity_residual(u: &CMatrix) -> f64 {
    let g = u * u.adjoint();
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `‖f‖ = (Σ_ℓ Σ_k |f̂(ℓ,k)|²)^{1/2}`.
pub fn plancherel_norm(f: &FourierCoefficients) -> f64 {
    f.norm_squared().sqrt()
}

/// `ĝ(ℓ) = σ(ℓ) f̂(ℓ)` on every stored block of `f`.
pub fn apply_symbol(s: &MatrixSymbol, f: &FourierCoefficients) -> Result<FourierCoefficients> {
    s.partition().check_compatible(f.partition(), f.indices())?;
    let mut out = FourierCoefficients::zero(f.partition().clone());
    for (ell, v) in f.blocks() {
        let g = match s.diagonal_entries(ell)? {
            Some(diag) => {
                CVector::from_iterator(v.len(), diag.iter().zip(v.iter()).map(|(a, b)| a * b))
            }
            None => s.block(ell)? * v,
        };
        out.insert(ell, g)?;
    }
    Ok(out)
}

/// Orthogonal projection onto block `ell`.
pub fn project_block(f: &FourierCoefficients, ell: usize) -> FourierCoefficients {
    let mut out = FourierCoefficients::zero(f.partition().clone());
    if let Some(v) = f.block(ell) {
        out.insert(ell, v.clone())
            .expect("block already validated against the same partition");
    }
    out
}

/// Recover the symbol of a black-box invariant operator on blocks
/// `0..=ell_max`: column `k` of `σ(ℓ)` is the `ℓ`-block of `action(e_ℓ^k)`.
///
/// Any output mass outside block `ℓ` larger than [`INVARIANCE_TOL`] is a
/// [`Error::NonInvariant`].
pub fn symbol_of_operator<A>(
    action: A,
    partition: &Partition,
    ell_max: usize,
) -> Result<MatrixSymbol>
where
    A: Fn(&FourierCoefficients) -> Result<FourierCoefficients>,
{
    let last = match partition.len() {
        Some(0) => return Err(invalid!("empty partition")),
        Some(n) => ell_max.min(n - 1),
        None => ell_max,
    };
    let mut blocks = Vec::with_capacity(last + 1);
    for ell in 0..=last {
        let d = partition.dim(ell)?;
        let mut sigma = CMatrix::zeros(d, d);
        for k in 0..d {
            let image = action(&FourierCoefficients::basis(partition.clone(), ell, k)?)?;
            let leak = image.max_norm_outside(ell);
            if leak.is_nan() || leak > INVARIANCE_TOL {
                return Err(Error::NonInvariant { block: ell, leak });
            }
            if let Some(col) = image.block(ell) {
                if col.len() != d {
                    return Err(shape_error(ell, d, col.len(), 1));
                }
                sigma.set_column(k, col);
            }
        }
        blocks.push(sigma);
    }
    MatrixSymbol::from_blocks(blocks)
}

/// `ℓ ↦ U(ℓ) σ(ℓ) U(ℓ)*`.
pub fn conjugate_by_unitary(s: &MatrixSymbol, u: &BlockUnitary) -> Result<MatrixSymbol> {
    if s.partition().len() != u.partition().len() {
        return Err(Error::DimensionMismatch(
            "symbol and unitary live on partitions of different length".into(),
        ));
    }
    let conjugate = |ell: usize| -> Result<CMatrix> {
        let sigma = s.block(ell)?;
        let ub = u.block(ell)?;
        if ub.nrows() != sigma.nrows() {
            return Err(shape_error(ell, sigma.nrows(), ub.nrows(), ub.ncols()));
        }
        Ok(&ub * sigma * ub.adjoint())
    };
    let out = match s.partition().len() {
        Some(n) => {
            let blocks = (0..n).map(conjugate).collect::<Result<Vec<_>>>()?;
            let mut sym = MatrixSymbol::from_blocks(blocks)?;
            sym.multiplicity = s.multiplicity.clone();
            sym
        }
        None => {
            // Infinite partitions are conjugated lazily; unitarity is
            // rechecked per block on access and a failure yields NaNs, which
            // the spectral routines report as `NotANumber`.
            let (s2, u2) = (s.clone(), u.clone());
            let mut sym = MatrixSymbol::from_fn(s.partition().clone(), move |ell| {
                match (s2.block(ell), u2.block(ell)) {
                    (Ok(sigma), Ok(ub)) if ub.nrows() == sigma.nrows() => {
                        &ub * sigma * ub.adjoint()
                    }
                    _ => {
                        let d = s2.partition().dim(ell).unwrap_or(1);
                        CMatrix::from_element(d, d, C64::new(f64::NAN, f64::NAN))
                    }
                }
            });
            sym.multiplicity = s.multiplicity.clone();
            sym
        }
    };
    Ok(out)
}
