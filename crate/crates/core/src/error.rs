use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator is not invariant: block {block} leaks mass {leak:e} outside itself")]
    NonInvariant { block: usize, leak: f64 },
    #[error("block {block} is not unitary (residual {residual:e})")]
    NotUnitary { block: usize, residual: f64 },
    #[error("NaN encountered in block {block}")]
    NotANumber { block: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("block index {index} is outside the partition of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("positivity violated: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    PositivityViolation { eigenvalue: f64, threshold: f64 },
    #[error("assembled matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("{0} did not converge for a {1}x{1} matrix")]
    NoConvergence(&'static str, usize),
}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidParameter(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
