//! Matrix-symbol calculus for operators that are invariant under a partition
//! `H = ⊕ H_ℓ` of a separable Hilbert space into finite-dimensional blocks.
//!
//! Everything lives in Fourier-coefficient space: an invariant operator is
//! its symbol `ℓ ↦ σ(ℓ)`, a `d_ℓ × d_ℓ` complex matrix, and vectors are
//! sparse maps `ℓ ↦ f̂(ℓ) ∈ ℂ^{d_ℓ}`.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line live in the `blockspec` companion crate.
#![no_std]
// Parameter checks are written `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod accel;
pub mod dixmier;
mod error;
pub mod generators;
mod partition;
pub mod spectral;
mod symbol;
pub mod tensor;

pub use error::{Error, Result};
pub use partition::{FourierCoefficients, Partition};
pub use spectral::{
    SchattenEstimate, SingularSpectrum, StopReason, TraceEstimate, TruncationPolicy,
};
pub use symbol::{
    apply_symbol, conjugate_by_unitary, plancherel_norm, project_block, symbol_of_operator,
    BlockUnitary, MatrixSymbol, Structure,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix (one symbol block).
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector (one coefficient block).
pub type CVector = nalgebra::DVector<C64>;

/// Largest allowed leak of an action outside the block it acts on.
pub const INVARIANCE_TOL: f64 = 1e-10;
/// Largest allowed deviation of `U U*` from the identity, entrywise.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Iteration cap handed to nalgebra's QR-based decompositions, whose default
/// is to iterate without bound.
pub(crate) fn max_iterations(n: usize) -> usize {
    1000 + 100 * n
}
