//! Built-in symbols and spectra for the concrete examples: SU(2) Laplacian
//! powers, the SO(3) Schrödinger symbol, torus Fourier multipliers and
//! one-dimensional anharmonic oscillators.

mod anharmonic;
mod so3;
mod su2;
mod torus;

pub use anharmonic::{
    anharmonic_decay_check, anharmonic_galerkin_spectrum, anharmonic_schatten_threshold,
    AnharmonicSpec, DecayCheck, SpectrumResult, DECAY_MARGIN,
};
pub use so3::so3_schrodinger_symbol;
pub use su2::{su2_laplacian_power_symbol, su2_tensor_norm, su2_weight_label, Su2TensorNorm};
pub use torus::{inv_power_multiplier, lattice_points, torus_multiplier_symbol, TorusMultiplier};
