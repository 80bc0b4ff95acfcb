//! The phase-space mathematical engine: grids, transforms, the star product
//! and its square root, and oscillator displacement / quasi-probability
//! matrix elements.

pub mod displacement;
pub mod fft;
pub mod grid;
pub mod special;
pub mod star;
pub mod star_sqrt;
pub mod symbols;

pub use displacement::{beta_of, displacement_elements, quasiprob_elements, FockMatrix};
pub use fft::CenteredFft;
pub use grid::{PhaseField, PhaseGrid, Representation};
pub use special::laguerre;
pub use star::{star_polynomial, star_product, Poly2, StarDiagnostics, StarEngine};
pub use star_sqrt::{star_sqrt, star_sqrt_with_report, StarSqrtReport};
pub use symbols::{
    accumulate_quasiprob, fock_diagonal_from_symbol, fock_diagonal_to_symbol,
    required_extent_for_levels, SymbolDiagnostics, TailMode,
};
