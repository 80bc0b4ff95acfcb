//! Phase-space simulation of relativistic scalar charged particles in the
//! two-component (charge-resolved) representation.
//!
//! The crate is organized around a spectral phase-space engine:
//!
//! * [`kernel`] — grids, Fourier bookkeeping, the Groenewold–Moyal star
//!   product, star square roots, and harmonic-oscillator displacement /
//!   quasi-probability matrix elements;
//! * [`free_particle`] — even/odd Wigner components of free particles and
//!   their exact quantum Liouville evolution;
//! * [`rotator`] — the in-plane cyclotron degree of freedom of a charged
//!   scalar in a homogeneous magnetic field (energy representation and
//!   Moyal evolution, orbit-radius observables);
//! * [`coherent`] — nonlinear coherent states, orbit-radius dispersion and
//!   the uncertainty audit, envelope-modulation experiments;
//! * [`oracle`] — slow, independent dense Fock-space and quadrature
//!   reference computations used to validate everything else.
//!
//! All quantities carry explicit `hbar`, `mass`, `c` factors through
//! [`PhysicalScales`]; the conventional working mode sets all three to 1.

pub mod coherent;
pub mod free_particle;
pub mod kernel;
pub mod oracle;
pub mod rotator;
mod scales;

pub use kernel::grid::{PhaseField, PhaseGrid, Representation};
pub use scales::PhysicalScales;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum FvError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid physical scales: {0}")]
    InvalidScales(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("grid is not star-capable (requires n_p = n_q and dp*dq = 2*pi*hbar/n): {0}")]
    GridNotStarCapable(String),
    #[error("grid under-resolves the requested Fock content: need q extent >= {required_extent}")]
    UnderResolvedGrid { required_extent: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge: tail estimate {tail:.3e} above tolerance {tol:.3e}")]
    NonConvergent { tail: f64, tol: f64 },
    #[error("truncation inadequate: tail mass {tail:.3e}; suggest N >= {suggested}")]
    TruncationInadequate { tail: f64, suggested: usize },
    #[error("moment order {order} too high for the grid decay (boundary mass {boundary:.3e})")]
    MomentOrder { order: usize, boundary: f64 },
    #[error("step count {steps} too low for the flow (needs >= {required})")]
    StepBound { steps: usize, required: usize },
    #[error("oracle cost guard: {0}")]
    CostGuard(String),
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("insufficient duration/sampling: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, FvError>;
