//! Nonlinear coherent states and orbit-radius observables.
