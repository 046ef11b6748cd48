//! Quantum incompatibility of multi-parameter estimation on thermal states.
//!
//! The crate computes the quantum Fisher information matrix `J`, the mean
//! Uhlmann curvature `U` and the incompatibility measure
//! `R = ||2i J^-1 U||_inf` for
//!
//! * arbitrary finite-dimensional parametrized Hamiltonians, through exact
//!   diagonalization ([`spectral`], [`estimation`]);
//! * the transverse-field Ising chain with a global spin rotation, through
//!   closed-form per-momentum blocks ([`ising`]);
//!
//! and provides phase-diagram sweeps and critical-scaling fits on top
//! ([`analysis`]).

pub mod spectral;

pub use spectral::{HermitianOperator, SpectralDecomposition, ThermalEnsemble};
pub mod estimation;
pub mod linalg;
pub mod verify;

pub use estimation::{EstimationError, EstimationResult};
pub mod ising;
pub mod quadrature;
pub mod analysis;
