//! Quantum mechanics on dense matrices.
//!
//! Single qubits through lattice fermions, angular momentum, hydrogen and
//! perturbation theory, Bell tests, the lattice Dirac equation and RG flows.
//! ħ = 1 throughout; hydrogen quantities are in atomic units.

pub mod angular;
pub mod bell;
pub mod composite;
pub mod dirac;
pub mod dynamics;
pub mod hydrogen;
pub mod lattice;
pub mod linalg;
pub mod numerics;
pub mod oscillator;
pub mod pt;
pub mod qubit;
pub mod rg;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum QmError {
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level is degenerate (gap {0:.3e}); use the degenerate engine")]
    Degenerate(f64),
    #[error("no minimum inside the bracket")]
    NoMinimum,
    #[error("did not converge: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, QmError>;

pub use linalg::{CMatrix, CVector, C64};
