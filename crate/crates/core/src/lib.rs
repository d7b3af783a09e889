//! Quantum correlations of two-qubit states and of thermal states of two
//! spin models.
//!
//! * [`linalg`]: small dense complex matrices, Jacobi eigensolver, partial
//!   trace, matrix functions and entropy.
//! * [`measures`]: concurrence, Bell-CHSH quantity, MID and geometric
//!   discord of an arbitrary two-qubit density matrix.
//! * [`models`]: XXZ and XXX+DM Hamiltonians with their closed-form and
//!   Gibbs-oracle thermal states.
//! * [`sweep`]: parameter grids, figure presets and CSV output used by the
//!   `qcorr` binary.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod sweep;

pub use error::{QcorrError, Result};
pub use linalg::ComplexMatrix;
pub use measures::{full_report, DensityMatrix, MeasureReport};
