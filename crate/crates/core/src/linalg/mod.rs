//! Dense complex linear algebra at desk scale.
//!
//! Three tolerance tiers are used across the crate: structural facts that hold
//! to machine precision, decision boundaries, and verification of accumulated
//! round-off.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{
    cluster_phases, eig_hermitian, fix_phase, max_off_diagonal, simultaneous_eigenbasis,
    unitary_eigen, EigenDecomposition, UnitaryEigen,
};
pub use matrix::ComplexMatrix;
pub use ops::{commutator_norm, is_isometry, partial_trace, tensor, BipartiteDims, Subsystem};

/// Machine-precision structural checks (scaled by dimension where noted).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Default tolerance for maskability decisions.
pub const DECISION_TOL: f64 = 1e-8;
/// Default tolerance for numerical masking verification.
pub const VERIFY_TOL: f64 = 1e-9;
/// Eigenphases closer than this (radians) belong to the same eigenspace.
pub const PHASE_CLUSTER_TOL: f64 = 1e-8;
