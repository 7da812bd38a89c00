//! Maskability decisions and masker synthesis.
//!
//! Each channel class has a decision procedure returning either a certificate
//! (enough data to rebuild a masker deterministically) or a witness quantifying
//! the violated condition:
//!
//! | class              | maskable iff                                          |
//! |--------------------|-------------------------------------------------------|
//! | unitary gates      | `{U₁†Uₙ}` commute pairwise                            |
//! | depolarized gates  | `p = 0`, or the underlying gates are maskable         |
//! | Pauli channels     | `p₀ + p_k` is constant for some axis `k`              |
//! | `{id, E}` (qubit)  | `E` is unital with a pure fixed point                 |
//! | `{id, E_λ}`        | all `E_λ` unital with a common pure fixed point       |
//! | classical channels | always (Fourier masker)                               |
//!
//! A family with a single member is always masked by any isometry and is
//! reported as [`Certificate::Trivial`].

mod classical;
mod family;
mod gate;
mod identity;
mod pauli;

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{Axis, PureFixedPointResult};
use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, ComplexMatrix};

pub use classical::{
    classical_no_go_search, synthesize_classical_masker, Counterexample, SearchReport,
    MAX_SEARCH_DIM,
};
pub use family::Family;
pub use gate::{decide_depolarized_family, decide_gate_family, synthesize_gate_masker, GateFamily};
pub use identity::{decide_identity_family, decide_identity_pair, synthesize_identity_masker};
pub use pauli::{decide_pauli_family, synthesize_pauli_masker};

/// Isometry tolerance enforced on every [`Masker`].
pub const MASKER_ISOMETRY_TOL: f64 = 1e-10;

/// An isometry from the channel output space into `H_A ⊗ H_B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Masker {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
}

impl Masker {
    pub fn new(matrix: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        Self::with_tolerance(matrix, dims, MASKER_ISOMETRY_TOL)
    }

    /// Like [`Masker::new`] with a caller-chosen isometry tolerance.
    pub fn with_tolerance(matrix: ComplexMatrix, dims: BipartiteDims, tol: f64) -> Result<Self> {
        if matrix.rows() != dims.total() {
            return Err(Error::DimensionMismatch {
                context: "masker rows",
                expected: format!("{} = {}·{}", dims.total(), dims.dim_a, dims.dim_b),
                found: matrix.rows().to_string(),
            });
        }
        if matrix.cols() == 0 || matrix.cols() > matrix.rows() {
            return Err(Error::NotIsometry {
                deviation: f64::INFINITY,
            });
        }
        let deviation = matrix.isometry_deviation();
        if deviation > tol {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.cols()
    }

    /// `Σ_k |kk⟩⟨f_k|` for the columns `f_k` of `basis`.
    pub(crate) fn diagonal_embedding(basis: &ComplexMatrix) -> Result<Self> {
        let d = basis.cols();
        let mut m = ComplexMatrix::zeros(d * d, basis.rows());
        for k in 0..d {
            for c in 0..basis.rows() {
                m[(k * d + k, c)] = basis[(c, k)].conj();
            }
        }
        Self::new(m, BipartiteDims::new(d, d)?)
    }

    /// Composes `self · u`, for `u` unitary on the input space.
    pub(crate) fn then_after(self, u: &ComplexMatrix) -> Result<Self> {
        let m = self.matrix.try_mul(u)?;
        Self::new(m, self.dims)
    }
}

/// Recipe for building a masker.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    /// Common eigenbasis (columns) of `{U_ref†Uₙ}`.
    CommonEigenbasis {
        basis: ComplexMatrix,
        reference_index: usize,
    },
    /// `p₀ + p_k = c` across the Pauli family.
    PauliAxis { axis: Axis, c: f64 },
    /// Bloch direction of a common pure fixed point.
    FixedPointAxis { axis: [f64; 3] },
    /// Classical channels with `d` output symbols.
    Fourier { d: usize },
    /// The family does not depend on its label.
    Trivial,
}

/// Evidence that a family cannot be masked.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Witness {
    /// Family members `i`, `j` whose quotients by the reference gate do not commute.
    NoncommutingPair {
        i: usize,
        j: usize,
        comm_norm: f64,
    },
    /// Spread (max − min) of `p₀ + p_k` for `k = x, y, z`.
    NoConstantAxis {
        spreads: [f64; 3],
    },
    NonUnital {
        member: usize,
        b: [f64; 3],
    },
    NoPureFixedPoint {
        member: usize,
        eigenvalues: Vec<Complex64>,
    },
    /// Fixed-point sets of each member; they share no direction.
    NoCommonFixedPoint {
        axes: Vec<PureFixedPointResult>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum MaskingDecision {
    Maskable(Certificate),
    NotMaskable(Witness),
}

impl MaskingDecision {
    pub fn is_maskable(&self) -> bool {
        matches!(self, MaskingDecision::Maskable(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            MaskingDecision::Maskable(c) => Some(c),
            MaskingDecision::NotMaskable(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            MaskingDecision::Maskable(_) => None,
            MaskingDecision::NotMaskable(w) => Some(w),
        }
    }
}
