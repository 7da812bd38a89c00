use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Factor dimensions of a bipartite space `H_A ⊗ H_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidArgument(format!(
                "bipartite factor dimensions must be positive, got ({dim_a}, {dim_b})"
            )));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }
}

/// The subsystem that is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub const BOTH: [Subsystem; 2] = [Subsystem::A, Subsystem::B];

    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Partial trace over `traced`, leaving an operator on the other factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: BipartiteDims,
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dims.total();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let (da, db) = (dims.dim_a, dims.dim_b);
    let out = match traced {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db)
                .map(|k| m[(i * db + k, j * db + k)])
                .sum::<Complex64>()
        }),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da)
                .map(|k| m[(k * db + i, k * db + j)])
                .sum::<Complex64>()
        }),
    };
    Ok(out)
}

/// Frobenius norm of `ab − ba`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "commutator_norm",
            expected: format!("{0}x{0}", a.rows()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok((&(a * b) - &(b * a)).frobenius_norm())
}

/// True iff `‖m†m − 1‖_F ≤ tol`. Wide matrices are never isometries.
pub fn is_isometry(m: &ComplexMatrix, tol: f64) -> bool {
    m.rows() >= m.cols() && m.isometry_deviation() <= tol
}
