use super::{Certificate, Masker, MaskingDecision, Witness};
use crate::channels::CHANNEL_TOL;
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, max_off_diagonal, simultaneous_eigenbasis, ComplexMatrix, DECISION_TOL,
};

/// A nonempty list of `d×d` unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct GateFamily {
    unitaries: Vec<ComplexMatrix>,
    d: usize,
}

impl GateFamily {
    pub fn new(unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        let d = unitaries.first().ok_or(Error::EmptyFamily)?.rows();
        for u in &unitaries {
            if !u.is_square() || u.rows() != d || d == 0 {
                return Err(Error::DimensionMismatch {
                    context: "gate family member",
                    expected: format!("{d}x{d}"),
                    found: format!("{}x{}", u.rows(), u.cols()),
                });
            }
            let deviation = u.isometry_deviation();
            if deviation > CHANNEL_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { unitaries, d })
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    /// `U_ref†·Uₙ` for every `n ≠ reference`.
    pub fn quotients(&self, reference: usize) -> Vec<ComplexMatrix> {
        let rd = self.unitaries[reference].adjoint();
        self.unitaries
            .iter()
            .enumerate()
            .filter(|(n, _)| *n != reference)
            .map(|(_, u)| &rd * u)
            .collect()
    }
}

/// Maskable iff the quotients `Wₙ = U₁†Uₙ` commute pairwise (norm ≤ `tol·d`).
///
/// The witness cites the pair with the largest commutator norm, indexed by
/// family position.
pub fn decide_gate_family(fam: &GateFamily, tol: f64, seed: u64) -> Result<MaskingDecision> {
    if fam.len() == 1 {
        return Ok(MaskingDecision::Maskable(Certificate::Trivial));
    }
    let ws = fam.quotients(0);
    let mut worst: Option<(usize, usize, f64)> = None;
    for a in 0..ws.len() {
        for b in a + 1..ws.len() {
            let norm = commutator_norm(&ws[a], &ws[b])?;
            if worst.is_none_or(|(_, _, w)| norm > w) {
                worst = Some((a + 1, b + 1, norm));
            }
        }
    }
    if let Some((i, j, comm_norm)) = worst {
        if comm_norm > tol * fam.dim() as f64 {
            return Ok(MaskingDecision::NotMaskable(Witness::NoncommutingPair {
                i,
                j,
                comm_norm,
            }));
        }
    }
    let basis = simultaneous_eigenbasis(&ws, tol, seed)?;
    Ok(MaskingDecision::Maskable(Certificate::CommonEigenbasis {
        basis,
        reference_index: 0,
    }))
}

/// `M = (Σ_k |kk⟩⟨f_k|)·U_ref†` with dims `(d, d)`.
pub fn synthesize_gate_masker(
    fam: &GateFamily,
    basis: &ComplexMatrix,
    reference_index: usize,
) -> Result<Masker> {
    let d = fam.dim();
    if reference_index >= fam.len() {
        return Err(Error::CertificateMismatch(format!(
            "reference index {reference_index} out of range for {} gates",
            fam.len()
        )));
    }
    if basis.rows() != d || basis.cols() != d {
        return Err(Error::CertificateMismatch(format!(
            "basis is {}x{}, family dimension is {d}",
            basis.rows(),
            basis.cols()
        )));
    }
    let deviation = basis.isometry_deviation();
    if deviation > 1e-10 {
        return Err(Error::CertificateMismatch(format!(
            "basis is not orthonormal (deviation {deviation:e})"
        )));
    }
    let residual = max_off_diagonal(basis, &fam.quotients(reference_index));
    if residual > DECISION_TOL * d as f64 {
        return Err(Error::CertificateMismatch(format!(
            "basis does not diagonalize the family quotients (residual {residual:e})"
        )));
    }
    Masker::diagonal_embedding(basis)?.then_after(&fam.unitaries[reference_index].adjoint())
}

/// `{p·U_λρU_λ† + (1−p)·1/d}`: trivially maskable at `p = 0`, otherwise the
/// verdict and certificate of the underlying gate family.
pub fn decide_depolarized_family(
    p: f64,
    us: &GateFamily,
    tol: f64,
    seed: u64,
) -> Result<MaskingDecision> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(format!(
            "depolarizing weight p = {p} is outside [0, 1]"
        )));
    }
    if p == 0.0 {
        return Ok(MaskingDecision::Maskable(Certificate::Trivial));
    }
    decide_gate_family(us, tol, seed)
}
