use super::{Certificate, Masker, MaskingDecision, Witness};
use crate::channels::{Axis, PauliFourVector};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, BipartiteDims, ComplexMatrix};

/// Maskable iff `p₀ + p_k` has spread ≤ `tol` across the family for some axis,
/// tried in the order x, y, z. The certificate reports the mean as `c`.
pub fn decide_pauli_family(ps: &[PauliFourVector], tol: f64) -> Result<MaskingDecision> {
    if ps.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if ps.len() == 1 {
        return Ok(MaskingDecision::Maskable(Certificate::Trivial));
    }
    let mut spreads = [0.0; 3];
    for (slot, axis) in spreads.iter_mut().zip(Axis::ALL) {
        let weights = ps.iter().map(|p| p.weight_with(axis));
        let (lo, hi) = weights.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| {
            (lo.min(w), hi.max(w))
        });
        *slot = hi - lo;
    }
    match Axis::ALL.into_iter().zip(spreads).find(|(_, s)| *s <= tol) {
        Some((axis, _)) => {
            let c = ps.iter().map(|p| p.weight_with(axis)).sum::<f64>() / ps.len() as f64;
            Ok(MaskingDecision::Maskable(Certificate::PauliAxis {
                axis,
                c,
            }))
        }
        None => Ok(MaskingDecision::NotMaskable(Witness::NoConstantAxis {
            spreads,
        })),
    }
}

/// `M = |00⟩⟨u₊| + |11⟩⟨u₋|` for the `±1` eigenvectors `u±` of `σ_k`.
pub fn synthesize_pauli_masker(axis: Axis) -> Masker {
    let eig = eig_hermitian(&axis.pauli()).expect("Pauli matrices are Hermitian");
    // ascending eigenvalues: column 0 is u₋, column 1 is u₊
    let basis = eig.vectors.select_columns(&[1, 0]);
    let mut m = ComplexMatrix::zeros(4, 2);
    for (row, k) in [(0, 0), (3, 1)] {
        for c in 0..2 {
            m[(row, c)] = basis[(c, k)].conj();
        }
    }
    Masker::new(m, BipartiteDims { dim_a: 2, dim_b: 2 })
        .expect("Pauli eigenbasis embedding is an isometry")
}
