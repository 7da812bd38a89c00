use super::{Certificate, Masker, MaskingDecision, Witness};
use crate::channels::bloch::{norm3, orient};
use crate::channels::{
    bloch_affine, pure_fixed_points, BlochAffine, ChannelSpec, PureFixedPointResult,
};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{eig_hermitian, ComplexMatrix};

const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

fn require_qubit(e: &ChannelSpec) -> Result<()> {
    for dim in [e.din(), e.dout()] {
        if dim != 2 {
            return Err(Error::UnsupportedDimension {
                what: "identity masking (qubit channels only)",
                dim,
            });
        }
    }
    Ok(())
}

/// Prefers a direction whose last significant coordinate is positive.
fn pick_direction(dirs: &[[f64; 3]]) -> Option<[f64; 3]> {
    dirs.iter()
        .copied()
        .find(|d| orient(*d) == *d)
        .or_else(|| dirs.first().copied())
}

/// `{id, E}` is maskable iff `E` is unital (`‖b‖ ≤ tol`) and fixes a pure state.
pub fn decide_identity_pair(e: &ChannelSpec, tol: f64) -> Result<MaskingDecision> {
    decide_identity_family(std::slice::from_ref(e), tol)
}

/// `{id, E_λ}` is maskable iff every `E_λ` is unital and they share a pure fixed point.
pub fn decide_identity_family(es: &[ChannelSpec], tol: f64) -> Result<MaskingDecision> {
    if es.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut affines = Vec::with_capacity(es.len());
    for (member, e) in es.iter().enumerate() {
        require_qubit(e)?;
        let affine = bloch_affine(e)?;
        if affine.b_norm() > tol {
            return Ok(MaskingDecision::NotMaskable(Witness::NonUnital {
                member,
                b: affine.b,
            }));
        }
        affines.push(affine);
    }

    let mut sets = Vec::with_capacity(es.len());
    for (member, (e, affine)) in es.iter().zip(&affines).enumerate() {
        let fp = pure_fixed_points(e, tol)?;
        if fp == PureFixedPointResult::None {
            return Ok(MaskingDecision::NotMaskable(Witness::NoPureFixedPoint {
                member,
                eigenvalues: affine.eigenvalues(),
            }));
        }
        sets.push(fp);
    }

    let candidates: Vec<[f64; 3]> = match sets
        .iter()
        .find(|s| **s != PureFixedPointResult::AllDirections)
    {
        None => vec![Z_AXIS],
        Some(first) => first.directions().to_vec(),
    };
    let common: Vec<[f64; 3]> = candidates
        .into_iter()
        .filter(|n| affines.iter().all(|a| a.fixed_point_residual(*n) <= tol))
        .collect();
    match pick_direction(&common) {
        Some(axis) => Ok(MaskingDecision::Maskable(Certificate::FixedPointAxis {
            axis,
        })),
        None => Ok(MaskingDecision::NotMaskable(Witness::NoCommonFixedPoint {
            axes: sets,
        })),
    }
}

/// Unitary whose first column is the pure state with Bloch vector `n̂`.
pub(crate) fn axis_unitary(axis: [f64; 3]) -> ComplexMatrix {
    let eig = eig_hermitian(&gates::bloch_operator(axis)).expect("n·σ is Hermitian");
    // ascending eigenvalues: column 1 is |ψ(n̂)⟩, column 0 its orthogonal complement
    eig.vectors.select_columns(&[1, 0])
}

fn check_fixed(affine: &BlochAffine, axis: [f64; 3], tol: f64) -> Result<()> {
    if affine.fixed_point_residual(axis) > tol {
        return Err(Error::NotFixedPoint(axis[0], axis[1], axis[2]));
    }
    Ok(())
}

/// `M = (|00⟩⟨0| + |11⟩⟨1|)·U†` with `U|0⟩ = |ψ(n̂)⟩`.
///
/// Fails when `n̂` is not a fixed point of every channel in `es` within `tol`.
pub fn synthesize_identity_masker(es: &[ChannelSpec], axis: [f64; 3], tol: f64) -> Result<Masker> {
    let norm = norm3(axis);
    if (norm - 1.0).abs() > tol.max(1e-10) {
        return Err(Error::InvalidArgument(format!("axis norm {norm} is not 1")));
    }
    let axis = axis.map(|c| c / norm);
    for e in es {
        require_qubit(e)?;
        check_fixed(&bloch_affine(e)?, axis, tol)?;
    }
    let u = axis_unitary(axis);
    Masker::diagonal_embedding(&ComplexMatrix::identity(2))?.then_after(&u.adjoint())
}
