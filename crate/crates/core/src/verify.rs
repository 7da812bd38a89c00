//! Brute-force numerical checks of masking claims.
//!
//! Channel equality is decided by the Frobenius distance between Choi
//! matrices, and deviations are aggregated by maximum over all pairs.

use serde::Serialize;

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace, tensor, unitary_eigen, ComplexMatrix, Subsystem, PHASE_CLUSTER_TOL,
};
use crate::masking::Masker;

/// Largest channel input dimension the verifier accepts.
pub const MAX_VERIFY_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    /// Worst pairwise deviation of the marginals on `A` (subsystem `B` traced out).
    pub max_deviation_a: f64,
    /// Worst pairwise deviation of the marginals on `B` (subsystem `A` traced out).
    pub max_deviation_b: f64,
    /// Indices of the pair attaining the larger of the two deviations.
    pub worst_pair: (usize, usize),
    pub tol: f64,
}

impl VerificationReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_a.max(self.max_deviation_b)
    }

    fn from_marginals(a: &[ComplexMatrix], b: &[ComplexMatrix], tol: f64) -> Self {
        let (dev_a, pair_a) = max_pairwise_distance(a);
        let (dev_b, pair_b) = max_pairwise_distance(b);
        Self {
            pass: dev_a <= tol && dev_b <= tol,
            max_deviation_a: dev_a,
            max_deviation_b: dev_b,
            worst_pair: if dev_a >= dev_b { pair_a } else { pair_b },
            tol,
        }
    }
}

fn max_pairwise_distance(ms: &[ComplexMatrix]) -> (f64, (usize, usize)) {
    let mut worst = (0.0, (0, 0));
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let d = ms[i].distance(&ms[j]);
            if d > worst.0 {
                worst = (d, (i, j));
            }
        }
    }
    worst
}

/// Choi matrix of `ρ ↦ Tr_traced[M·E(ρ)·M†]`.
pub fn reduced_channel_choi(
    m: &Masker,
    e: &ChannelSpec,
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    let din = e.din();
    if din > MAX_VERIFY_DIM {
        return Err(Error::UnsupportedDimension {
            what: "verification input dimension",
            dim: din,
        });
    }
    if m.input_dim() != e.dout() {
        return Err(Error::DimensionMismatch {
            context: "masker input vs channel output",
            expected: e.dout().to_string(),
            found: m.input_dim().to_string(),
        });
    }
    let out = match traced {
        Subsystem::A => m.dims().dim_b,
        Subsystem::B => m.dims().dim_a,
    };
    let mut choi = ComplexMatrix::zeros(din * out, din * out);
    for i in 0..din {
        for j in 0..din {
            let image = e.apply(&ComplexMatrix::unit(din, i, j))?;
            let reduced = partial_trace(&m.matrix().conjugate(&image), m.dims(), traced)?;
            choi = &choi + &tensor(&ComplexMatrix::unit(din, i, j), &reduced);
        }
    }
    Ok(choi)
}

/// Checks that both reduced channels through `m` agree across `family`.
pub fn verify_masking(m: &Masker, family: &[ChannelSpec], tol: f64) -> Result<VerificationReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let din = family[0].din();
    if let Some(bad) = family.iter().find(|e| e.din() != din) {
        return Err(Error::DimensionMismatch {
            context: "family input dimensions",
            expected: din.to_string(),
            found: bad.din().to_string(),
        });
    }
    let mut on_a = Vec::with_capacity(family.len());
    let mut on_b = Vec::with_capacity(family.len());
    for e in family {
        on_a.push(reduced_channel_choi(m, e, Subsystem::B)?);
        on_b.push(reduced_channel_choi(m, e, Subsystem::A)?);
    }
    Ok(VerificationReport::from_marginals(&on_a, &on_b, tol))
}

/// [`verify_masking`] on the pair `{id, e}`.
pub fn verify_identity_masking(
    m: &Masker,
    e: &ChannelSpec,
    tol: f64,
) -> Result<VerificationReport> {
    verify_masking(m, &[ChannelSpec::identity(e.din()), e.clone()], tol)
}

/// Eigenvectors of `u` from distinct eigenphase clusters must be sent by `m`
/// to states with orthogonal marginals on both subsystems.
pub fn local_orthogonality_check(m: &Masker, u: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !u.is_square() || u.rows() != m.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "unitary vs masker input",
            expected: format!("{0}x{0}", m.input_dim()),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let eig = unitary_eigen(u, PHASE_CLUSTER_TOL, 0)?;
    let clusters = eig.clusters();
    let marginals: Vec<[ComplexMatrix; 2]> = (0..u.rows())
        .map(|k| {
            let v = m.matrix() * &eig.vectors.column(k);
            let state = &v * &v.adjoint();
            Ok([
                partial_trace(&state, m.dims(), Subsystem::B)?,
                partial_trace(&state, m.dims(), Subsystem::A)?,
            ])
        })
        .collect::<Result<_>>()?;
    for (ci, first) in clusters.iter().enumerate() {
        for second in &clusters[ci + 1..] {
            for &k in first {
                for &l in second {
                    for (mk, ml) in marginals[k].iter().zip(&marginals[l]) {
                        if (mk * ml).frobenius_norm() > tol {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Checks that the pure states all have the same marginals after `m`.
pub fn state_mask_check(
    m: &Masker,
    states: &[ComplexMatrix],
    tol: f64,
) -> Result<VerificationReport> {
    if states.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one state is required".into(),
        ));
    }
    let mut on_a = Vec::with_capacity(states.len());
    let mut on_b = Vec::with_capacity(states.len());
    for psi in states {
        if psi.cols() != 1 || psi.rows() != m.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "state vector",
                expected: format!("{}x1", m.input_dim()),
                found: format!("{}x{}", psi.rows(), psi.cols()),
            });
        }
        let norm = psi.frobenius_norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "state has norm {norm}, expected 1"
            )));
        }
        let v = m.matrix() * psi;
        let state = &v * &v.adjoint();
        on_a.push(partial_trace(&state, m.dims(), Subsystem::B)?);
        on_b.push(partial_trace(&state, m.dims(), Subsystem::A)?);
    }
    Ok(VerificationReport::from_marginals(&on_a, &on_b, tol))
}
