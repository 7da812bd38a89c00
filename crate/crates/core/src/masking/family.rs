use super::classical::synthesize_classical_masker;
use super::gate::{
    decide_depolarized_family, decide_gate_family, synthesize_gate_masker, GateFamily,
};
use super::identity::{decide_identity_family, synthesize_identity_masker};
use super::pauli::{decide_pauli_family, synthesize_pauli_masker};
use super::{Certificate, Masker, MaskingDecision};
use crate::channels::{Axis, ChannelSpec, ClassicalChannel, PauliFourVector};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// A labelled channel family of one of the supported classes.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gates(GateFamily),
    Pauli(Vec<PauliFourVector>),
    /// `{id, E}`.
    IdentityPair(ChannelSpec),
    /// `{id, E_λ}`.
    IdentityFamily(Vec<ChannelSpec>),
    /// `{p·U_λ(·)U_λ† + (1−p)·1/d}` with a shared `p`.
    Depolarized {
        p: f64,
        unitaries: GateFamily,
    },
    /// Classical channels with common alphabet sizes.
    Classical(Vec<ClassicalChannel>),
}

impl Family {
    pub fn classical(channels: Vec<ClassicalChannel>) -> Result<Self> {
        let first = channels.first().ok_or(Error::EmptyFamily)?;
        let shape = (first.in_size(), first.out_size());
        if let Some(bad) = channels
            .iter()
            .find(|c| (c.in_size(), c.out_size()) != shape)
        {
            return Err(Error::DimensionMismatch {
                context: "classical family alphabets",
                expected: format!("{}→{}", shape.0, shape.1),
                found: format!("{}→{}", bad.in_size(), bad.out_size()),
            });
        }
        Ok(Family::Classical(channels))
    }

    pub fn len(&self) -> usize {
        self.channels().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The channels a masker for this family has to hide, including the
    /// identity for the identity-paired classes.
    pub fn channels(&self) -> Vec<ChannelSpec> {
        match self {
            Family::Gates(g) => g
                .unitaries()
                .iter()
                .map(|u| ChannelSpec::Unitary { matrix: u.clone() })
                .collect(),
            Family::Pauli(ps) => ps.iter().copied().map(ChannelSpec::Pauli).collect(),
            Family::IdentityPair(e) => vec![ChannelSpec::identity(e.din()), e.clone()],
            Family::IdentityFamily(es) => {
                let d = es.first().map_or(2, ChannelSpec::din);
                std::iter::once(ChannelSpec::identity(d))
                    .chain(es.iter().cloned())
                    .collect()
            }
            Family::Depolarized { p, unitaries } => unitaries
                .unitaries()
                .iter()
                .map(|u| ChannelSpec::DepolarizedUnitary {
                    p: *p,
                    unitary: u.clone(),
                })
                .collect(),
            Family::Classical(cs) => cs.iter().cloned().map(ChannelSpec::Classical).collect(),
        }
    }

    pub fn decide(&self, tol: f64, seed: u64) -> Result<MaskingDecision> {
        match self {
            Family::Gates(g) => decide_gate_family(g, tol, seed),
            Family::Pauli(ps) => decide_pauli_family(ps, tol),
            Family::IdentityPair(e) => decide_identity_family(std::slice::from_ref(e), tol),
            Family::IdentityFamily(es) => decide_identity_family(es, tol),
            Family::Depolarized { p, unitaries } => {
                decide_depolarized_family(*p, unitaries, tol, seed)
            }
            Family::Classical(cs) => {
                if cs.len() == 1 {
                    Ok(MaskingDecision::Maskable(Certificate::Trivial))
                } else {
                    let d = cs.first().ok_or(Error::EmptyFamily)?.out_size();
                    Ok(MaskingDecision::Maskable(Certificate::Fourier { d }))
                }
            }
        }
    }

    /// Builds the masker described by `cert`. [`Certificate::Trivial`] falls
    /// back to the class construction with its default parameters.
    pub fn synthesize(&self, cert: &Certificate, tol: f64) -> Result<Masker> {
        let mismatch =
            || Error::CertificateMismatch(format!("{cert:?} does not apply to this family class"));
        match (self, cert) {
            (
                Family::Gates(g),
                Certificate::CommonEigenbasis {
                    basis,
                    reference_index,
                },
            )
            | (
                Family::Depolarized { unitaries: g, .. },
                Certificate::CommonEigenbasis {
                    basis,
                    reference_index,
                },
            ) => synthesize_gate_masker(g, basis, *reference_index),
            (Family::Gates(g), Certificate::Trivial) => {
                Masker::diagonal_embedding(&ComplexMatrix::identity(g.dim()))?
                    .then_after(&g.unitaries()[0].adjoint())
            }
            (Family::Depolarized { unitaries, .. }, Certificate::Trivial) => {
                Masker::diagonal_embedding(&ComplexMatrix::identity(unitaries.dim()))
            }
            (Family::Pauli(_), Certificate::PauliAxis { axis, .. }) => {
                Ok(synthesize_pauli_masker(*axis))
            }
            (Family::Pauli(_), Certificate::Trivial) => Ok(synthesize_pauli_masker(Axis::X)),
            (Family::IdentityPair(e), Certificate::FixedPointAxis { axis }) => {
                synthesize_identity_masker(std::slice::from_ref(e), *axis, tol)
            }
            (Family::IdentityFamily(es), Certificate::FixedPointAxis { axis }) => {
                synthesize_identity_masker(es, *axis, tol)
            }
            (Family::Classical(cs), Certificate::Fourier { d }) => {
                if cs.iter().any(|c| c.out_size() != *d) {
                    return Err(mismatch());
                }
                synthesize_classical_masker(*d)
            }
            (Family::Classical(cs), Certificate::Trivial) => {
                synthesize_classical_masker(cs.first().ok_or(Error::EmptyFamily)?.out_size())
            }
            _ => Err(mismatch()),
        }
    }

    /// Decision followed by synthesis; `Ok(Err(decision))` when not maskable.
    pub fn decide_and_synthesize(
        &self,
        tol: f64,
        seed: u64,
    ) -> Result<std::result::Result<Masker, MaskingDecision>> {
        let decision = self.decide(tol, seed)?;
        match decision.certificate() {
            Some(cert) => self.synthesize(cert, tol).map(Ok),
            None => Ok(Err(decision)),
        }
    }
}
