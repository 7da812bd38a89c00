//! On-disk formats: family files, channel files and masker files.
//!
//! All files are JSON with a top-level `"version": "1"`. Complex scalars are
//! `[re, im]` pairs (a bare number is accepted as a real entry on input) and
//! matrices are arrays of rows.

use std::fs;
use std::path::Path;

use chanmask::masking::GateFamily;
use chanmask::Complex64;
use chanmask::{
    BipartiteDims, ChannelSpec, ClassicalChannel, ComplexMatrix, Family, KrausChannel, Masker,
    PauliFourVector,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: &str = "1";

/// Isometry tolerance applied to masker files on load.
pub const MASKER_FILE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Complex([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

pub type MatrixRows = Vec<Vec<Entry>>;

fn to_matrix(rows: &MatrixRows, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|&e| e.into()).collect())
        .collect();
    ComplexMatrix::from_rows(rows).map_err(|e| CliError::schema(format!("{what}: {e}")))
}

/// One channel payload, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MemberSpec {
    Unitary {
        matrix: MatrixRows,
    },
    Kraus {
        ops: Vec<MatrixRows>,
    },
    /// `(p₀, p_x, p_y, p_z)`.
    Pauli {
        probs: [f64; 4],
    },
    /// Column-stochastic matrix, `matrix[y][x] = p(y|x)`.
    Classical {
        matrix: Vec<Vec<f64>>,
    },
    DepolarizedUnitary {
        p: f64,
        unitary: MatrixRows,
    },
    Identity {
        #[serde(default = "qubit")]
        d: usize,
    },
    Dephasing {
        p: f64,
    },
    BitFlip {
        p: f64,
    },
    Depolarizing {
        p: f64,
    },
    AmplitudeDamping {
        gamma: f64,
    },
}

fn qubit() -> usize {
    2
}

impl MemberSpec {
    pub fn type_name(&self) -> &'static str {
        match self {
            MemberSpec::Unitary { .. } => "unitary",
            MemberSpec::Kraus { .. } => "kraus",
            MemberSpec::Pauli { .. } => "pauli",
            MemberSpec::Classical { .. } => "classical",
            MemberSpec::DepolarizedUnitary { .. } => "depolarized_unitary",
            MemberSpec::Identity { .. } => "identity",
            MemberSpec::Dephasing { .. } => "dephasing",
            MemberSpec::BitFlip { .. } => "bit_flip",
            MemberSpec::Depolarizing { .. } => "depolarizing",
            MemberSpec::AmplitudeDamping { .. } => "amplitude_damping",
        }
    }

    /// The named qubit channels and `pauli` as a four-vector.
    fn pauli_vector(&self) -> Option<Result<PauliFourVector, chanmask::Error>> {
        Some(match *self {
            MemberSpec::Pauli {
                probs: [p0, px, py, pz],
            } => PauliFourVector::new(p0, px, py, pz),
            MemberSpec::Identity { d: 2 } => PauliFourVector::new(1.0, 0.0, 0.0, 0.0),
            MemberSpec::Dephasing { p } => PauliFourVector::new(1.0 - p, 0.0, 0.0, p),
            MemberSpec::BitFlip { p } => PauliFourVector::new(1.0 - p, p, 0.0, 0.0),
            MemberSpec::Depolarizing { p } => {
                PauliFourVector::new(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
            }
            _ => return None,
        })
    }

    pub fn to_channel(&self, what: &str) -> Result<ChannelSpec, CliError> {
        let core = |e: chanmask::Error| CliError::schema(format!("{what}: {e}"));
        match self {
            MemberSpec::Unitary { matrix } => {
                ChannelSpec::unitary(to_matrix(matrix, what)?).map_err(core)
            }
            MemberSpec::Kraus { ops } => {
                let ops = ops
                    .iter()
                    .map(|k| to_matrix(k, what))
                    .collect::<Result<Vec<_>, _>>()?;
                let first = ops
                    .first()
                    .ok_or_else(|| CliError::schema(format!("{what}: \"ops\" is empty")))?;
                let (dout, din) = (first.rows(), first.cols());
                KrausChannel::new(din, dout, ops)
                    .map(ChannelSpec::Kraus)
                    .map_err(core)
            }
            MemberSpec::Classical { matrix } => {
                classical_from_columns(matrix, what).map(ChannelSpec::Classical)
            }
            MemberSpec::DepolarizedUnitary { p, unitary } => {
                ChannelSpec::depolarized_unitary(*p, to_matrix(unitary, what)?).map_err(core)
            }
            MemberSpec::Identity { d } if *d == 0 => {
                Err(CliError::schema(format!("{what}: identity needs d >= 1")))
            }
            MemberSpec::Identity { d } => Ok(ChannelSpec::identity(*d)),
            MemberSpec::AmplitudeDamping { gamma } => {
                ChannelSpec::amplitude_damping(*gamma).map_err(core)
            }
            other => other
                .pauli_vector()
                .expect("remaining members are Pauli channels")
                .map(ChannelSpec::Pauli)
                .map_err(core),
        }
    }
}

fn classical_from_columns(matrix: &[Vec<f64>], what: &str) -> Result<ClassicalChannel, CliError> {
    let out_size = matrix.len();
    let in_size = matrix.first().map_or(0, Vec::len);
    if out_size == 0 || in_size == 0 {
        return Err(CliError::schema(format!(
            "{what}: classical matrix is empty"
        )));
    }
    if let Some(y) = matrix.iter().position(|row| row.len() != in_size) {
        return Err(CliError::schema(format!(
            "{what}: classical matrix row {y} has the wrong length"
        )));
    }
    for x in 0..in_size {
        let total: f64 = matrix.iter().map(|row| row[x]).sum();
        if (total - 1.0).abs() > chanmask::channels::CHANNEL_TOL {
            return Err(CliError::schema(format!(
                "{what}: classical matrix column {x} sums to {total}, expected 1 (columns are p(·|x))"
            )));
        }
    }
    let probs = (0..in_size)
        .map(|x| matrix.iter().map(|row| row[x]).collect())
        .collect();
    ClassicalChannel::new(in_size, out_size, probs)
        .map_err(|e| CliError::schema(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Gate,
    Pauli,
    IdentityPair,
    IdentityFamily,
    Depolarized,
    Classical,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Gate => "gate",
            FamilyKind::Pauli => "pauli",
            FamilyKind::IdentityPair => "identity_pair",
            FamilyKind::IdentityFamily => "identity_family",
            FamilyKind::Depolarized => "depolarized",
            FamilyKind::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub tol: Option<f64>,
    pub verify_tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub version: String,
    pub kind: FamilyKind,
    pub members: Vec<MemberSpec>,
    #[serde(default)]
    pub options: FileOptions,
}

fn check_version(version: &str) -> Result<(), CliError> {
    if version != FORMAT_VERSION {
        return Err(CliError::schema(format!(
            "version: unsupported format version {version:?}, expected {FORMAT_VERSION:?}"
        )));
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

impl FamilyFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let file: Self = read_json(path)?;
        check_version(&file.version)?;
        Ok(file)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
        check_version(&file.version)?;
        Ok(file)
    }

    /// Converts the members into a typed family, enforcing the kind's rules.
    pub fn to_family(&self) -> Result<Family, CliError> {
        let kind = self.kind.name();
        if self.members.is_empty() {
            return Err(CliError::schema(format!(
                "members: kind {kind:?} needs at least one member"
            )));
        }
        let wrong = |i: usize, m: &MemberSpec, allowed: &str| {
            CliError::schema(format!(
                "members[{i}]: kind {kind:?} accepts only {allowed} members, found {:?}",
                m.type_name()
            ))
        };
        let label = |i: usize| format!("members[{i}]");
        let members = self.members.iter().enumerate();
        match self.kind {
            FamilyKind::Gate => {
                let mut us = Vec::with_capacity(self.members.len());
                for (i, m) in members {
                    match m {
                        MemberSpec::Unitary { matrix } => us.push(to_matrix(matrix, &label(i))?),
                        _ => return Err(wrong(i, m, "\"unitary\"")),
                    }
                }
                gate_family(us).map(Family::Gates)
            }
            FamilyKind::Pauli => {
                let mut ps = Vec::with_capacity(self.members.len());
                for (i, m) in members {
                    match m.pauli_vector() {
                        Some(p) => {
                            ps.push(p.map_err(|e| CliError::schema(format!("{}: {e}", label(i))))?)
                        }
                        None => {
                            return Err(wrong(
                                i,
                                m,
                                "Pauli (pauli, dephasing, bit_flip, depolarizing, qubit identity)",
                            ))
                        }
                    }
                }
                Ok(Family::Pauli(ps))
            }
            FamilyKind::IdentityPair => {
                if self.members.len() != 1 {
                    return Err(CliError::schema(format!(
                        "members: kind \"identity_pair\" takes exactly one member (the channel paired with the identity), found {}",
                        self.members.len()
                    )));
                }
                let e = self.members[0].to_channel(&label(0))?;
                require_qubit(&e, 0)?;
                Ok(Family::IdentityPair(e))
            }
            FamilyKind::IdentityFamily => {
                let mut es = Vec::with_capacity(self.members.len());
                for (i, m) in members {
                    let e = m.to_channel(&label(i))?;
                    require_qubit(&e, i)?;
                    es.push(e);
                }
                Ok(Family::IdentityFamily(es))
            }
            FamilyKind::Depolarized => {
                let mut shared = None;
                let mut us = Vec::with_capacity(self.members.len());
                for (i, m) in members {
                    let MemberSpec::DepolarizedUnitary { p, unitary } = m else {
                        return Err(wrong(i, m, "\"depolarized_unitary\""));
                    };
                    match shared {
                        None => shared = Some(*p),
                        Some(p0) if p0 != *p => {
                            return Err(CliError::schema(format!(
                                "{}: all members of a depolarized family share p (found {p} after {p0})",
                                label(i)
                            )))
                        }
                        Some(_) => {}
                    }
                    us.push(to_matrix(unitary, &label(i))?);
                }
                let p = shared.expect("members is nonempty");
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::schema(format!(
                        "members: depolarizing weight p = {p} is outside [0, 1]"
                    )));
                }
                Ok(Family::Depolarized {
                    p,
                    unitaries: gate_family(us)?,
                })
            }
            FamilyKind::Classical => {
                let mut cs = Vec::with_capacity(self.members.len());
                for (i, m) in members {
                    match m {
                        MemberSpec::Classical { matrix } => {
                            cs.push(classical_from_columns(matrix, &label(i))?)
                        }
                        _ => return Err(wrong(i, m, "\"classical\"")),
                    }
                }
                Family::classical(cs).map_err(|e| CliError::schema(format!("members: {e}")))
            }
        }
    }
}

fn gate_family(us: Vec<ComplexMatrix>) -> Result<GateFamily, CliError> {
    GateFamily::new(us).map_err(|e| CliError::schema(format!("members: {e}")))
}

fn require_qubit(e: &ChannelSpec, i: usize) -> Result<(), CliError> {
    if e.din() != 2 || e.dout() != 2 {
        return Err(CliError::schema(format!(
            "members[{i}]: identity families need qubit channels, found {}→{}",
            e.din(),
            e.dout()
        )));
    }
    Ok(())
}

/// A single channel, as read by `bloch`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub version: String,
    pub channel: MemberSpec,
}

impl ChannelFile {
    pub fn read(path: &Path) -> Result<ChannelSpec, CliError> {
        let file: Self = read_json(path)?;
        check_version(&file.version)?;
        file.channel.to_channel("channel")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DimsRepr {
    pub dim_a: usize,
    pub dim_b: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskerFile {
    pub version: String,
    pub dims: DimsRepr,
    pub matrix: MatrixRows,
}

#[derive(Serialize)]
struct MaskerFileOut<'a> {
    version: &'static str,
    dims: DimsRepr,
    matrix: &'a ComplexMatrix,
}

impl MaskerFile {
    /// Masker file text; floats carry 17 significant digits.
    pub fn render(m: &Masker) -> String {
        let out = MaskerFileOut {
            version: FORMAT_VERSION,
            dims: DimsRepr {
                dim_a: m.dims().dim_a,
                dim_b: m.dims().dim_b,
            },
            matrix: m.matrix(),
        };
        crate::json::to_string(&out).expect("masker serialization cannot fail")
    }

    pub fn write(m: &Masker, path: &Path) -> Result<(), CliError> {
        fs::write(path, Self::render(m))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Masker, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
        file.into_masker()
    }

    pub fn read(path: &Path) -> Result<Masker, CliError> {
        let file: Self = read_json(path)?;
        file.into_masker()
    }

    fn into_masker(self) -> Result<Masker, CliError> {
        check_version(&self.version)?;
        let matrix = to_matrix(&self.matrix, "matrix")?;
        let dims = BipartiteDims::new(self.dims.dim_a, self.dims.dim_b)
            .map_err(|e| CliError::schema(format!("dims: {e}")))?;
        Masker::with_tolerance(matrix, dims, MASKER_FILE_TOL)
            .map_err(|e| CliError::schema(format!("matrix: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(text: &str) -> Result<Family, CliError> {
        FamilyFile::parse(text)?.to_family()
    }

    #[test]
    fn gate_family_with_real_and_complex_entries() {
        let f = family(
            r#"{"version": "1", "kind": "gate", "members": [
                {"type": "unitary", "matrix": [[0, 1], [1, 0]]},
                {"type": "unitary", "matrix": [[[0, 0], [-1, 0]], [[1, 0], [0, 0]]]}
            ]}"#,
        )
        .unwrap();
        assert!(matches!(f, Family::Gates(ref g) if g.len() == 2));
    }

    #[test]
    fn kind_rules_are_enforced() {
        let err = family(
            r#"{"version": "1", "kind": "gate", "members": [{"type": "dephasing", "p": 0.2}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("members[0]"), "{err}");
        let err = family(r#"{"version": "1", "kind": "pauli", "members": []}"#).unwrap_err();
        assert!(err.to_string().contains("at least one member"));
        let err = family(
            r#"{"version": "1", "kind": "identity_pair", "members": [{"type": "identity"}, {"type": "identity"}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("exactly one"));
        let err = family(
            r#"{"version": "1", "kind": "identity_family", "members": [{"type": "identity", "d": 3}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("qubit"));
    }

    #[test]
    fn named_pauli_members() {
        let f = family(
            r#"{"version": "1", "kind": "pauli", "members": [
                {"type": "depolarizing", "p": 0.2}, {"type": "bit_flip", "p": 0.1},
                {"type": "pauli", "probs": [0.7, 0.1, 0.1, 0.1]}, {"type": "identity"}
            ]}"#,
        )
        .unwrap();
        let Family::Pauli(ps) = f else { panic!() };
        assert_eq!(ps[0].probs(), [0.85, 0.05, 0.05, 0.05]);
        assert_eq!(ps[3].probs(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn classical_columns_must_sum_to_one() {
        let err = family(
            r#"{"version": "1", "kind": "classical", "members": [
            {"type": "classical", "matrix": [[0.5, 0.2], [0.6, 0.8]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("column 0"), "{err}");
        let ok = family(
            r#"{"version": "1", "kind": "classical", "members": [
            {"type": "classical", "matrix": [[0.5, 0.2], [0.5, 0.8]]}]}"#,
        )
        .unwrap();
        let Family::Classical(cs) = ok else { panic!() };
        assert_eq!(cs[0].prob(1, 1), 0.8);
    }

    #[test]
    fn depolarized_members_share_p() {
        let err = family(
            r#"{"version": "1", "kind": "depolarized", "members": [
            {"type": "depolarized_unitary", "p": 0.5, "unitary": [[1, 0], [0, 1]]},
            {"type": "depolarized_unitary", "p": 0.4, "unitary": [[0, 1], [1, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("share p"));
    }

    #[test]
    fn unknown_fields_and_versions_rejected() {
        assert!(FamilyFile::parse(r#"{"version": "2", "kind": "gate", "members": []}"#).is_err());
        assert!(FamilyFile::parse(
            r#"{"version": "1", "kind": "gate", "members": [], "extra": 1}"#
        )
        .is_err());
        assert!(FamilyFile::parse(
            r#"{"version": "1", "kind": "pauli", "members": [{"type": "pauli", "probs": [1,0,0,0], "q": 1}]}"#
        )
        .is_err());
        assert!(FamilyFile::parse(r#"{"version": "1", "kind": "qutrit", "members": []}"#).is_err());
    }

    #[test]
    fn masker_file_round_trip_is_bit_exact() {
        let m = chanmask::masking::synthesize_classical_masker(3).unwrap();
        let back = MaskerFile::parse(&MaskerFile::render(&m)).unwrap();
        assert_eq!(back.dims(), m.dims());
        for (a, b) in back.matrix().as_slice().iter().zip(m.matrix().as_slice()) {
            assert_eq!(
                (a.re.to_bits(), a.im.to_bits()),
                (b.re.to_bits(), b.im.to_bits())
            );
        }
    }

    #[test]
    fn masker_file_must_be_isometry() {
        let err = MaskerFile::parse(
            r#"{"version": "1", "dims": {"dim_a": 2, "dim_b": 2}, "matrix": [[1, 0], [0, 0], [0, 0], [0, 0.9]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("isometry"), "{err}");
        assert!(MaskerFile::parse(
            r#"{"version": "1", "dims": {"dim_a": 2, "dim_b": 1}, "matrix": [[1, 0], [0, 0], [0, 0], [0, 1]]}"#
        )
        .is_err());
    }
}
