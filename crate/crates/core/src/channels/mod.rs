//! Channel representations and conversions.
//!
//! Every representation is lowered to Kraus form for evaluation. The Choi
//! matrix convention is `Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)`: input on the first factor,
//! output on the second, entangled operator unnormalized.

pub(crate) mod bloch;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{tensor, ComplexMatrix};

pub use bloch::{bloch_affine, is_unital, pure_fixed_points, BlochAffine, PureFixedPointResult};

/// Tolerance for trace preservation and normalization checks on construction.
pub const CHANNEL_TOL: f64 = 1e-10;
/// Slightly negative probabilities down to this value are clamped to zero.
const NEGATIVE_CLAMP: f64 = -1e-12;

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Position in `(p₀, p_x, p_y, p_z)`.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => gates::x(),
            Axis::Y => gates::y(),
            Axis::Z => gates::z(),
        }
    }

    pub fn unit_vector(self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[self.index() - 1] = 1.0;
        v
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        f.write_str(s)
    }
}

fn check_probability(name: &str, p: f64) -> Result<f64> {
    if !(NEGATIVE_CLAMP..=1.0 + CHANNEL_TOL).contains(&p) {
        return Err(Error::InvalidProbability(format!(
            "{name} = {p} is outside [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Probability four-vector `(p₀, p_x, p_y, p_z)` of a qubit Pauli channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliFourVector {
    probs: [f64; 4],
}

impl PauliFourVector {
    pub fn new(p0: f64, px: f64, py: f64, pz: f64) -> Result<Self> {
        let raw = [p0, px, py, pz];
        let mut probs = [0.0; 4];
        for (k, (&p, slot)) in raw.iter().zip(probs.iter_mut()).enumerate() {
            *slot = check_probability(["p0", "px", "py", "pz"][k], p)?;
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > CHANNEL_TOL {
            return Err(Error::InvalidProbability(format!(
                "Pauli probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn p0(&self) -> f64 {
        self.probs[0]
    }

    pub fn p(&self, axis: Axis) -> f64 {
        self.probs[axis.index()]
    }

    /// `p₀ + p_k`, the quantity that must be constant for a maskable family.
    pub fn weight_with(&self, axis: Axis) -> f64 {
        self.p0() + self.p(axis)
    }
}

/// A channel `ρ ↦ Σ K ρ K†` with `din`-dimensional input and `dout`-dimensional output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KrausChannel {
    din: usize,
    dout: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(din: usize, dout: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidChannel(
                "at least one Kraus operator is required".into(),
            ));
        }
        if din == 0 || dout == 0 {
            return Err(Error::InvalidChannel(
                "channel dimensions must be positive".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(din, din);
        for (k, op) in ops.iter().enumerate() {
            if op.rows() != dout || op.cols() != din {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator",
                    expected: format!("{dout}x{din}"),
                    found: format!("{}x{} (operator {k})", op.rows(), op.cols()),
                });
            }
            sum = &sum + &(&op.adjoint() * op);
        }
        let deviation = sum.distance(&ComplexMatrix::identity(din));
        if deviation > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (‖ΣK†K − 1‖ = {deviation:e})"
            )));
        }
        Ok(Self { din, dout, ops })
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }
}

/// Classical channel given by conditional distributions `probs[x][y] = p(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalChannel {
    in_size: usize,
    out_size: usize,
    probs: Vec<Vec<f64>>,
}

impl ClassicalChannel {
    pub fn new(in_size: usize, out_size: usize, probs: Vec<Vec<f64>>) -> Result<Self> {
        if in_size == 0 || out_size == 0 {
            return Err(Error::InvalidChannel(
                "alphabet sizes must be positive".into(),
            ));
        }
        if probs.len() != in_size {
            return Err(Error::DimensionMismatch {
                context: "classical channel inputs",
                expected: in_size.to_string(),
                found: probs.len().to_string(),
            });
        }
        let mut clean = Vec::with_capacity(in_size);
        for (x, dist) in probs.into_iter().enumerate() {
            if dist.len() != out_size {
                return Err(Error::DimensionMismatch {
                    context: "classical channel outputs",
                    expected: out_size.to_string(),
                    found: format!("{} (input {x})", dist.len()),
                });
            }
            let dist = dist
                .into_iter()
                .enumerate()
                .map(|(y, p)| check_probability(&format!("p({y}|{x})"), p))
                .collect::<Result<Vec<f64>>>()?;
            let total: f64 = dist.iter().sum();
            if (total - 1.0).abs() > CHANNEL_TOL {
                return Err(Error::InvalidProbability(format!(
                    "distribution p(·|{x}) sums to {total}, not 1"
                )));
            }
            clean.push(dist);
        }
        Ok(Self {
            in_size,
            out_size,
            probs: clean,
        })
    }

    /// Deterministic channel of a permutation, `x ↦ perm[x]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let probs = perm
            .iter()
            .map(|&y| {
                let mut row = vec![0.0; d];
                if y < d {
                    row[y] = 1.0;
                }
                row
            })
            .collect();
        Self::new(d, d, probs)
    }

    pub fn in_size(&self) -> usize {
        self.in_size
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    /// `p(y|x)`.
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.probs[x][y]
    }
}

/// A quantum channel in one of several representations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelSpec {
    Unitary {
        matrix: ComplexMatrix,
    },
    Kraus(KrausChannel),
    Pauli(PauliFourVector),
    Classical(ClassicalChannel),
    /// `p·UρU† + (1−p)·1/d`.
    DepolarizedUnitary {
        p: f64,
        unitary: ComplexMatrix,
    },
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() || u.rows() == 0 {
        return Err(Error::DimensionMismatch {
            context: "unitary",
            expected: "non-empty square matrix".into(),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let deviation = u.isometry_deviation();
    if deviation > CHANNEL_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

impl ChannelSpec {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        Ok(ChannelSpec::Unitary { matrix: u })
    }

    pub fn depolarized_unitary(p: f64, u: ComplexMatrix) -> Result<Self> {
        let p = check_probability("p", p)?;
        check_unitary(&u)?;
        Ok(ChannelSpec::DepolarizedUnitary { p, unitary: u })
    }

    pub fn identity(d: usize) -> Self {
        ChannelSpec::Unitary {
            matrix: ComplexMatrix::identity(d),
        }
    }

    pub fn pauli(p0: f64, px: f64, py: f64, pz: f64) -> Result<Self> {
        PauliFourVector::new(p0, px, py, pz).map(ChannelSpec::Pauli)
    }

    /// Z-dephasing `(1−p)ρ + p·ZρZ`.
    pub fn dephasing(p: f64) -> Result<Self> {
        Self::pauli(1.0 - p, 0.0, 0.0, p)
    }

    /// Bit flip `(1−p)ρ + p·XρX`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::pauli(1.0 - p, p, 0.0, 0.0)
    }

    /// Depolarizing channel `(1−p)ρ + p·1/2`, i.e. Pauli `(1−3p/4, p/4, p/4, p/4)`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::pauli(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
    }

    /// Amplitude damping with `K₀ = |0⟩⟨0| + √(1−γ)|1⟩⟨1|`, `K₁ = √γ|0⟩⟨1|`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        let gamma = check_probability("gamma", gamma)?;
        let k0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]])?;
        let k1 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?;
        Ok(ChannelSpec::Kraus(KrausChannel::new(2, 2, vec![k0, k1])?))
    }

    pub fn din(&self) -> usize {
        match self {
            ChannelSpec::Unitary { matrix } => matrix.cols(),
            ChannelSpec::Kraus(k) => k.din,
            ChannelSpec::Pauli(_) => 2,
            ChannelSpec::Classical(c) => c.in_size,
            ChannelSpec::DepolarizedUnitary { unitary, .. } => unitary.cols(),
        }
    }

    pub fn dout(&self) -> usize {
        match self {
            ChannelSpec::Unitary { matrix } => matrix.rows(),
            ChannelSpec::Kraus(k) => k.dout,
            ChannelSpec::Pauli(_) => 2,
            ChannelSpec::Classical(c) => c.out_size,
            ChannelSpec::DepolarizedUnitary { unitary, .. } => unitary.rows(),
        }
    }

    /// Re-checks the variant invariants, for values built through the public variants.
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Unitary { matrix } => check_unitary(matrix),
            ChannelSpec::DepolarizedUnitary { p, unitary } => {
                check_probability("p", *p)?;
                check_unitary(unitary)
            }
            ChannelSpec::Kraus(_) | ChannelSpec::Pauli(_) | ChannelSpec::Classical(_) => Ok(()),
        }
    }

    /// Kraus operators of the channel; zero-weight terms are dropped.
    pub fn to_kraus(&self) -> KrausChannel {
        let ops = match self {
            ChannelSpec::Unitary { matrix } => vec![matrix.clone()],
            ChannelSpec::Kraus(k) => return k.clone(),
            ChannelSpec::Pauli(pv) => gates::paulis()
                .into_iter()
                .zip(pv.probs)
                .filter(|(_, p)| *p > 0.0)
                .map(|(s, p)| s.scale_real(p.sqrt()))
                .collect(),
            ChannelSpec::Classical(c) => {
                let mut ops = Vec::new();
                for x in 0..c.in_size {
                    for y in 0..c.out_size {
                        let p = c.probs[x][y];
                        if p > 0.0 {
                            let mut k = ComplexMatrix::zeros(c.out_size, c.in_size);
                            k[(y, x)] = Complex64::new(p.sqrt(), 0.0);
                            ops.push(k);
                        }
                    }
                }
                ops
            }
            ChannelSpec::DepolarizedUnitary { p, unitary } => {
                let d = unitary.rows();
                let mut ops = Vec::new();
                if *p > 0.0 {
                    ops.push(unitary.scale_real(p.sqrt()));
                }
                if *p < 1.0 {
                    let w = ((1.0 - p) / d as f64).sqrt();
                    for i in 0..d {
                        for j in 0..d {
                            ops.push(ComplexMatrix::unit(d, i, j).scale_real(w));
                        }
                    }
                }
                ops
            }
        };
        KrausChannel {
            din: self.din(),
            dout: self.dout(),
            ops,
        }
    }

    /// `E(ρ)`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let din = self.din();
        if !rho.is_square() || rho.rows() != din {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: format!("{din}x{din}"),
                found: format!("{}x{}", rho.rows(), rho.cols()),
            });
        }
        Ok(self.apply_unchecked(rho))
    }

    fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self {
            ChannelSpec::Unitary { matrix } => matrix.conjugate(rho),
            _ => {
                let kraus = self.to_kraus();
                kraus
                    .ops
                    .iter()
                    .fold(ComplexMatrix::zeros(kraus.dout, kraus.dout), |acc, k| {
                        &acc + &k.conjugate(rho)
                    })
            }
        }
    }

    /// Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let din = self.din();
        let dout = self.dout();
        let mut out = ComplexMatrix::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                let block = self.apply_unchecked(&ComplexMatrix::unit(din, i, j));
                out = &out + &tensor(&ComplexMatrix::unit(din, i, j), &block);
            }
        }
        out
    }

    /// `ρ ↦ post·E(pre·ρ·pre†)·post†`, returned in Kraus form.
    pub fn conjugate(&self, pre: &ComplexMatrix, post: &ComplexMatrix) -> Result<ChannelSpec> {
        let (din, dout) = (self.din(), self.dout());
        if !pre.is_square() || pre.rows() != din {
            return Err(Error::DimensionMismatch {
                context: "pre-unitary",
                expected: format!("{din}x{din}"),
                found: format!("{}x{}", pre.rows(), pre.cols()),
            });
        }
        if !post.is_square() || post.rows() != dout {
            return Err(Error::DimensionMismatch {
                context: "post-unitary",
                expected: format!("{dout}x{dout}"),
                found: format!("{}x{}", post.rows(), post.cols()),
            });
        }
        check_unitary(pre)?;
        check_unitary(post)?;
        let ops = self
            .to_kraus()
            .ops
            .iter()
            .map(|k| &(post * k) * pre)
            .collect();
        Ok(ChannelSpec::Kraus(KrausChannel::new(din, dout, ops)?))
    }
}
