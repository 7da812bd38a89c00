use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use super::{ChannelSpec, CHANNEL_TOL};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::ComplexMatrix;

/// Coordinates below this magnitude are ignored when orienting a direction.
const ORIENTATION_EPS: f64 = 1e-10;

/// Real affine action `n ↦ A·n + b` of a qubit channel on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochAffine {
    pub a: [[f64; 3]; 3],
    pub b: [f64; 3],
}

impl BlochAffine {
    pub fn apply(&self, n: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|j| self.a[i][j] * n[j]).sum::<f64>() + self.b[i])
    }

    pub fn b_norm(&self) -> f64 {
        norm3(self.b)
    }

    /// `‖A·n + b − n‖`.
    pub fn fixed_point_residual(&self, n: [f64; 3]) -> f64 {
        let image = self.apply(n);
        norm3(std::array::from_fn(|i| image[i] - n[i]))
    }

    pub fn operator_norm(&self) -> f64 {
        self.matrix().singular_values().max()
    }

    /// Eigenvalues of `A` as complex numbers.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.matrix()
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.a[i][j])
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn require_qubit(spec: &ChannelSpec, what: &'static str) -> Result<()> {
    if spec.din() != 2 {
        return Err(Error::UnsupportedDimension {
            what,
            dim: spec.din(),
        });
    }
    if spec.dout() != 2 {
        return Err(Error::UnsupportedDimension {
            what,
            dim: spec.dout(),
        });
    }
    Ok(())
}

/// `A[i][j] = ½Tr[σᵢE(σⱼ)]`, `b[i] = ½Tr[σᵢE(1)]`.
pub fn bloch_affine(spec: &ChannelSpec) -> Result<BlochAffine> {
    require_qubit(spec, "Bloch affine form")?;
    let [id, sx, sy, sz] = gates::paulis();
    let sigma = [sx, sy, sz];
    let half_trace = |p: &ComplexMatrix, q: &ComplexMatrix| -> Result<f64> {
        let t = (p * q).trace() * 0.5;
        if t.im.abs() > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "Bloch coefficient has imaginary part {:e}",
                t.im
            )));
        }
        Ok(t.re)
    };
    let mut a = [[0.0; 3]; 3];
    for j in 0..3 {
        let image = spec.apply(&sigma[j])?;
        for i in 0..3 {
            a[i][j] = half_trace(&sigma[i], &image)?;
        }
    }
    let image = spec.apply(&id)?;
    let mut b = [0.0; 3];
    for i in 0..3 {
        b[i] = half_trace(&sigma[i], &image)?;
    }
    Ok(BlochAffine { a, b })
}

/// True iff `‖E(1) − 1‖_F ≤ tol`. Channels that change dimension are never unital.
pub fn is_unital(spec: &ChannelSpec, tol: f64) -> bool {
    let d = spec.din();
    if spec.dout() != d {
        return false;
    }
    let id = ComplexMatrix::identity(d);
    spec.apply(&id)
        .map(|out| out.distance(&id) <= tol)
        .unwrap_or(false)
}

/// Pure states left invariant by a qubit channel, as unit Bloch vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "directions", rename_all = "snake_case")]
pub enum PureFixedPointResult {
    None,
    Directions(Vec<[f64; 3]>),
    AllDirections,
}

impl PureFixedPointResult {
    pub fn directions(&self) -> &[[f64; 3]] {
        match self {
            PureFixedPointResult::Directions(v) => v,
            _ => &[],
        }
    }
}

/// Flips `v` so its last significant coordinate is positive.
pub(crate) fn orient(v: [f64; 3]) -> [f64; 3] {
    match v.iter().rev().find(|x| x.abs() > ORIENTATION_EPS) {
        Some(&x) if x < 0.0 => v.map(|c| -c),
        _ => v,
    }
}

/// Unit vectors `n̂` with `A·n̂ + b = n̂`.
///
/// Solves `(A − 1)·n = −b` through the SVD of `A − 1`: the minimum-norm
/// solution plus any unit-length completion inside the numerical kernel
/// (singular values ≤ `tol`). Each candidate must satisfy the affine equation
/// within `tol` and map its own pure state to itself within `10·tol`.
pub fn pure_fixed_points(spec: &ChannelSpec, tol: f64) -> Result<PureFixedPointResult> {
    let affine = bloch_affine(spec)?;
    let a = affine.matrix();
    let b = Vector3::from(affine.b);
    let shifted = a - Matrix3::identity();
    if shifted.norm() <= tol && b.norm() <= tol {
        return Ok(PureFixedPointResult::AllDirections);
    }

    let svd = shifted.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut particular = Vector3::zeros();
    let mut kernel = Vec::new();
    for k in 0..3 {
        let sigma = svd.singular_values[k];
        let right = v_t.row(k).transpose();
        if sigma > tol {
            particular += right * (u.column(k).dot(&(-b)) / sigma);
        } else {
            kernel.push(right);
        }
    }

    let p_norm_sq = particular.norm_squared();
    let mut candidates: Vec<Vector3<f64>> = Vec::new();
    match kernel.len() {
        0 => candidates.push(particular),
        1 | 2 => {
            let slack = 1.0 - p_norm_sq;
            if slack >= -tol {
                let t = slack.max(0.0).sqrt();
                for k in &kernel {
                    let k = Vector3::from(orient([k[0], k[1], k[2]]));
                    candidates.push(particular + k * t);
                    candidates.push(particular - k * t);
                }
            }
        }
        _ => {}
    }

    let mut found: Vec<[f64; 3]> = Vec::new();
    for cand in candidates {
        let norm = cand.norm();
        if (norm - 1.0).abs() > tol || norm == 0.0 {
            continue;
        }
        let n: [f64; 3] = (cand / norm).into();
        if affine.fixed_point_residual(n) > tol {
            continue;
        }
        let rho = gates::bloch_state(n);
        if spec.apply(&rho)?.distance(&rho) > 10.0 * tol {
            continue;
        }
        let duplicate = found
            .iter()
            .any(|f| norm3(std::array::from_fn(|i| f[i] - n[i])) <= tol);
        if !duplicate {
            found.push(n);
        }
    }
    if found.is_empty() {
        Ok(PureFixedPointResult::None)
    } else {
        Ok(PureFixedPointResult::Directions(found))
    }
}
