use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{commutator_norm, ComplexMatrix, PHASE_CLUSTER_TOL};
use crate::error::{Error, Result};

/// Entries at or below this modulus are skipped when fixing eigenvector phases.
const PHASE_PIVOT_MIN: f64 = 1e-8;

/// Random-combination attempts before falling back to subspace refinement.
const RANDOM_RETRIES: usize = 8;

/// Eigenpairs of a Hermitian matrix: ascending values, orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Rotates a column vector so its first significant entry is real positive.
pub fn fix_phase(v: &mut ComplexMatrix, col: usize) {
    let pivot = (0..v.rows())
        .map(|r| v[(r, col)])
        .find(|z| z.norm() > PHASE_PIVOT_MIN);
    if let Some(p) = pivot {
        let rot = p.conj() / p.norm();
        for r in 0..v.rows() {
            v[(r, col)] *= rot;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before diagonalization. Eigenvalues come back in
/// ascending order and each eigenvector carries the phase convention of
/// [`fix_phase`].
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eig_hermitian",
            expected: "square matrix".into(),
            found: format!("{}x{}", h.rows(), h.cols()),
        });
    }
    let n = h.rows();
    let deviation = h.hermitian_deviation();
    if deviation > 1e-10 * n.max(1) as f64 {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let raw = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
    let mut vectors = raw.select_columns(&order);
    for c in 0..n {
        fix_phase(&mut vectors, c);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Largest `‖F†wF − diag‖_F` over `ws`.
pub fn max_off_diagonal(basis: &ComplexMatrix, ws: &[ComplexMatrix]) -> f64 {
    let bd = basis.adjoint();
    ws.iter()
        .map(|w| (&(&bd * w) * basis).off_diagonal_norm())
        .fold(0.0, f64::max)
}

/// A common orthonormal eigenbasis (as columns) of pairwise commuting unitaries.
///
/// Tries random Hermitian combinations `Σ αᵢ(wᵢ+wᵢ†) + βᵢ·i(wᵢ−wᵢ†)` seeded from
/// `seed`, then falls back to recursive eigenspace refinement. The result is
/// accepted only when every `F†wᵢF` has off-diagonal mass ≤ `tol·d`.
pub fn simultaneous_eigenbasis(ws: &[ComplexMatrix], tol: f64, seed: u64) -> Result<ComplexMatrix> {
    let first = ws.first().ok_or(Error::EmptyFamily)?;
    let d = first.rows();
    let scaled_tol = tol * d as f64;
    for w in ws {
        if !w.is_square() || w.rows() != d {
            return Err(Error::DimensionMismatch {
                context: "simultaneous_eigenbasis",
                expected: format!("{d}x{d}"),
                found: format!("{}x{}", w.rows(), w.cols()),
            });
        }
        let deviation = w.isometry_deviation();
        if deviation > scaled_tol {
            return Err(Error::NotUnitary { deviation });
        }
    }
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            let norm = commutator_norm(&ws[i], &ws[j])?;
            if norm > scaled_tol {
                return Err(Error::NotCommuting { i, j, norm });
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = Complex64::new(0.0, 1.0);
    for _ in 0..=RANDOM_RETRIES {
        let mut h = ComplexMatrix::zeros(d, d);
        for w in ws {
            let wd = w.adjoint();
            let alpha: f64 = rng.random_range(-1.0..=1.0);
            let beta: f64 = rng.random_range(-1.0..=1.0);
            h = &h + &(w + &wd).scale_real(alpha);
            h = &h + &(w - &wd).scale(i * beta);
        }
        let basis = eig_hermitian(&h)?.vectors;
        if max_off_diagonal(&basis, ws) <= scaled_tol {
            return Ok(basis);
        }
    }

    let basis = refine(ws)?;
    let residual = max_off_diagonal(&basis, ws);
    if residual <= scaled_tol {
        Ok(basis)
    } else {
        Err(Error::DiagonalizationFailed(format!(
            "off-diagonal residual {residual:e} exceeds {scaled_tol:e} after refinement"
        )))
    }
}

/// Groups eigenvalues that lie within `gap` of their sorted neighbour.
fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if v - values[*last.last().unwrap()] <= gap => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

/// Eigenbasis of a single normal matrix, built deterministically from its
/// Hermitian and anti-Hermitian parts.
fn normal_eigenbasis(w: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = w.rows();
    let wd = w.adjoint();
    let re_part = (w + &wd).scale_real(0.5);
    let im_part = (w - &wd).scale(Complex64::new(0.0, -0.5));
    let outer = eig_hermitian(&re_part)?;
    let mut columns = Vec::with_capacity(d);
    for group in cluster_sorted(&outer.values, PHASE_CLUSTER_TOL) {
        let v = outer.vectors.select_columns(&group);
        let projected = &(&v.adjoint() * &im_part) * &v;
        let inner = eig_hermitian(&(&projected + &projected.adjoint()).scale_real(0.5))?;
        let sub = &v * &inner.vectors;
        columns.extend((0..sub.cols()).map(|c| sub.column(c)));
    }
    ComplexMatrix::from_columns(&columns)
}

fn refine(ws: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = ws.first().map_or(0, ComplexMatrix::rows);
    if ws.is_empty() || d <= 1 {
        return Ok(ComplexMatrix::identity(d));
    }
    let basis = normal_eigenbasis(&ws[0])?;
    let phases: Vec<f64> = (0..d)
        .map(|k| {
            let v = basis.column(k);
            (&(&v.adjoint() * &ws[0]) * &v)[(0, 0)].arg()
        })
        .collect();
    let mut columns = Vec::with_capacity(d);
    for group in cluster_phases(&phases) {
        let v = basis.select_columns(&group);
        let vd = v.adjoint();
        let rest: Vec<ComplexMatrix> = ws[1..].iter().map(|w| &(&vd * w) * &v).collect();
        let sub = if rest.is_empty() {
            ComplexMatrix::identity(group.len())
        } else {
            refine(&rest)?
        };
        let lifted = &v * &sub;
        columns.extend((0..lifted.cols()).map(|c| lifted.column(c)));
    }
    let mut out = ComplexMatrix::from_columns(&columns)?;
    for c in 0..out.cols() {
        fix_phase(&mut out, c);
    }
    Ok(out)
}

/// Groups eigenphases (radians) whose angular distance around the circle is at
/// most the phase-cluster tolerance, chaining through neighbours. Clusters are
/// returned in ascending phase order with indices into `phases`.
pub fn cluster_phases(phases: &[f64]) -> Vec<Vec<usize>> {
    if phases.is_empty() {
        return vec![];
    }
    let wrapped: Vec<f64> = phases
        .iter()
        .map(|&p| {
            let r = p.rem_euclid(2.0 * PI);
            if r > PI {
                r - 2.0 * PI
            } else {
                r
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..wrapped.len()).collect();
    order.sort_by(|&a, &b| wrapped[a].total_cmp(&wrapped[b]));
    let sorted: Vec<f64> = order.iter().map(|&k| wrapped[k]).collect();
    let mut clusters: Vec<Vec<usize>> = cluster_sorted(&sorted, PHASE_CLUSTER_TOL)
        .into_iter()
        .map(|g| g.into_iter().map(|k| order[k]).collect())
        .collect();
    if clusters.len() > 1 {
        let lo = sorted[0];
        let hi = sorted[sorted.len() - 1];
        if lo + 2.0 * PI - hi <= PHASE_CLUSTER_TOL {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }
    clusters
}

/// Eigenphases and eigenvectors of a unitary.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryEigen {
    /// Column groups of eigenvectors sharing an eigenphase.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        cluster_phases(&self.phases)
    }
}

pub fn unitary_eigen(u: &ComplexMatrix, tol: f64, seed: u64) -> Result<UnitaryEigen> {
    let vectors = simultaneous_eigenbasis(std::slice::from_ref(u), tol, seed)?;
    let phases = (0..vectors.cols())
        .map(|k| {
            let v = vectors.column(k);
            (&(&v.adjoint() * u) * &v)[(0, 0)].arg()
        })
        .collect();
    Ok(UnitaryEigen { phases, vectors })
}
