//! Seeded random generators for test fixtures and demos.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::ClassicalChannel;
use crate::linalg::ComplexMatrix;

/// Deterministic generator used throughout the crate's tests and demos.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random isometry `C^cols → C^rows` from modified Gram-Schmidt on a Ginibre
/// matrix; Haar-distributed for square shapes.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        let g = ginibre(rng, rows, cols);
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
        let mut degenerate = false;
        for c in 0..cols {
            let mut v: Vec<Complex64> = (0..rows).map(|r| g[(r, c)]).collect();
            for _ in 0..2 {
                for prev in &q {
                    let overlap: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
                    for (x, p) in v.iter_mut().zip(prev) {
                        *x -= overlap * p;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
        }
        if !degenerate {
            return ComplexMatrix::from_fn(rows, cols, |r, c| q[c][r]);
        }
    }
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    isometry(rng, d, d)
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random full-rank density matrix.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

/// Random unit vector as a `d×1` matrix.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    isometry(rng, d, 1)
}

/// Uniformly random direction on the unit sphere.
pub fn unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

/// Random probability vector of length `n` (flat Dirichlet).
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| -rng.random_range(f64::EPSILON..1.0f64).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn classical_channel<R: Rng + ?Sized>(
    rng: &mut R,
    in_size: usize,
    out_size: usize,
) -> ClassicalChannel {
    let probs = (0..in_size)
        .map(|_| probability_vector(rng, out_size))
        .collect();
    ClassicalChannel::new(in_size, out_size, probs).expect("sampled distributions are normalized")
}

/// Random unitaries `W·V·diag(e^{iθ})·V†` sharing the eigenbasis `V` and a
/// common left factor `W`, so that `{U₁†Uₙ}` commutes pairwise.
pub fn commuting_gate_family<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    size: usize,
) -> Vec<ComplexMatrix> {
    let v = unitary(rng, d);
    let w = unitary(rng, d);
    (0..size)
        .map(|_| {
            let phases: Vec<Complex64> = (0..d)
                .map(|_| {
                    Complex64::from_polar(
                        1.0,
                        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
                    )
                })
                .collect();
            let diag = ComplexMatrix::from_diagonal(&phases);
            &w * &(&(&v * &diag) * &v.adjoint())
        })
        .collect()
}
