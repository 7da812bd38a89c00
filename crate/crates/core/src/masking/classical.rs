use num_complex::Complex64;
use serde::Serialize;

use super::Masker;
use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, ComplexMatrix};

/// Largest alphabet for the exhaustive classical search (`16·15·14·13` injections).
pub const MAX_SEARCH_DIM: usize = 4;

/// Fourier masker `|j⟩ ↦ d^{−1/2} Σ_k w^{kj}|kk⟩`, `w = e^{2πi/d}`, indices from 0.
pub fn synthesize_classical_masker(d: usize) -> Result<Masker> {
    if d == 0 {
        return Err(Error::InvalidArgument("Fourier masker needs d >= 1".into()));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let mut m = ComplexMatrix::zeros(d * d, d);
    for k in 0..d {
        for j in 0..d {
            let angle = 2.0 * std::f64::consts::PI * ((k * j) % d) as f64 / d as f64;
            m[(k * d + k, j)] = Complex64::from_polar(scale, angle);
        }
    }
    Masker::new(m, BipartiteDims::new(d, d)?)
}

/// First failure of an injective encoding to hide which permutation was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: usize,
    pub perms: (usize, usize),
    /// Encoded `(a, b)` symbol pairs after each of the two permutations.
    pub pairs: ((usize, usize), (usize, usize)),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub d: usize,
    pub injection_count: usize,
    /// True iff every injection has a counterexample.
    pub violating_all: bool,
    pub first_counterexample_per_injection: Vec<Option<Counterexample>>,
}

impl SearchReport {
    /// Number of injections that mask every permutation.
    pub fn masking_injections(&self) -> usize {
        self.first_counterexample_per_injection
            .iter()
            .filter(|c| c.is_none())
            .count()
    }
}

fn validate_perm(d: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; d];
    if perm.len() != d {
        return Err(Error::InvalidArgument(format!(
            "permutation {perm:?} has length {}, expected {d}",
            perm.len()
        )));
    }
    for &y in perm {
        if y >= d || seen[y] {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{d}"
            )));
        }
        seen[y] = true;
    }
    Ok(())
}

fn first_counterexample(
    encoding: &[usize],
    d: usize,
    perms: &[Vec<usize>],
) -> Option<Counterexample> {
    let pair = |y: usize| (encoding[y] / d, encoding[y] % d);
    for x in 0..d {
        for a in 0..perms.len() {
            for b in a + 1..perms.len() {
                let (pa, pb) = (pair(perms[a][x]), pair(perms[b][x]));
                if pa.0 != pb.0 || pa.1 != pb.1 {
                    return Some(Counterexample {
                        input: x,
                        perms: (a, b),
                        pairs: (pa, pb),
                    });
                }
            }
        }
    }
    None
}

/// Exhaustively checks every injective classical encoding of `d` symbols into
/// `d²` symbol pairs for masking the given permutations.
///
/// An encoding masks when, for every input, both components of the encoded
/// output are the same whichever permutation was applied.
pub fn classical_no_go_search(d: usize, perms: &[Vec<usize>]) -> Result<SearchReport> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "alphabet size must be positive".into(),
        ));
    }
    if d > MAX_SEARCH_DIM {
        return Err(Error::UnsupportedDimension {
            what: "exhaustive classical search",
            dim: d,
        });
    }
    if perms.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for p in perms {
        validate_perm(d, p)?;
    }

    let targets = d * d;
    let mut results = Vec::new();
    let mut encoding = Vec::with_capacity(d);
    let mut used = vec![false; targets];
    enumerate(&mut encoding, &mut used, d, &mut |enc| {
        results.push(first_counterexample(enc, d, perms));
    });
    Ok(SearchReport {
        d,
        injection_count: results.len(),
        violating_all: results.iter().all(Option::is_some),
        first_counterexample_per_injection: results,
    })
}

fn enumerate(
    encoding: &mut Vec<usize>,
    used: &mut [bool],
    d: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if encoding.len() == d {
        visit(encoding);
        return;
    }
    for t in 0..used.len() {
        if !used[t] {
            used[t] = true;
            encoding.push(t);
            enumerate(encoding, used, d, visit);
            encoding.pop();
            used[t] = false;
        }
    }
}
