#![allow(dead_code)]

use chanmask::linalg::{eig_hermitian, BipartiteDims};
use chanmask::{gates, sample, ChannelSpec, ComplexMatrix, KrausChannel, Masker, PauliFourVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    chanmask::sample::seeded(seed)
}

/// Random channel from a Stinespring isometry with `k` Kraus operators;
/// needs `dout·k ≥ din`.
pub fn random_kraus<R: Rng>(rng: &mut R, din: usize, dout: usize, k: usize) -> KrausChannel {
    let v = sample::isometry(rng, dout * k, din);
    let ops = (0..k)
        .map(|n| ComplexMatrix::from_fn(dout, din, |r, c| v[(n * dout + r, c)]))
        .collect();
    KrausChannel::new(din, dout, ops).expect("isometry blocks are trace preserving")
}

pub fn random_pauli<R: Rng>(rng: &mut R) -> PauliFourVector {
    let p = sample::probability_vector(rng, 4);
    PauliFourVector::new(p[0], p[1], p[2], p[3]).unwrap()
}

/// One channel of every representation, sized up to `max_dim`.
pub fn random_spec<R: Rng>(rng: &mut R, max_dim: usize) -> ChannelSpec {
    let d = rng.random_range(1..=max_dim);
    match rng.random_range(0..5) {
        0 => ChannelSpec::unitary(sample::unitary(rng, d)).unwrap(),
        1 => {
            let dout = rng.random_range(1..=max_dim);
            let k = rng.random_range(d.div_ceil(dout)..=d.div_ceil(dout) + 2);
            ChannelSpec::Kraus(random_kraus(rng, d, dout, k))
        }
        2 => ChannelSpec::Pauli(random_pauli(rng)),
        3 => {
            let dout = rng.random_range(1..=max_dim);
            ChannelSpec::Classical(sample::classical_channel(rng, d, dout))
        }
        _ => ChannelSpec::depolarized_unitary(rng.random_range(0.0..=1.0), sample::unitary(rng, d))
            .unwrap(),
    }
}

/// `Σ_k |kk⟩⟨f_k|` composed with `pre`, built by hand.
pub fn embedding_masker(basis: &ComplexMatrix, pre: &ComplexMatrix) -> Masker {
    let d = basis.rows();
    let mut m = ComplexMatrix::zeros(d * d, d);
    let fd = basis.adjoint();
    for k in 0..d {
        for c in 0..d {
            m[(k * d + k, c)] = fd[(k, c)];
        }
    }
    Masker::new(&m * pre, BipartiteDims::new(d, d).unwrap()).unwrap()
}

/// Qubit unitary with first column `|ψ(n̂)⟩`.
pub fn axis_unitary(n: [f64; 3]) -> ComplexMatrix {
    eig_hermitian(&gates::bloch_operator(n))
        .unwrap()
        .vectors
        .select_columns(&[1, 0])
}

/// Mixture of rotations about `n` followed by optional dephasing along `n`;
/// always unital with `±n̂` fixed.
pub fn channel_fixing_axis<R: Rng>(rng: &mut R, n: [f64; 3]) -> ChannelSpec {
    let weights = sample::probability_vector(rng, 3);
    let mut ops: Vec<ComplexMatrix> = weights
        .iter()
        .map(|&w| gates::rotation(n, rng.random_range(-3.0..3.0)).scale_real(w.sqrt()))
        .collect();
    let q: f64 = rng.random_range(0.0..1.0);
    let flip = gates::bloch_operator(n);
    let scaled: Vec<ComplexMatrix> = ops
        .iter()
        .map(|k| (&flip * k).scale_real(q.sqrt()))
        .collect();
    for k in ops.iter_mut() {
        *k = k.scale_real((1.0 - q).sqrt());
    }
    ops.extend(scaled);
    ChannelSpec::Kraus(KrausChannel::new(2, 2, ops).unwrap())
}

/// Random mixed-unitary qubit channel; generically has no pure fixed point.
pub fn random_unital<R: Rng>(rng: &mut R) -> ChannelSpec {
    let weights = sample::probability_vector(rng, 3);
    let ops = weights
        .iter()
        .map(|&w| sample::unitary(rng, 2).scale_real(w.sqrt()))
        .collect();
    ChannelSpec::Kraus(KrausChannel::new(2, 2, ops).unwrap())
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Channel action from the defining formulas, without Kraus operators.
pub fn direct_apply(e: &ChannelSpec, rho: &ComplexMatrix) -> ComplexMatrix {
    match e {
        ChannelSpec::Unitary { matrix } => &(matrix * rho) * &matrix.adjoint(),
        ChannelSpec::Pauli(p) => {
            let probs = p.probs();
            gates::paulis()
                .iter()
                .zip(probs)
                .fold(ComplexMatrix::zeros(2, 2), |acc, (s, w)| {
                    &acc + &(&(s * rho) * s).scale_real(w)
                })
        }
        ChannelSpec::Classical(ch) => {
            let mut out = ComplexMatrix::zeros(ch.out_size(), ch.out_size());
            for x in 0..ch.in_size() {
                for y in 0..ch.out_size() {
                    out[(y, y)] += rho[(x, x)] * ch.prob(y, x);
                }
            }
            out
        }
        ChannelSpec::DepolarizedUnitary { p, unitary } => {
            let d = unitary.rows();
            let mixed = ComplexMatrix::identity(d).scale(rho.trace() * ((1.0 - p) / d as f64));
            &(&(unitary * rho) * &unitary.adjoint()).scale_real(*p) + &mixed
        }
        ChannelSpec::Kraus(k) => k
            .ops()
            .iter()
            .fold(ComplexMatrix::zeros(k.dout(), k.dout()), |acc, op| {
                &acc + &(&(op * rho) * &op.adjoint())
            }),
    }
}

pub fn direct_choi(e: &ChannelSpec) -> ComplexMatrix {
    let din = e.din();
    let dout = e.dout();
    let mut choi = ComplexMatrix::zeros(din * dout, din * dout);
    for i in 0..din {
        for j in 0..din {
            let out = direct_apply(e, &ComplexMatrix::unit(din, i, j));
            for r in 0..dout {
                for c in 0..dout {
                    choi[(i * dout + r, j * dout + c)] = out[(r, c)];
                }
            }
        }
    }
    choi
}
