//! Standard single-qubit gates and Pauli operators.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("2x2 literal")
}

pub fn x() -> ComplexMatrix {
    m2(ZERO, ONE, ONE, ZERO)
}

pub fn y() -> ComplexMatrix {
    m2(ZERO, -I, I, ZERO)
}

pub fn z() -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> ComplexMatrix {
    (&x() + &z()).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// √Z, the phase gate diag(1, i).
pub fn s() -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, I)
}

/// `[1, σ_x, σ_y, σ_z]`.
pub fn paulis() -> [ComplexMatrix; 4] {
    [ComplexMatrix::identity(2), x(), y(), z()]
}

/// `n·σ` for a real 3-vector `n`.
pub fn bloch_operator(n: [f64; 3]) -> ComplexMatrix {
    let [_, sx, sy, sz] = paulis();
    &(&sx.scale_real(n[0]) + &sy.scale_real(n[1])) + &sz.scale_real(n[2])
}

/// Density matrix `(1 + n·σ)/2`.
pub fn bloch_state(n: [f64; 3]) -> ComplexMatrix {
    (&ComplexMatrix::identity(2) + &bloch_operator(n)).scale_real(0.5)
}

/// Rotation `exp(−iθ n̂·σ/2)` about the unit axis `axis`.
pub fn rotation(axis: [f64; 3], theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    &ComplexMatrix::identity(2).scale_real(c) - &bloch_operator(axis).scale(I * s)
}
