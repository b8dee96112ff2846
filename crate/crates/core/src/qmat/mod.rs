//! Dense complex linear algebra over ordered qubit slots.

mod density;
mod matrix;

pub use density::{
    fidelity_pure, hermitian_eigenvalues, partial_trace, partial_transpose, shannon_bits,
    tensor_product, von_neumann_entropy, DensityOperator, Tolerances,
};
pub use matrix::{ComplexMatrix, MatrixRecord, DEFAULT_EQ_TOL};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => vec![one, o, o, one],
            Pauli::X => vec![o, one, one, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![one, o, o, -one],
        };
        ComplexMatrix::from_vec(2, 2, entries).expect("2x2")
    }

    /// Eigenvector of the non-identity Paulis with eigenvalue `(-1)^bit`.
    pub fn eigenstate(self, bit: u8) -> Vec<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        match self {
            Pauli::I | Pauli::Z => basis_ket(1, bit as usize),
            Pauli::X => vec![Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0)],
            Pauli::Y => vec![Complex64::new(h, 0.0), Complex64::new(0.0, sign * h)],
        }
    }
}

/// Kronecker product of a Pauli word, leftmost factor most significant.
pub fn pauli_word(word: &[Pauli]) -> ComplexMatrix {
    word.iter()
        .fold(ComplexMatrix::identity(1), |acc, p| acc.kron(&p.matrix()))
}

/// Computational basis ket `|index⟩` on `num_qubits` qubits.
pub fn basis_ket(num_qubits: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// Kronecker product of two kets.
pub fn kron_ket(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}
