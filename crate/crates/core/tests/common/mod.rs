#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qpoisson_core::oracle::DenseMatrix;
use qpoisson_core::{Circuit, Statevector};

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Column `j` is the circuit applied to `|j⟩`.
pub fn circuit_unitary(circuit: &Circuit, num_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut s = Statevector::basis_with_cap(num_qubits, col, num_qubits).unwrap();
        s.apply_circuit(circuit).unwrap();
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    u
}

pub fn to_nalgebra(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `exp(i·θ·A)` for a real symmetric `A`.
pub fn expi(a: &DMatrix<f64>, theta: f64) -> DMatrix<Complex64> {
    a.map(|x| c64(0.0, theta * x)).exp()
}

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}
