//! Gate operations understood by [`Statevector::apply`](crate::Statevector::apply).

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for unitarity checks, `‖U†U − I‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Largest block unitary, in qubits.
pub const MAX_BLOCK_QUBITS: usize = 12;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A control qubit. The gate fires when the qubit reads `polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: true,
        }
    }

    pub fn off(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: false,
        }
    }
}

/// Dense unitary acting on an ordered qubit subset. Row-major, dimension `2^k`.
///
/// Unitarity is checked once at construction; the fields are private so a
/// `BlockMatrix` in hand is always unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl BlockMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                found: dim,
            });
        }
        let k = dim.trailing_zeros() as usize;
        if k > MAX_BLOCK_QUBITS {
            return Err(Error::BlockTooLarge(k));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let deviation = unitary_deviation(dim, &data);
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self { dim, data })
    }

    /// Real orthogonal matrix.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = alloc::vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Self { dim: n, data }
    }
}

fn unitary_deviation(n: usize, m: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += m[k * n + i].conj() * m[k * n + j];
            }
            if i == j {
                acc -= ONE;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

pub(crate) fn matrix2_deviation(m: &Matrix2) -> f64 {
    let flat = [m[0][0], m[0][1], m[1][0], m[1][1]];
    unitary_deviation(2, &flat)
}

pub fn adjoint2(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub fn hadamard_matrix() -> Matrix2 {
    let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x_matrix() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// `diag(1, e^{iθ})`.
pub fn phase_matrix(theta: f64) -> Matrix2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]]
}

/// Rotation about y with the angle written straight into the entries:
/// `[[cos θ, −sin θ], [sin θ, cos θ]]`, so `|0⟩ → cos θ|0⟩ + sin θ|1⟩`.
/// Angles of consecutive rotations add.
pub fn ry_matrix(theta: f64) -> Matrix2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Single {
        target: usize,
        matrix: Matrix2,
    },
    /// Applies `matrix` to `target` on the subspace where every control
    /// matches its polarity.
    Controlled {
        controls: Vec<Control>,
        target: usize,
        matrix: Matrix2,
    },
    /// Multiplies by `e^{i·angle}` every amplitude whose bits on `qubits`
    /// (little-endian: bit `b` of `basis` on `qubits[b]`) equal `basis`.
    SelectivePhase {
        qubits: Vec<usize>,
        basis: usize,
        angle: f64,
    },
    /// Dense unitary on `qubits`; local index bit `b` lives on `qubits[b]`.
    Block {
        qubits: Vec<usize>,
        matrix: BlockMatrix,
    },
}

impl GateOp {
    pub fn h(target: usize) -> Self {
        GateOp::Single {
            target,
            matrix: hadamard_matrix(),
        }
    }

    pub fn x(target: usize) -> Self {
        GateOp::Single {
            target,
            matrix: pauli_x_matrix(),
        }
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        GateOp::Single {
            target,
            matrix: ry_matrix(theta),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Controlled {
            controls: alloc::vec![Control::on(control)],
            target,
            matrix: pauli_x_matrix(),
        }
    }

    pub fn controlled_phase(control: usize, target: usize, theta: f64) -> Self {
        GateOp::Controlled {
            controls: alloc::vec![Control::on(control)],
            target,
            matrix: phase_matrix(theta),
        }
    }

    /// Swap as three CNOTs.
    pub fn swap(a: usize, b: usize) -> [Self; 3] {
        [GateOp::cnot(a, b), GateOp::cnot(b, a), GateOp::cnot(a, b)]
    }

    pub fn inverse(&self) -> Self {
        match self {
            GateOp::Single { target, matrix } => GateOp::Single {
                target: *target,
                matrix: adjoint2(matrix),
            },
            GateOp::Controlled {
                controls,
                target,
                matrix,
            } => GateOp::Controlled {
                controls: controls.clone(),
                target: *target,
                matrix: adjoint2(matrix),
            },
            GateOp::SelectivePhase { qubits, basis, angle } => GateOp::SelectivePhase {
                qubits: qubits.clone(),
                basis: *basis,
                angle: -angle,
            },
            GateOp::Block { qubits, matrix } => GateOp::Block {
                qubits: qubits.clone(),
                matrix: matrix.adjoint(),
            },
        }
    }

    /// Every qubit the operation touches or reads.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Single { target, .. } => alloc::vec![*target],
            GateOp::Controlled { controls, target, .. } => {
                let mut v: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                v.push(*target);
                v
            }
            GateOp::SelectivePhase { qubits, .. } | GateOp::Block { qubits, .. } => qubits.clone(),
        }
    }

    /// Checks indices against a `num_qubits` state and the 2×2 matrices for
    /// unitarity. Block matrices were checked when built.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        if qubits.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = 0u128;
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= 1 << q;
        }
        match self {
            GateOp::Single { matrix, .. } | GateOp::Controlled { matrix, .. } => {
                let deviation = matrix2_deviation(matrix);
                if deviation > UNITARY_TOL {
                    return Err(Error::NonUnitary { deviation });
                }
            }
            GateOp::SelectivePhase { qubits, basis, angle } => {
                if *basis >> qubits.len() != 0 {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << qubits.len(),
                        found: *basis,
                    });
                }
                if !angle.is_finite() {
                    return Err(Error::NonUnitary {
                        deviation: f64::INFINITY,
                    });
                }
            }
            GateOp::Block { qubits, matrix } => {
                if matrix.num_qubits() != qubits.len() {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << qubits.len(),
                        found: matrix.dim(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_unitary_block_rejected() {
        let err = BlockMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { .. }));
    }

    #[test]
    fn oversized_block_rejected() {
        let dim = 1 << 13;
        assert_eq!(
            BlockMatrix::new(dim, Vec::new()).unwrap_err(),
            Error::BlockTooLarge(13)
        );
    }

    #[test]
    fn validate_catches_bad_indices() {
        assert!(matches!(
            GateOp::h(3).validate(3),
            Err(Error::QubitOutOfRange {
                qubit: 3,
                num_qubits: 3
            })
        ));
        assert_eq!(GateOp::cnot(1, 1).validate(2), Err(Error::DuplicateQubit(1)));
        let bad = GateOp::Single {
            target: 0,
            matrix: [[ONE, ONE], [ZERO, ONE]],
        };
        assert!(matches!(bad.validate(1), Err(Error::NonUnitary { .. })));
    }

    #[test]
    fn ry_angles_add() {
        let a = ry_matrix(0.3);
        let b = ry_matrix(0.4);
        let c = ry_matrix(0.7);
        for i in 0..2 {
            for j in 0..2 {
                let prod = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                assert!((prod - c[i][j]).norm() < 1e-15);
            }
        }
    }
}
