//! Circuit constructors: QFT, the sine-transform block, the Hamiltonian
//! simulation `U^{2^k} = S·e^{iΔt2^k}·S` and phase estimation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{BlockMatrix, GateOp};
use crate::layout::RegisterLayout;
use crate::oracle::{dst_matrix, eigenvalue_1d};
use crate::problem::PoissonProblem;

/// `n = 2 + ⌈log₂ d⌉ + 2·log₂ M`, enough for `2^n ≥ 4dM² ≥ λ_max`.
pub fn default_register_size(grid: usize, dim: usize) -> usize {
    let m = grid.trailing_zeros() as usize;
    2 + ceil_log2(dim) + 2 * m
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Phase angles for the diagonal part of the Hamiltonian simulation.
///
/// With `t_unit = 2π/2^n`, phase estimation leaves the eigenvalue (in units
/// of `2^shift`) in the register as an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseSchedule {
    pub register_size: usize,
    pub shift: usize,
    pub t_unit: f64,
}

impl PhaseSchedule {
    pub fn new(register_size: usize, shift: usize) -> Self {
        let t_unit = 2.0 * PI / (1u64 << register_size) as f64;
        Self {
            register_size,
            shift,
            t_unit,
        }
    }

    /// `λ·2^{−shift}·t_unit·2^k`.
    pub fn angle(&self, eigenvalue: f64, power: usize) -> f64 {
        let unit = (1u64 << self.shift) as f64;
        eigenvalue / unit * self.t_unit * (1u64 << power) as f64
    }
}

/// QFT on `qubits` (little-endian register):
/// `|x⟩ → 2^{−n/2} Σ_y e^{2πi·xy/2^n} |y⟩`.
///
/// Hadamards and controlled phases from the top qubit down, then explicit
/// swaps (three CNOTs each) to restore bit order.
pub fn qft_circuit(qubits: &[usize]) -> Circuit {
    let n = qubits.len();
    let mut c = Circuit::new("qft");
    for j in (0..n).rev() {
        c.push(GateOp::h(qubits[j]));
        for l in (0..j).rev() {
            let theta = PI / (1u64 << (j - l)) as f64;
            c.push(GateOp::controlled_phase(qubits[l], qubits[j], theta));
        }
    }
    for i in 0..n / 2 {
        c.extend(GateOp::swap(qubits[i], qubits[n - 1 - i]));
    }
    c
}

/// `1 ⊕ S` on a `log₂M`-qubit block: `|0⟩` is fixed and `|1..M−1⟩` are
/// mixed by the sine transform.
pub fn dst_block_op(grid: usize, block: &[usize]) -> Result<GateOp> {
    if block.len() != grid.trailing_zeros() as usize || !grid.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: grid.trailing_zeros() as usize,
            found: block.len(),
        });
    }
    let s = dst_matrix(grid)?;
    let mut data = alloc::vec![0.0; grid * grid];
    data[0] = 1.0;
    for r in 1..grid {
        for c in 1..grid {
            data[r * grid + c] = s[(r - 1, c - 1)];
        }
    }
    Ok(GateOp::Block {
        qubits: block.to_vec(),
        matrix: BlockMatrix::from_real(grid, &data)?,
    })
}

/// `U^{2^k}` on one block: sine transform, `M−1` selective phases
/// `e^{iλ_j t 2^k}` on basis `|j⟩` (each also conditioned on `control` when
/// given), sine transform.
pub fn hamiltonian_sim_1d(
    grid: usize,
    power: usize,
    block: &[usize],
    control: Option<usize>,
    schedule: &PhaseSchedule,
) -> Result<Circuit> {
    let dst = dst_block_op(grid, block)?;
    let mut qubits = block.to_vec();
    let control_bit = control.map_or(0, |q| {
        qubits.push(q);
        1 << block.len()
    });
    let mut c = Circuit::new("hamiltonian_1d");
    c.push(dst.clone());
    for j in 1..grid {
        let angle = schedule.angle(eigenvalue_1d(grid, j)?, power);
        c.push(GateOp::SelectivePhase {
            qubits: qubits.clone(),
            basis: j | control_bit,
            angle,
        });
    }
    c.push(dst);
    Ok(c)
}

/// One [`hamiltonian_sim_1d`] per block, blocks in axis order.
pub fn hamiltonian_sim_nd(
    layout: &RegisterLayout,
    power: usize,
    control: Option<usize>,
    schedule: &PhaseSchedule,
) -> Result<Circuit> {
    let mut c = Circuit::new("hamiltonian_nd");
    for axis in 0..layout.dim {
        c.append(&hamiltonian_sim_1d(
            layout.grid,
            power,
            layout.block(axis),
            control,
            schedule,
        )?);
    }
    Ok(c)
}

/// Phase estimation of `e^{iA t_unit}` on register C into register B.
///
/// Hadamards on B, `U^{2^k}` controlled by B qubit `k`, inverse QFT on B.
/// Register B then reads `+λ/2^shift`.
pub fn pea_circuit(problem: &PoissonProblem, layout: &RegisterLayout) -> Result<Circuit> {
    if layout.grid != problem.grid || layout.dim != problem.dim || layout.n != problem.eigen_register_size() {
        return Err(Error::Config("register layout does not match the problem".into()));
    }
    let schedule = PhaseSchedule::new(layout.n, problem.resolution_shift);
    let mut c = Circuit::new("pea");
    c.extend(layout.reg_b.iter().map(|&q| GateOp::h(q)));
    for (power, &control) in layout.reg_b.iter().enumerate() {
        c.append(&hamiltonian_sim_nd(layout, power, Some(control), &schedule)?);
    }
    c.append(&qft_circuit(&layout.reg_b).inverse());
    Ok(c)
}

/// Register B values reachable by every `d`-sum of 1-d eigenvalues, for
/// reference when reading histograms.
pub fn eigenvalue_register_values(problem: &PoissonProblem) -> Result<Vec<f64>> {
    let e = crate::oracle::eigen_nd(problem.grid, problem.dim)?;
    let unit = (1u64 << problem.resolution_shift) as f64;
    Ok(e.sorted().into_iter().map(|l| l / unit).collect())
}
