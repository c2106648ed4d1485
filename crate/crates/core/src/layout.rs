//! Qubit assignment and the register C grid encoding.
//!
//! Register C holds `d` blocks of `log₂M` qubits. Block `k` stores grid
//! coordinate `i_{k+1} ∈ [1, M−1]`; the value 0 is never a valid block, so a
//! grid point `(i₁, …, i_d)` sits at basis index `Σ_k i_k·M^{d−k}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{deposit, extract};

/// Qubit indices for every register of the solver.
///
/// Register C occupies the low qubits, followed by B (eigenvalue), A
/// (reciprocal exponent, one-hot) and the rotation ancilla. Registers are
/// little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegisterLayout {
    pub grid: usize,
    pub grid_bits: usize,
    pub dim: usize,
    pub n: usize,
    pub reg_c: Vec<usize>,
    pub reg_b: Vec<usize>,
    pub reg_a: Vec<usize>,
    pub ancilla: usize,
    pub total_qubits: usize,
}

impl RegisterLayout {
    pub fn new(grid: usize, dim: usize, n: usize) -> Result<Self> {
        if grid < 2 || !grid.is_power_of_two() {
            return Err(Error::InvalidGrid(grid));
        }
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if n == 0 {
            return Err(Error::InvalidRegisterSize(n));
        }
        let m = grid.trailing_zeros() as usize;
        let c = dim * m;
        let reg_c: Vec<usize> = (0..c).collect();
        let reg_b: Vec<usize> = (c..c + n).collect();
        let reg_a: Vec<usize> = (c + n..c + 2 * n).collect();
        let ancilla = c + 2 * n;
        Ok(Self {
            grid,
            grid_bits: m,
            dim,
            n,
            reg_c,
            reg_b,
            reg_a,
            ancilla,
            total_qubits: ancilla + 1,
        })
    }

    /// Qubits of the block holding coordinate `axis` (0-based, first axis is
    /// the most significant block).
    pub fn block(&self, axis: usize) -> &[usize] {
        let m = self.grid_bits;
        let start = (self.dim - 1 - axis) * m;
        &self.reg_c[start..start + m]
    }

    /// Basis index of the full state for a register C value, with every
    /// other register in `|0⟩`.
    pub fn full_index(&self, reg_c_value: usize) -> usize {
        deposit(reg_c_value, &self.reg_c)
    }

    pub fn reg_c_value(&self, full_index: usize) -> usize {
        extract(full_index, &self.reg_c)
    }

    /// True when no block of register C is zero.
    pub fn is_valid_reg_c(&self, value: usize) -> bool {
        let mask = self.grid - 1;
        (0..self.dim).all(|k| (value >> (k * self.grid_bits)) & mask != 0)
    }
}

/// `(i₁, …, i_d)` (1-based) → register C value `Σ i_k·M^{d−k}`.
pub fn grid_to_basis_index(coords: &[usize], grid: usize) -> Result<usize> {
    if grid < 2 || !grid.is_power_of_two() {
        return Err(Error::InvalidGrid(grid));
    }
    if coords.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    coords.iter().try_fold(0usize, |acc, &i| {
        if i == 0 || i >= grid {
            return Err(Error::GridIndexOutOfRange { index: i, grid });
        }
        Ok(acc * grid + i)
    })
}

/// Inverse of [`grid_to_basis_index`]; rejects any zero block.
pub fn basis_index_to_grid(index: usize, grid: usize, dim: usize) -> Result<Vec<usize>> {
    if grid < 2 || !grid.is_power_of_two() {
        return Err(Error::InvalidGrid(grid));
    }
    let mut coords = alloc::vec![0; dim];
    let mut rest = index;
    for k in (0..dim).rev() {
        let c = rest % grid;
        if c == 0 {
            return Err(Error::InvalidEncoding(index));
        }
        coords[k] = c;
        rest /= grid;
    }
    if rest != 0 {
        return Err(Error::InvalidEncoding(index));
    }
    Ok(coords)
}

/// Register C value of the `g`-th interior grid point (row-major, 0-based).
pub fn grid_linear_to_basis(g: usize, grid: usize, dim: usize) -> usize {
    let coords = crate::oracle::linear_to_multi(g, grid, dim);
    coords.iter().fold(0, |acc, &c| acc * grid + c + 1)
}
