use alloc::vec;
use alloc::vec::Vec;

use crate::blocks::default_register_size;
use crate::error::{Error, Result};
use crate::state::DEFAULT_QUBIT_CAP;

/// A discretized Poisson problem on `(0,1)^d` with `M + 1` grid points per
/// axis, together with the simulation parameters used to solve it.
///
/// `rhs` holds the `(M−1)^d` interior values with boundary terms already
/// folded in, ordered row-major over `(i₁, …, i_d)` with `i₁` slowest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoissonProblem {
    pub grid: usize,
    pub dim: usize,
    pub rhs: Vec<f64>,
    /// Amplitude factor α of the controlled rotation.
    pub alpha: f64,
    /// Eigenvalue register size before any resolution shift; defaults to
    /// [`default_register_size`].
    pub register_size: Option<usize>,
    /// Drops this many low-order eigenvalue bits (RegB has `n − s` qubits).
    pub resolution_shift: usize,
    pub shots: usize,
    pub seed: u64,
    pub qubit_cap: usize,
}

impl PoissonProblem {
    pub fn new(grid: usize, dim: usize, rhs: Vec<f64>, alpha: f64) -> Result<Self> {
        let p = Self {
            grid,
            dim,
            rhs,
            alpha,
            register_size: None,
            resolution_shift: 0,
            shots: 0,
            seed: 0,
            qubit_cap: DEFAULT_QUBIT_CAP,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unit right-hand side at the first interior grid point `(1, …, 1)`.
    pub fn first_point_rhs(grid: usize, dim: usize) -> Result<Vec<f64>> {
        let len = interior_len(grid, dim)?;
        let mut rhs = vec![0.0; len];
        rhs[0] = 1.0;
        Ok(rhs)
    }

    pub fn validate(&self) -> Result<()> {
        let len = interior_len(self.grid, self.dim)?;
        if self.rhs.len() != len {
            return Err(Error::RhsLength {
                expected: len,
                found: self.rhs.len(),
            });
        }
        if self.rhs.iter().any(|x| !x.is_finite()) || self.rhs.iter().all(|&x| x == 0.0) {
            return Err(Error::ZeroRhs);
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        let n = self.register_size();
        if n == 0 || self.resolution_shift >= n {
            return Err(Error::InvalidRegisterSize(
                n.saturating_sub(self.resolution_shift),
            ));
        }
        Ok(())
    }

    pub fn grid_bits(&self) -> usize {
        self.grid.trailing_zeros() as usize
    }

    pub fn register_size(&self) -> usize {
        self.register_size
            .unwrap_or_else(|| default_register_size(self.grid, self.dim))
    }

    /// Qubits actually allocated to the eigenvalue register.
    pub fn eigen_register_size(&self) -> usize {
        self.register_size() - self.resolution_shift
    }

    /// α scaled by `2^{−s}` to undo the coarser eigenvalue unit.
    pub fn effective_alpha(&self) -> f64 {
        self.alpha / (1u64 << self.resolution_shift) as f64
    }
}

/// Validates `M` and `d` and returns `(M−1)^d`.
pub fn interior_len(grid: usize, dim: usize) -> Result<usize> {
    if grid < 2 || !grid.is_power_of_two() {
        return Err(Error::InvalidGrid(grid));
    }
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut len = 1usize;
    for _ in 0..dim {
        len = len.checked_mul(grid - 1).ok_or(Error::InvalidDimension(dim))?;
    }
    Ok(len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            PoissonProblem::new(5, 1, vec![1.0; 4], 1.0).unwrap_err(),
            Error::InvalidGrid(5)
        );
        assert_eq!(
            PoissonProblem::new(4, 1, vec![1.0; 4], 1.0).unwrap_err(),
            Error::RhsLength {
                expected: 3,
                found: 4
            }
        );
        assert_eq!(
            PoissonProblem::new(4, 1, vec![0.0; 3], 1.0).unwrap_err(),
            Error::ZeroRhs
        );
        assert_eq!(
            PoissonProblem::new(4, 1, vec![1.0; 3], 0.0).unwrap_err(),
            Error::InvalidAlpha(0.0)
        );
        assert!(PoissonProblem::new(4, 0, vec![1.0], 1.0).is_err());
    }

    #[test]
    fn first_point_preset() {
        assert_eq!(
            PoissonProblem::first_point_rhs(4, 1).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        let r = PoissonProblem::first_point_rhs(4, 2).unwrap();
        assert_eq!(r.len(), 9);
        assert_eq!(r[0], 1.0);
    }

    #[test]
    fn shift_must_leave_a_register() {
        let mut p = PoissonProblem::new(4, 1, vec![1.0, 0.0, 0.0], 1.0).unwrap();
        p.resolution_shift = 6;
        assert!(p.validate().is_err());
        p.resolution_shift = 2;
        assert_eq!(p.eigen_register_size(), 4);
        assert!((p.effective_alpha() - 0.25).abs() < 1e-15);
    }
}
