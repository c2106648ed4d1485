//! Classical ground truth: Poisson matrices, analytic eigenpairs, the sine
//! transform, a dense direct solve and the expected post-selection
//! probability.
//!
//! Everything here is scaled by `1/h² = M²`, so the 1-d operator is
//! `M²·tridiag(−1, 2, −1)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::problem::{interior_len, PoissonProblem};
use crate::reciprocal::{newton_x1, x0_exponent};

/// Largest system the dense routines accept.
pub const DENSE_LIMIT: usize = 4096;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < 2 || !grid.is_power_of_two() {
        return Err(Error::InvalidGrid(grid));
    }
    Ok(())
}

fn guarded_len(grid: usize, dim: usize) -> Result<usize> {
    let len = interior_len(grid, dim)?;
    if len > DENSE_LIMIT {
        return Err(Error::SizeGuard {
            size: len,
            limit: DENSE_LIMIT,
        });
    }
    Ok(len)
}

/// `M²·tridiag(−1, 2, −1)` of size `(M−1)×(M−1)`.
pub fn poisson_matrix_1d(grid: usize) -> Result<DenseMatrix> {
    check_grid(grid)?;
    let n = grid - 1;
    let scale = (grid * grid) as f64;
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = 2.0 * scale;
        if i + 1 < n {
            a[(i, i + 1)] = -scale;
            a[(i + 1, i)] = -scale;
        }
    }
    Ok(a)
}

/// Kronecker sum `Σ_k I ⊗ … ⊗ A₁ ⊗ … ⊗ I`, assembled entrywise: two grid
/// points couple only when they differ in at most one coordinate.
pub fn poisson_matrix_nd(grid: usize, dim: usize) -> Result<DenseMatrix> {
    let len = guarded_len(grid, dim)?;
    let a1 = poisson_matrix_1d(grid)?;
    let mut a = DenseMatrix::zeros(len, len);
    for row in 0..len {
        let x = linear_to_multi(row, grid, dim);
        for axis in 0..dim {
            for y_k in 0..grid - 1 {
                let v = a1[(x[axis], y_k)];
                if v == 0.0 {
                    continue;
                }
                let mut y = x.clone();
                y[axis] = y_k;
                a[(row, multi_to_linear(&y, grid))] += v;
            }
        }
    }
    Ok(a)
}

/// 0-based linear grid index → 0-based coordinates, first axis slowest.
pub(crate) fn linear_to_multi(mut idx: usize, grid: usize, dim: usize) -> Vec<usize> {
    let base = grid - 1;
    let mut out = vec![0; dim];
    for k in (0..dim).rev() {
        out[k] = idx % base;
        idx /= base;
    }
    out
}

pub(crate) fn multi_to_linear(coords: &[usize], grid: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * (grid - 1) + c)
}

/// `λ_j = 4M² sin²(jπ/2M)`, `j ∈ [1, M−1]`.
pub fn eigenvalue_1d(grid: usize, j: usize) -> Result<f64> {
    check_grid(grid)?;
    if j == 0 || j >= grid {
        return Err(Error::EigenIndexOutOfRange { index: j, grid });
    }
    let m = grid as f64;
    let s = (j as f64 * PI / (2.0 * m)).sin();
    Ok(4.0 * m * m * s * s)
}

/// `u_j[k] = √(2/M)·sin(jkπ/M)`, `k = 1..M−1`.
pub fn eigenvector_1d(grid: usize, j: usize) -> Result<Vec<f64>> {
    check_grid(grid)?;
    if j == 0 || j >= grid {
        return Err(Error::EigenIndexOutOfRange { index: j, grid });
    }
    let m = grid as f64;
    let c = (2.0 / m).sqrt();
    Ok((1..grid).map(|k| c * ((j * k) as f64 * PI / m).sin()).collect())
}

/// `S[j][k] = √(2/M)·sin(jkπ/M)`. Symmetric and involutory.
pub fn dst_matrix(grid: usize) -> Result<DenseMatrix> {
    check_grid(grid)?;
    let n = grid - 1;
    let mut s = DenseMatrix::zeros(n, n);
    for j in 1..grid {
        for (k, v) in eigenvector_1d(grid, j)?.into_iter().enumerate() {
            s[(j - 1, k)] = v;
        }
    }
    Ok(s)
}

/// Analytic spectrum of the d-dimensional operator.
///
/// Multi-indices `J ∈ {1..M−1}^d` are stored row-major with `J₁` slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub grid: usize,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
}

impl EigenSystem {
    /// 1-based multi-index of the `flat`-th eigenpair.
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        linear_to_multi(flat, self.grid, self.dim)
            .into_iter()
            .map(|c| c + 1)
            .collect()
    }

    pub fn eigenvalue(&self, index: &[usize]) -> Result<f64> {
        index.iter().map(|&j| eigenvalue_1d(self.grid, j)).sum()
    }

    /// Tensor product of the 1-d eigenvectors, in grid order.
    pub fn eigenvector(&self, index: &[usize]) -> Result<Vec<f64>> {
        let factors: Vec<Vec<f64>> = index
            .iter()
            .map(|&j| eigenvector_1d(self.grid, j))
            .collect::<Result<_>>()?;
        let len = interior_len(self.grid, self.dim)?;
        Ok((0..len)
            .map(|g| {
                linear_to_multi(g, self.grid, self.dim)
                    .iter()
                    .zip(&factors)
                    .map(|(&x, f)| f[x])
                    .product()
            })
            .collect())
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    pub fn kappa(&self) -> f64 {
        self.lambda_max() / self.lambda_min()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn eigen_nd(grid: usize, dim: usize) -> Result<EigenSystem> {
    let len = guarded_len(grid, dim)?;
    let lambda_1d: Vec<f64> = (1..grid).map(|j| eigenvalue_1d(grid, j)).collect::<Result<_>>()?;
    let eigenvalues = (0..len)
        .map(|flat| {
            linear_to_multi(flat, grid, dim)
                .iter()
                .map(|&c| lambda_1d[c])
                .sum()
        })
        .collect();
    Ok(EigenSystem {
        grid,
        dim,
        eigenvalues,
    })
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap_or(col);
        if m[(pivot, col)] == 0.0 {
            return Err(Error::DegenerateBranch { probability: 0.0 });
        }
        if pivot != col {
            for c in 0..n {
                let t = m[(col, c)];
                m[(col, c)] = m[(pivot, c)];
                m[(pivot, c)] = t;
            }
            x.swap(col, pivot);
        }
        for r in col + 1..n {
            let f = m[(r, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[(r, c)] -= f * m[(col, c)];
            }
            x[r] -= f * x[col];
        }
    }
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| m[(r, c)] * x[c]).sum();
        x[r] = (x[r] - tail) / m[(r, r)];
    }
    Ok(x)
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassicalSolution {
    /// `A⁻¹b / ‖A⁻¹b‖₂`.
    pub normalized: Vec<f64>,
    pub raw: Vec<f64>,
    pub kappa: f64,
}

pub fn solve_classical(problem: &PoissonProblem) -> Result<ClassicalSolution> {
    problem.validate()?;
    let a = poisson_matrix_nd(problem.grid, problem.dim)?;
    let raw = lu_solve(&a, &problem.rhs)?;
    let kappa = eigen_nd(problem.grid, problem.dim)?.kappa();
    Ok(ClassicalSolution {
        normalized: normalize(&raw),
        raw,
        kappa,
    })
}

/// `b_J = ⟨b̂|u_J⟩` in [`EigenSystem`] order, computed by a sine transform
/// along each axis.
pub fn spectral_coefficients(problem: &PoissonProblem) -> Result<Vec<f64>> {
    problem.validate()?;
    let (grid, dim) = (problem.grid, problem.dim);
    let s = dst_matrix(grid)?;
    let mut coeffs = normalize(&problem.rhs);
    let base = grid - 1;
    let len = coeffs.len();
    // Axis k has stride base^(d−1−k) in row-major order.
    for axis in 0..dim {
        let stride = base.pow((dim - 1 - axis) as u32);
        let mut next = vec![0.0; len];
        for (idx, out) in next.iter_mut().enumerate() {
            let coord = (idx / stride) % base;
            let origin = idx - coord * stride;
            *out = (0..base)
                .map(|x| s[(coord, x)] * coeffs[origin + x * stride])
                .sum();
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Probability distribution over register values after phase estimation of
/// an eigenphase that reads `value` (in register units, possibly
/// fractional) on an `n`-qubit register.
///
/// `P(y) = sin²(π(v−y)) / (N² sin²(π(v−y)/N))`, with `P = 1` at integer
/// coincidence (mod N).
pub fn pea_outcome_distribution(value: f64, n: usize) -> Vec<f64> {
    let size = 1usize << n;
    let nf = size as f64;
    (0..size)
        .map(|y| {
            let delta = value - y as f64;
            let den = (PI * delta / nf).sin();
            if den.abs() < 1e-12 {
                1.0
            } else {
                let num = (PI * delta).sin();
                (num * num) / (nf * nf * den * den)
            }
        })
        .collect()
}

/// How the eigenvalue seen by the rotation is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EigenApprox {
    /// `sin²(α/λ_J)` with the exact eigenvalue.
    Exact,
    /// `sin²(α/k_J)` with `k_J` the nearest register value.
    Rounded,
    /// Average over the phase-estimation outcome distribution of the
    /// circuit's own angle `α·x₁(k)` (zero for `k < 2`). This is what the
    /// simulated circuit produces.
    PhaseEstimation,
}

/// `Ω = Σ_J b_J² sin²(α/≈λ_J)`.
///
/// Eigenvalues are read in units of `2^s` and α is scaled accordingly, as in
/// the circuit.
pub fn expected_success_probability(problem: &PoissonProblem, approx: EigenApprox) -> Result<f64> {
    let coeffs = spectral_coefficients(problem)?;
    let eig = eigen_nd(problem.grid, problem.dim)?;
    let alpha = problem.effective_alpha();
    let unit = (1u64 << problem.resolution_shift) as f64;
    let n = problem.eigen_register_size();
    let modulus = (1u64 << n) as f64;
    let mut omega = 0.0;
    for (b, &lambda) in coeffs.iter().zip(&eig.eigenvalues) {
        let weight = b * b;
        if weight == 0.0 {
            continue;
        }
        let value = lambda / unit;
        omega += weight
            * match approx {
                EigenApprox::Exact => (alpha / value).sin().powi(2),
                EigenApprox::Rounded => {
                    let k = value.round() % modulus;
                    if k == 0.0 {
                        0.0
                    } else {
                        (alpha / k).sin().powi(2)
                    }
                }
                EigenApprox::PhaseEstimation => pea_outcome_distribution(value, n)
                    .iter()
                    .enumerate()
                    .map(|(k, p)| match x0_exponent(k as u64) {
                        Some(e) => p * (alpha * newton_x1(k as u64, e)).sin().powi(2),
                        None => 0.0,
                    })
                    .sum(),
            };
    }
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_1d_matches_example() {
        let a = poisson_matrix_1d(4).unwrap();
        let expected = [32.0, -16.0, 0.0, -16.0, 32.0, -16.0, 0.0, -16.0, 32.0];
        assert_eq!(a.as_slice(), &expected);
        assert_eq!(poisson_matrix_1d(2).unwrap().as_slice(), &[8.0]);
        assert!(poisson_matrix_1d(6).is_err());
    }

    #[test]
    fn stencil_row_sums() {
        for grid in [4usize, 8, 16] {
            let a = poisson_matrix_1d(grid).unwrap();
            let n = grid - 1;
            let sums: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).sum()).collect();
            let m2 = (grid * grid) as f64;
            assert_eq!(sums[0], m2);
            assert_eq!(sums[n - 1], m2);
            assert!(sums[1..n - 1].iter().all(|&s| s == 0.0));
        }
    }

    #[test]
    fn nd_small_cases() {
        assert_eq!(poisson_matrix_nd(4, 1).unwrap(), poisson_matrix_1d(4).unwrap());
        assert_eq!(poisson_matrix_nd(2, 2).unwrap().as_slice(), &[16.0]);
        assert!(matches!(poisson_matrix_nd(32, 3), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn eigenvalues_of_example() {
        let l: Vec<f64> = (1..4).map(|j| eigenvalue_1d(4, j).unwrap()).collect();
        for (got, want) in l.iter().zip([9.37, 32.0, 54.63]) {
            assert!((got - want).abs() < 0.01, "{got} vs {want}");
        }
        assert!((eigenvalue_1d(2, 1).unwrap() - 8.0).abs() < 1e-12);
        assert!(eigenvalue_1d(4, 0).is_err());
        assert!(eigenvalue_1d(4, 4).is_err());
    }

    #[test]
    fn eigenvectors_of_example() {
        let u1 = eigenvector_1d(4, 1).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for (g, w) in u1.iter().zip([0.5, h, 0.5]) {
            assert!((g - w).abs() < 1e-12);
        }
        let u2 = eigenvector_1d(4, 2).unwrap();
        for (g, w) in u2.iter().zip([h, 0.0, -h]) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(eigenvector_1d(4, 5).is_err());
    }

    #[test]
    fn eigenpairs_satisfy_matrix_equation() {
        for grid in [2usize, 4, 8] {
            let a = poisson_matrix_1d(grid).unwrap();
            for j in 1..grid {
                let u = eigenvector_1d(grid, j).unwrap();
                let l = eigenvalue_1d(grid, j).unwrap();
                let au = a.mul_vec(&u);
                for (x, y) in au.iter().zip(&u) {
                    assert!((x - l * y).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn eigen_nd_values() {
        let e = eigen_nd(4, 2).unwrap();
        assert!((e.eigenvalue(&[1, 1]).unwrap() - 18.75).abs() < 0.02);
        assert_eq!(e.eigenvalues[0], e.eigenvalue(&[1, 1]).unwrap());
        assert_eq!(e.multi_index(5), vec![2, 3]);
        let e1 = eigen_nd(4, 1).unwrap();
        for j in 1..4 {
            assert_eq!(e1.eigenvalues[j - 1], eigenvalue_1d(4, j).unwrap());
        }
        assert!((e1.kappa() - 5.83).abs() < 0.01);
    }

    #[test]
    fn lambda_max_bound() {
        for grid in [2usize, 4, 8] {
            for dim in 1..=3 {
                let e = eigen_nd(grid, dim).unwrap();
                assert!(e.lambda_max() <= (4 * dim * grid * grid) as f64);
            }
        }
    }

    #[test]
    fn dst_is_involution_and_diagonalizes() {
        assert_eq!(dst_matrix(2).unwrap().as_slice(), &[1.0]);
        for grid in [2usize, 4, 8, 16] {
            let s = dst_matrix(grid).unwrap();
            let n = grid - 1;
            let ss = s.mul(&s);
            let a = poisson_matrix_1d(grid).unwrap();
            let sas = s.mul(&a).mul(&s);
            for i in 0..n {
                for j in 0..n {
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert!((ss[(i, j)] - id).abs() < 1e-12);
                    let d = if i == j {
                        eigenvalue_1d(grid, i + 1).unwrap()
                    } else {
                        0.0
                    };
                    assert!((sas[(i, j)] - d).abs() < 1e-10 * (grid * grid) as f64);
                }
            }
        }
    }

    #[test]
    fn classical_solution_of_example() {
        let p = PoissonProblem::new(4, 1, vec![1.0, 0.0, 0.0], 1.0).unwrap();
        let sol = solve_classical(&p).unwrap();
        let r = 14f64.sqrt();
        for (g, w) in sol.normalized.iter().zip([3.0 / r, 2.0 / r, 1.0 / r]) {
            assert!((g - w).abs() < 1e-12);
        }
        let norm: f64 = sol.normalized.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_rhs_is_invariant() {
        let u = eigenvector_1d(8, 3).unwrap();
        let p = PoissonProblem::new(8, 1, u.clone(), 1.0).unwrap();
        let sol = solve_classical(&p).unwrap();
        let sign = sol.normalized[0].signum() * u[0].signum();
        for (g, w) in sol.normalized.iter().zip(&u) {
            assert!((g - sign * w).abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_coefficients_of_example() {
        let p = PoissonProblem::new(4, 1, vec![1.0, 0.0, 0.0], 1.0).unwrap();
        let b = spectral_coefficients(&p).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for (g, w) in b.iter().zip([0.5, h, 0.5]) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_coefficients_match_explicit_projection() {
        let rhs: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).cos() + 0.1).collect();
        let p = PoissonProblem::new(4, 2, rhs.clone(), 1.0).unwrap();
        let b = spectral_coefficients(&p).unwrap();
        let e = eigen_nd(4, 2).unwrap();
        let rhs = normalize(&rhs);
        for (flat, bj) in b.iter().enumerate() {
            let u = e.eigenvector(&e.multi_index(flat)).unwrap();
            let dot: f64 = u.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            assert!((dot - bj).abs() < 1e-12);
        }
    }

    #[test]
    fn small_alpha_limit() {
        let mut p = PoissonProblem::new(4, 1, vec![1.0, 0.0, 0.0], 0.01).unwrap();
        let omega = expected_success_probability(&p, EigenApprox::Exact).unwrap();
        let b = spectral_coefficients(&p).unwrap();
        let e = eigen_nd(4, 1).unwrap();
        let limit: f64 = p.alpha
            * p.alpha
            * b.iter()
                .zip(&e.eigenvalues)
                .map(|(b, l)| b * b / (l * l))
                .sum::<f64>();
        assert!((omega / limit - 1.0).abs() < 0.01);

        let l1 = e.lambda_min();
        p.alpha = l1 / 8.0;
        let w1 = expected_success_probability(&p, EigenApprox::Exact).unwrap();
        p.alpha = l1 / 4.0;
        let w2 = expected_success_probability(&p, EigenApprox::Exact).unwrap();
        let ratio = w2 / w1;
        assert!((3.8..=4.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn pea_distribution_sums_to_one() {
        for v in [9.37, 32.0, 54.63, 3.5] {
            let p = pea_outcome_distribution(v, 6);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let p = pea_outcome_distribution(32.0, 6);
        assert!((p[32] - 1.0).abs() < 1e-12);
    }
}
