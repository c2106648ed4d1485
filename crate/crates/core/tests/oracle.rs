mod common;

use common::{kron, to_nalgebra};
use nalgebra::DMatrix;
use qpoisson_core::oracle::*;
use qpoisson_core::PoissonProblem;

fn numeric_spectrum(grid: usize, dim: usize) -> Vec<f64> {
    let a = to_nalgebra(&poisson_matrix_nd(grid, dim).unwrap());
    let mut ev: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[test]
fn analytic_spectrum_matches_dense_eigensolver() {
    for grid in [2, 4, 8] {
        for dim in [1, 2] {
            let analytic = eigen_nd(grid, dim).unwrap().sorted();
            let numeric = numeric_spectrum(grid, dim);
            assert_eq!(analytic.len(), numeric.len());
            for (a, n) in analytic.iter().zip(&numeric) {
                assert!((a - n).abs() < 1e-8, "M={grid} d={dim}: {a} vs {n}");
            }
        }
    }
}

#[test]
fn m4_eigenvalues() {
    let ev: Vec<f64> = (1..4).map(|j| eigenvalue_1d(4, j).unwrap()).collect();
    for (got, want) in ev.iter().zip([9.37, 32.0, 54.63]) {
        assert!((got - want).abs() < 0.01, "{got}");
    }
}

#[test]
fn eigenvectors_satisfy_eigen_equation() {
    for grid in [4, 8] {
        let a = to_nalgebra(&poisson_matrix_1d(grid).unwrap());
        for j in 1..grid {
            let u = nalgebra::DVector::from_vec(eigenvector_1d(grid, j).unwrap());
            let r = &a * &u - eigenvalue_1d(grid, j).unwrap() * &u;
            assert!(r.amax() < 1e-9);
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn nd_matrix_is_kronecker_sum() {
    for grid in [4, 8] {
        let a1 = to_nalgebra(&poisson_matrix_1d(grid).unwrap());
        let id = DMatrix::<f64>::identity(grid - 1, grid - 1);
        let want2 = kron(&a1, &id) + kron(&id, &a1);
        let got2 = to_nalgebra(&poisson_matrix_nd(grid, 2).unwrap());
        assert!((got2 - &want2).amax() < 1e-12);
        if grid == 4 {
            let want3 = kron(&a1, &kron(&id, &id)) + kron(&id, &kron(&a1, &id)) + kron(&id, &kron(&id, &a1));
            let got3 = to_nalgebra(&poisson_matrix_nd(grid, 3).unwrap());
            assert!((got3 - want3).amax() < 1e-12);
        }
    }
}

#[test]
fn lu_matches_nalgebra() {
    let a = poisson_matrix_nd(8, 2).unwrap();
    let b: Vec<f64> = (0..49).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
    let ours = lu_solve(&a, &b).unwrap();
    let theirs = to_nalgebra(&a)
        .lu()
        .solve(&nalgebra::DVector::from_vec(b))
        .unwrap();
    for (x, y) in ours.iter().zip(theirs.iter()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn first_example_reference() {
    let p = PoissonProblem::new(4, 1, vec![1.0, 0.0, 0.0], 1.0).unwrap();
    let sol = solve_classical(&p).unwrap();
    let s = 14f64.sqrt();
    for (got, want) in sol.normalized.iter().zip([3.0 / s, 2.0 / s, 1.0 / s]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn spectral_coefficients_match_projection() {
    let rhs: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).cos()).collect();
    let p = PoissonProblem::new(4, 2, rhs.clone(), 1.0).unwrap();
    let coeffs = spectral_coefficients(&p).unwrap();
    let eig = eigen_nd(4, 2).unwrap();
    let b = normalize(&rhs);
    for (flat, c) in coeffs.iter().enumerate() {
        let u = eig.eigenvector(&eig.multi_index(flat)).unwrap();
        let proj: f64 = u.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((proj - c).abs() < 1e-12);
    }
}

#[test]
fn dst_diagonalizes() {
    let s = to_nalgebra(&dst_matrix(8).unwrap());
    let a = to_nalgebra(&poisson_matrix_1d(8).unwrap());
    let d = &s * a * &s;
    for r in 0..7 {
        for c in 0..7 {
            let want = if r == c {
                eigenvalue_1d(8, r + 1).unwrap()
            } else {
                0.0
            };
            assert!((d[(r, c)] - want).abs() < 1e-9);
        }
    }
}

#[test]
fn phase_estimation_distribution_sums_to_one() {
    for v in [9.37, 32.0, 54.63, 0.5] {
        let p = pea_outcome_distribution(v, 6);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    assert!(pea_outcome_distribution(9.37, 6)[9] >= 4.0 / (std::f64::consts::PI.powi(2)));
}
