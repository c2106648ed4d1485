//! End-to-end solver: encode b, phase estimation, reciprocal exponent (INV),
//! controlled rotation (ROT), uncompute, post-select.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::blocks::{ceil_log2, default_register_size, pea_circuit};
use crate::circuit::{Circuit, GateCounts};
use crate::error::{Error, Result};
use crate::gate::{pauli_x_matrix, ry_matrix, Control, GateOp};
use crate::layout::{grid_linear_to_basis, RegisterLayout};
use crate::oracle::{eigen_nd, expected_success_probability, normalize, solve_classical, EigenApprox};
use crate::problem::{interior_len, PoissonProblem};
use crate::rng::seeded;
use crate::state::Statevector;

/// Post-selection below this probability is reported as a failure.
pub const SUCCESS_EPS: f64 = 1e-12;

pub type Histogram = BTreeMap<usize, usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolveMode {
    /// INV, ROT and their uncomputation as circuits.
    Full,
    /// Each register B branch `k` is scaled by `min(α/k, 1)` directly.
    IdealInversion,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResourceEstimate {
    pub grid: usize,
    pub dim: usize,
    pub register_size: usize,
    /// `7 + 2⌈log₂d⌉ + (4+d)·log₂M`, counting the sine-transform ancilla and
    /// the INV flag qubit.
    pub paper_qubits: usize,
    /// `d·log₂M + 2n + 1`.
    pub simulator_qubits: usize,
    /// `n + n²` controlled rotations.
    pub rotation_gates: usize,
    /// `n·d·(M−1)` selective phases per phase estimation.
    pub phase_gates: usize,
}

pub fn resource_estimate(grid: usize, dim: usize) -> Result<ResourceEstimate> {
    interior_len(grid, dim)?;
    resource_estimate_with(grid, dim, default_register_size(grid, dim))
}

pub fn resource_estimate_with(grid: usize, dim: usize, n: usize) -> Result<ResourceEstimate> {
    interior_len(grid, dim)?;
    let m = grid.trailing_zeros() as usize;
    Ok(ResourceEstimate {
        grid,
        dim,
        register_size: n,
        paper_qubits: 7 + 2 * ceil_log2(dim) + (4 + dim) * m,
        simulator_qubits: dim * m + 2 * n + 1,
        rotation_gates: n + n * n,
        phase_gates: n * dim * (grid - 1),
    })
}

/// Layout for `problem`, checked against its qubit cap.
pub fn layout_for(problem: &PoissonProblem) -> Result<RegisterLayout> {
    problem.validate()?;
    let layout = RegisterLayout::new(problem.grid, problem.dim, problem.eigen_register_size())?;
    if layout.total_qubits > problem.qubit_cap {
        return Err(Error::Capacity {
            requested: layout.total_qubits,
            cap: problem.qubit_cap,
        });
    }
    Ok(layout)
}

/// All registers `|0⟩` except C, which holds `b/‖b‖` at the valid encoded
/// indices.
pub fn encode_rhs(problem: &PoissonProblem, layout: &RegisterLayout) -> Result<Statevector> {
    encode_into(problem, layout, layout.total_qubits)
}

fn encode_into(problem: &PoissonProblem, layout: &RegisterLayout, num_qubits: usize) -> Result<Statevector> {
    problem.validate()?;
    let b = normalize(&problem.rhs);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
    for (g, &v) in b.iter().enumerate() {
        let c = grid_linear_to_basis(g, problem.grid, problem.dim);
        amps[layout.full_index(c)] = Complex64::new(v, 0.0);
    }
    if num_qubits > problem.qubit_cap {
        return Err(Error::Capacity {
            requested: num_qubits,
            cap: problem.qubit_cap,
        });
    }
    Statevector::from_amplitudes(amps)
}

/// `|0⟩_A|k⟩_B → |onehot(p(k))⟩_A|k⟩_B` with RegA bit `p−1` marking
/// `x₀ = 2^{−p}`; `k < 2` leaves A untouched.
///
/// Scans B from its top qubit: for each leading-one position `q ≥ 1` and
/// each value of bit `q−1`, one multi-controlled X sets A bit `q−1` (bit
/// `q−1` clear) or A bit `q` (a `11` block, rounded off). `2(n−1)` gates.
pub fn inv_circuit(layout: &RegisterLayout) -> Circuit {
    let n = layout.n;
    let b = &layout.reg_b;
    let mut c = Circuit::new("inv");
    for q in (1..n).rev() {
        for next in [false, true] {
            let mut controls: Vec<Control> = (q + 1..n).map(|r| Control::off(b[r])).collect();
            controls.push(Control::on(b[q]));
            controls.push(Control {
                qubit: b[q - 1],
                polarity: next,
            });
            let p = q + usize::from(next);
            c.push(GateOp::Controlled {
                controls,
                target: layout.reg_a[p - 1],
                matrix: pauli_x_matrix(),
            });
        }
    }
    c
}

/// Rotates the ancilla by `α·x₁ = α(2^{1−p} − k·2^{−2p})`.
///
/// `n` rotations controlled on A bit `p−1` add `α·2^{1−p}`; `n²` rotations
/// controlled on A bit `p−1` and B bit `m` subtract `α·2^{m−2p}`.
pub fn rot_circuit(layout: &RegisterLayout, alpha: f64) -> Circuit {
    let n = layout.n;
    let mut c = Circuit::new("rot");
    for p in 1..=n {
        c.push(GateOp::Controlled {
            controls: alloc::vec![Control::on(layout.reg_a[p - 1])],
            target: layout.ancilla,
            matrix: ry_matrix(alpha * 2f64.powi(1 - p as i32)),
        });
    }
    for p in 1..=n {
        for m in 0..n {
            c.push(GateOp::Controlled {
                controls: alloc::vec![Control::on(layout.reg_a[p - 1]), Control::on(layout.reg_b[m])],
                target: layout.ancilla,
                matrix: ry_matrix(-alpha * 2f64.powi(m as i32 - 2 * p as i32)),
            });
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveReport {
    pub mode: SolveMode,
    /// Post-selected register C amplitudes in grid order, global phase fixed
    /// so the largest entry is real positive.
    pub solution: Vec<f64>,
    /// Classical `A⁻¹b/‖A⁻¹b‖`.
    pub reference: Vec<f64>,
    /// `‖|solution| − |reference|‖₂`.
    pub l2_error: f64,
    /// `max |solution − s·reference|` with the sign `s` that fits best.
    pub linf_error: f64,
    /// Probability of reading the rotation ancilla as `|1⟩`.
    pub success_probability: f64,
    /// [`EigenApprox::PhaseEstimation`] prediction (full mode only).
    pub success_probability_expected: Option<f64>,
    pub success_probability_empirical: Option<f64>,
    /// Weight of the successful branch left outside `RegB = RegA = 0` after
    /// uncomputation; zero when every eigenvalue is exactly representable.
    pub uncompute_residual: f64,
    /// Weight on register C states with an all-zero block.
    pub invalid_mass: f64,
    /// Largest imaginary part left after the global phase fix.
    pub max_imaginary: f64,
    pub kappa: f64,
    pub lambda_min: f64,
    /// True when α exceeds `λ_min/2`.
    pub small_angle_violated: bool,
    pub max_rotation_angle: f64,
    pub histograms: BTreeMap<String, Histogram>,
    pub resources: ResourceEstimate,
    pub gate_counts: BTreeMap<String, GateCounts>,
}

/// Runs the solver and compares against the classical solution.
pub fn run_pipeline(problem: &PoissonProblem, mode: SolveMode) -> Result<SolveReport> {
    let layout = layout_for(problem)?;
    let classical = solve_classical(problem)?;
    let eig = eigen_nd(problem.grid, problem.dim)?;
    let alpha = problem.effective_alpha();

    let pea = pea_circuit(problem, &layout)?;
    let mut gate_counts = BTreeMap::new();
    gate_counts.insert(String::from("pea"), pea.counts());

    let mut state = encode_rhs(problem, &layout)?;
    state.apply_circuit(&pea)?;

    let mut histograms = BTreeMap::new();
    let mut empirical = None;
    let (success_probability, expected, max_rotation_angle) = match mode {
        SolveMode::Full => {
            let inv = inv_circuit(&layout);
            let rot = rot_circuit(&layout, alpha);
            gate_counts.insert(String::from("inv"), inv.counts());
            gate_counts.insert(String::from("rot"), rot.counts());
            state.apply_circuit(&inv)?;
            state.apply_circuit(&rot)?;
            state.apply_inverse(&inv)?;
            state.apply_inverse(&pea)?;
            if problem.shots > 0 {
                let h = state.sample_counts(&[layout.ancilla], problem.shots, &mut seeded(problem.seed))?;
                empirical = Some(*h.get(&1).unwrap_or(&0) as f64 / problem.shots as f64);
                histograms.insert(String::from("ancilla"), h);
            }
            let omega = state.probability(layout.ancilla, 1)?;
            if omega < SUCCESS_EPS {
                return Err(Error::NoSuccess { probability: omega });
            }
            state.project(layout.ancilla, 1)?;
            let expected = expected_success_probability(problem, EigenApprox::PhaseEstimation)?;
            // Largest angle over readable k ≥ 2: x₁ peaks at k = 2 (x₁ = 1/2).
            (omega, Some(expected), alpha * 0.5)
        }
        SolveMode::IdealInversion => {
            let omega = state.weight_by_register(&layout.reg_b, |k| {
                if k == 0 {
                    0.0
                } else {
                    (alpha / k as f64).min(1.0)
                }
            })?;
            if omega < SUCCESS_EPS {
                return Err(Error::NoSuccess { probability: omega });
            }
            state.renormalize()?;
            state.apply_inverse(&pea)?;
            (omega, None, alpha)
        }
    };

    let mut work: Vec<usize> = layout.reg_b.clone();
    work.extend(&layout.reg_a);
    let clean = state
        .project_register(&work, 0)
        .map_err(|_| Error::NoSuccess { probability: 0.0 })?;
    let uncompute_residual = 1.0 - clean;

    let dump = state.dump(Some(&layout.reg_c))?;
    let len = classical.normalized.len();
    let mut raw: Vec<Complex64> = (0..len)
        .map(|g| dump[grid_linear_to_basis(g, problem.grid, problem.dim)].1)
        .collect();
    let valid_mass: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
    let invalid_mass = (1.0 - valid_mass).max(0.0);

    let pivot = raw
        .iter()
        .enumerate()
        .fold(
            (0, -1.0),
            |acc, (i, a)| if a.norm() > acc.1 { (i, a.norm()) } else { acc },
        )
        .0;
    let phase = raw[pivot].conj() / raw[pivot].norm();
    raw.iter_mut().for_each(|a| *a *= phase);
    let max_imaginary = raw.iter().map(|a| a.im.abs()).fold(0.0, f64::max);
    let solution: Vec<f64> = raw.iter().map(|a| a.re).collect();

    let reference = classical.normalized;
    let l2_error = solution
        .iter()
        .zip(&reference)
        .map(|(s, r)| (s.abs() - r.abs()).powi(2))
        .sum::<f64>()
        .sqrt();
    let linf = |sign: f64| {
        solution
            .iter()
            .zip(&reference)
            .map(|(s, r)| (s - sign * r).abs())
            .fold(0.0, f64::max)
    };
    let linf_error = linf(1.0).min(linf(-1.0));

    if problem.shots > 0 {
        let h = state.sample_counts(
            &layout.reg_c,
            problem.shots,
            &mut seeded(problem.seed.wrapping_add(1)),
        )?;
        histograms.insert(String::from("reg_c"), h);
    }

    let lambda_min = eig.lambda_min();
    Ok(SolveReport {
        mode,
        solution,
        reference,
        l2_error,
        linf_error,
        success_probability,
        success_probability_expected: expected,
        success_probability_empirical: empirical,
        uncompute_residual,
        invalid_mass,
        max_imaginary,
        kappa: classical.kappa,
        lambda_min,
        small_angle_violated: problem.alpha > lambda_min / 2.0,
        max_rotation_angle,
        histograms,
        resources: resource_estimate_with(problem.grid, problem.dim, layout.n)?,
        gate_counts,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeaHistogram {
    pub register_size: usize,
    pub shots: usize,
    pub seed: u64,
    pub counts: Histogram,
    /// Exact eigenvalues in register units, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Encodes b, runs phase estimation and samples register B.
///
/// Only registers C and B are allocated.
pub fn pea_histogram(
    problem: &PoissonProblem,
    register_size: Option<usize>,
    shots: usize,
) -> Result<PeaHistogram> {
    let mut problem = problem.clone();
    if let Some(n) = register_size {
        problem.register_size = Some(n);
    }
    problem.validate()?;
    let n = problem.eigen_register_size();
    let layout = RegisterLayout::new(problem.grid, problem.dim, n)?;
    let num_qubits = layout.reg_c.len() + n;
    let mut state = encode_into(&problem, &layout, num_qubits)?;
    state.apply_circuit(&pea_circuit(&problem, &layout)?)?;
    let counts = state.sample_counts(&layout.reg_b, shots, &mut seeded(problem.seed))?;
    Ok(PeaHistogram {
        register_size: n,
        shots,
        seed: problem.seed,
        counts,
        eigenvalues: crate::blocks::eigenvalue_register_values(&problem)?,
    })
}

/// Success probability of the full circuit for each α.
///
/// Phase estimation and INV run once; ROT is applied per α. The ancilla
/// marginal is read before uncomputation, which acts on other registers only.
pub fn success_probability_curve(problem: &PoissonProblem, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if alphas.is_empty() {
        return Err(Error::Config("alpha list is empty".into()));
    }
    if let Some(&a) = alphas.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidAlpha(a));
    }
    let layout = layout_for(problem)?;
    let mut prepared = encode_rhs(problem, &layout)?;
    prepared.apply_circuit(&pea_circuit(problem, &layout)?)?;
    prepared.apply_circuit(&inv_circuit(&layout))?;
    let scale = problem.effective_alpha() / problem.alpha;
    alphas
        .iter()
        .map(|&a| {
            let mut s = prepared.clone();
            s.apply_circuit(&rot_circuit(&layout, a * scale))?;
            Ok((a, s.probability(layout.ancilla, 1)?))
        })
        .collect()
}
