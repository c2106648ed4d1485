//! Run dispatch and report encoding.
//!
//! Every float in either format is rounded to 12 significant digits by
//! [`round_sig`], so JSON and CSV carry identical numbers.

use std::fs;
use std::path::Path;

use qpoisson_core::oracle::{expected_success_probability, EigenApprox};
use qpoisson_core::pipeline::{
    pea_histogram, resource_estimate_with, success_probability_curve, PeaHistogram, ResourceEstimate,
};
use qpoisson_core::{run_pipeline, SolveMode, SolveReport};
use serde::Serialize;
use serde_json::{Number, Value};

use crate::config::{Format, Mode, RunConfig};
use crate::AppError;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RunResult {
    Solve(Box<SolveReport>),
    PeaHist(PeaHistogram),
    AlphaSweep(SweepReport),
    Resources(ResourceEstimate),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Ancilla `|1⟩` probability of the simulated circuit.
    pub success_probability: f64,
    /// Phase-estimation-averaged prediction.
    pub predicted: f64,
    /// `Σ b_J² sin²(α/λ_J)` with exact eigenvalues.
    pub exact_eigenvalue: f64,
}

#[derive(Serialize)]
struct Envelope<'a> {
    config: &'a RunConfig,
    result: &'a RunResult,
}

pub fn execute(config: &RunConfig) -> Result<RunResult, AppError> {
    let problem = config.problem()?;
    Ok(match config.mode {
        Mode::Solve => {
            let mode = if config.ideal_inversion {
                SolveMode::IdealInversion
            } else {
                SolveMode::Full
            };
            RunResult::Solve(Box::new(run_pipeline(&problem, mode)?))
        }
        Mode::PeaHist => RunResult::PeaHist(pea_histogram(&problem, None, config.shots)?),
        Mode::AlphaSweep => {
            let curve = success_probability_curve(&problem, &config.alphas)?;
            let mut points = Vec::with_capacity(curve.len());
            for (alpha, omega) in curve {
                let mut p = problem.clone();
                p.alpha = alpha;
                points.push(SweepPoint {
                    alpha,
                    success_probability: omega,
                    predicted: expected_success_probability(&p, EigenApprox::PhaseEstimation)?,
                    exact_eigenvalue: expected_success_probability(&p, EigenApprox::Exact)?,
                });
            }
            RunResult::AlphaSweep(SweepReport { points })
        }
        Mode::Resources => RunResult::Resources(resource_estimate_with(
            config.grid,
            config.dim,
            problem.eigen_register_size(),
        )?),
    })
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON `{"config": …, "result": …}` with a trailing newline.
pub fn render_json(config: &RunConfig, result: &RunResult) -> Result<String, AppError> {
    let mut v = serde_json::to_value(Envelope { config, result })
        .map_err(|e| AppError::Io(format!("encoding report: {e}")))?;
    round_value(&mut v);
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| AppError::Io(format!("encoding report: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn num(x: f64) -> String {
    Number::from_f64(round_sig(x)).map_or_else(|| x.to_string(), |n| n.to_string())
}

/// CSV projection of a result.
///
/// * solve: `grid_index,amplitude,reference` (0-based row-major index)
/// * pea-hist: `value,count`
/// * alpha-sweep: `alpha,success_probability`
/// * resources: `quantity,value`
pub fn render_csv(result: &RunResult) -> Result<String, AppError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| AppError::Io(format!("encoding csv: {e}"));
    match result {
        RunResult::Solve(r) => {
            w.write_record(["grid_index", "amplitude", "reference"])
                .map_err(io)?;
            for (i, (a, b)) in r.solution.iter().zip(&r.reference).enumerate() {
                w.write_record([i.to_string(), num(*a), num(*b)]).map_err(io)?;
            }
        }
        RunResult::PeaHist(h) => {
            w.write_record(["value", "count"]).map_err(io)?;
            for (value, count) in &h.counts {
                w.write_record([value.to_string(), count.to_string()])
                    .map_err(io)?;
            }
        }
        RunResult::AlphaSweep(s) => {
            w.write_record(["alpha", "success_probability"]).map_err(io)?;
            for p in &s.points {
                w.write_record([num(p.alpha), num(p.success_probability)])
                    .map_err(io)?;
            }
        }
        RunResult::Resources(r) => {
            w.write_record(["quantity", "value"]).map_err(io)?;
            let rows = [
                ("grid", r.grid),
                ("dim", r.dim),
                ("register_size", r.register_size),
                ("paper_qubits", r.paper_qubits),
                ("simulator_qubits", r.simulator_qubits),
                ("rotation_gates", r.rotation_gates),
                ("phase_gates", r.phase_gates),
            ];
            for (k, v) in rows {
                w.write_record([k.to_string(), v.to_string()]).map_err(io)?;
            }
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| AppError::Io(format!("encoding csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| AppError::Io(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), AppError> {
    fs::write(path, text).map_err(|e| AppError::Io(format!("writing {}: {e}", path.display())))
}

pub fn write_outputs(config: &RunConfig, result: &RunResult) -> Result<(), AppError> {
    let primary = match config.format {
        Format::Json => render_json(config, result)?,
        Format::Csv => render_csv(result)?,
    };
    match &config.output {
        Some(path) => write_file(path, &primary)?,
        None => print!("{primary}"),
    }
    if let Some(path) = &config.csv {
        write_file(path, &render_csv(result)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(1.234567890123456e-7), 1.23456789012e-7);
        assert_eq!(round_sig(-2.0 / 3.0), -0.666666666667);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn json_rounds_nested_floats() {
        let mut v = serde_json::json!({"a": [0.30000000000000004, 2], "b": {"c": 1.0000000000001}});
        round_value(&mut v);
        assert_eq!(v, serde_json::json!({"a": [0.3, 2], "b": {"c": 1.0}}));
    }
}
