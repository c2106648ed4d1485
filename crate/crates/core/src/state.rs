//! Dense statevector with in-place gate application, measurement and
//! post-selection.
//!
//! Basis index bit `i` is qubit `i`. Kernels enumerate only the amplitudes a
//! gate can touch: the qubits a gate reads are "fixed" bit positions, and the
//! free positions are enumerated by depositing a counter around them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand_core::RngCore;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{GateOp, Matrix2};
use crate::rng::uniform;

/// Default qubit cap: 2^26 amplitudes, 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Branches below this probability are treated as impossible.
pub const BRANCH_EPS: f64 = 1e-14;

/// Tolerance on `1 − ⟨v|ρ|v⟩` for a subset dump.
pub const PURITY_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Outcome of a single-qubit measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    pub probability: f64,
}

impl Statevector {
    /// `|0…0⟩` on `q` qubits, capped at [`DEFAULT_QUBIT_CAP`].
    pub fn zero(q: usize) -> Result<Self> {
        Self::zero_with_cap(q, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(q: usize, cap: usize) -> Result<Self> {
        Self::basis_with_cap(q, 0, cap)
    }

    pub fn basis_with_cap(q: usize, index: usize, cap: usize) -> Result<Self> {
        if q == 0 || q > cap || q >= usize::BITS as usize {
            return Err(Error::Capacity { requested: q, cap });
        }
        if index >> q != 0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << q,
                found: index,
            });
        }
        let mut amps = vec![ZERO; 1 << q];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits: q, amps })
    }

    /// Wraps an amplitude vector. Length must be a power of two and the norm
    /// must be 1 within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        match op {
            GateOp::Single { target, matrix } => {
                self.apply_2x2(&[*target], 0, *target, matrix);
            }
            GateOp::Controlled {
                controls,
                target,
                matrix,
            } => {
                let mut fixed: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                fixed.push(*target);
                let value = controls
                    .iter()
                    .filter(|c| c.polarity)
                    .fold(0usize, |acc, c| acc | (1 << c.qubit));
                self.apply_2x2(&fixed, value, *target, matrix);
            }
            GateOp::SelectivePhase { qubits, basis, angle } => {
                let phase = Complex64::from_polar(1.0, *angle);
                let value = deposit(*basis, qubits);
                let amps = &mut self.amps;
                for_each_free(self.num_qubits, qubits, value, |i| amps[i] *= phase);
            }
            GateOp::Block { qubits, matrix } => {
                let dim = matrix.dim();
                let offsets: Vec<usize> = (0..dim).map(|l| deposit(l, qubits)).collect();
                let data = matrix.data();
                let mut buf = vec![ZERO; dim];
                let amps = &mut self.amps;
                for_each_free(self.num_qubits, qubits, 0, |base| {
                    for (slot, off) in buf.iter_mut().zip(&offsets) {
                        *slot = amps[base | off];
                    }
                    for (row, off) in offsets.iter().enumerate() {
                        let coeffs = &data[row * dim..(row + 1) * dim];
                        amps[base | off] = coeffs.iter().zip(&buf).fold(ZERO, |acc, (m, a)| acc + m * a);
                    }
                });
            }
        }
        Ok(())
    }

    fn apply_2x2(&mut self, fixed: &[usize], value: usize, target: usize, m: &Matrix2) {
        let tbit = 1usize << target;
        let amps = &mut self.amps;
        for_each_free(self.num_qubits, fixed, value, |i0| {
            let i1 = i0 | tbit;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        });
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        circuit.ops().iter().try_for_each(|op| self.apply(op))
    }

    pub fn apply_inverse(&mut self, circuit: &Circuit) -> Result<()> {
        circuit
            .ops()
            .iter()
            .rev()
            .try_for_each(|op| self.apply(&op.inverse()))
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_subset(&self, qubits: &[usize]) -> Result<()> {
        if qubits.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = 0u128;
        for &q in qubits {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Born probability that `qubit` reads `bit`.
    pub fn probability(&self, qubit: usize, bit: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        let value = if bit != 0 { 1 << qubit } else { 0 };
        let mut p = 0.0;
        for_each_free(self.num_qubits, &[qubit], value, |i| p += self.amps[i].norm_sqr());
        Ok(p)
    }

    /// Measures `qubit`, collapsing and renormalizing the state.
    pub fn measure_qubit<R: RngCore + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<Measurement> {
        let p1 = self.probability(qubit, 1)?;
        let outcome = u8::from(uniform(rng) < p1);
        let probability = self.project(qubit, outcome)?;
        Ok(Measurement { outcome, probability })
    }

    /// Post-selects `qubit` on `bit`; returns the branch probability.
    pub fn project(&mut self, qubit: usize, bit: u8) -> Result<f64> {
        self.project_register(&[qubit], usize::from(bit != 0))
    }

    /// Post-selects the register `qubits` (little-endian) on `value`.
    pub fn project_register(&mut self, qubits: &[usize], value: usize) -> Result<f64> {
        self.check_subset(qubits)?;
        if value >> qubits.len() != 0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits.len(),
                found: value,
            });
        }
        let mask = deposit((1 << qubits.len()) - 1, qubits);
        let want = deposit(value, qubits);
        let probability: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if probability < BRANCH_EPS {
            return Err(Error::DegenerateBranch { probability });
        }
        let scale = 1.0 / probability.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == want {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(probability)
    }

    /// Multiplies each amplitude by `weight(v)`, where `v` is the value of the
    /// register `qubits`. Not unitary: returns the new squared norm and leaves
    /// the state unnormalized; follow with [`Statevector::renormalize`].
    pub fn weight_by_register(&mut self, qubits: &[usize], weight: impl Fn(usize) -> f64) -> Result<f64> {
        self.check_subset(qubits)?;
        let table: Vec<f64> = (0..1usize << qubits.len()).map(weight).collect();
        let mut norm = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= table[extract(i, qubits)];
            norm += a.norm_sqr();
        }
        Ok(norm)
    }

    pub fn renormalize(&mut self) -> Result<f64> {
        let n = self.norm_sqr();
        if n < BRANCH_EPS {
            return Err(Error::DegenerateBranch { probability: n });
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(n)
    }

    /// Marginal distribution of the register `qubits`, indexed by register value.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_subset(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[extract(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Draws `shots` samples of the register `qubits` without collapsing the
    /// state. Keys are register values; absent keys had zero counts.
    pub fn sample_counts<R: RngCore + ?Sized>(
        &self,
        qubits: &[usize],
        shots: usize,
        rng: &mut R,
    ) -> Result<BTreeMap<usize, usize>> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.marginal_probabilities(qubits)?;
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = uniform(rng) * acc;
            let k = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            *counts.entry(k).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Exact amplitudes, no collapse.
    ///
    /// With `None` every basis amplitude is returned. With a subset the state
    /// must factor across the cut: the factor on `qubits` is returned (up to a
    /// global phase), indexed by register value. The check takes the
    /// largest-norm slice `v` of the subset and requires `⟨v|ρ|v⟩ ≥ 1 − 1e-8`
    /// for the subset's reduced density matrix `ρ`.
    pub fn dump(&self, qubits: Option<&[usize]>) -> Result<Vec<(usize, Complex64)>> {
        let Some(qubits) = qubits else {
            return Ok(self.amps.iter().copied().enumerate().collect());
        };
        self.check_subset(qubits)?;
        let k = qubits.len();
        if k == self.num_qubits {
            let mut out = vec![(0, ZERO); 1 << k];
            for (i, a) in self.amps.iter().enumerate() {
                let l = extract(i, qubits);
                out[l] = (l, *a);
            }
            return Ok(out);
        }
        let rest: Vec<usize> = (0..self.num_qubits).filter(|q| !qubits.contains(q)).collect();
        let mut weights = vec![0.0f64; 1 << rest.len()];
        for (i, a) in self.amps.iter().enumerate() {
            weights[extract(i, &rest)] += a.norm_sqr();
        }
        let (best, _) = weights
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (r, &w)| if w > acc.1 { (r, w) } else { acc });
        let best_base = deposit(best, &rest);
        let norm = weights[best].sqrt();
        let factor: Vec<Complex64> = (0..1usize << k)
            .map(|l| self.amps[best_base | deposit(l, qubits)] / norm)
            .collect();

        let mut overlaps = vec![ZERO; 1 << rest.len()];
        for (i, a) in self.amps.iter().enumerate() {
            overlaps[extract(i, &rest)] += factor[extract(i, qubits)].conj() * a;
        }
        let total = self.norm_sqr();
        let purity = overlaps.iter().map(|o| o.norm_sqr()).sum::<f64>() / total;
        if 1.0 - purity > PURITY_TOL {
            return Err(Error::Entangled { purity });
        }
        Ok(factor.into_iter().enumerate().collect())
    }
}

/// Spreads the low bits of `value` onto the positions in `qubits`.
pub fn deposit(value: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (b, &q)| acc | (((value >> b) & 1) << q))
}

/// Reads the register `qubits` out of a basis index.
pub fn extract(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (b, &q)| acc | (((index >> q) & 1) << b))
}

/// Calls `f` on every basis index whose `fixed` bits equal those of `value`.
fn for_each_free(num_qubits: usize, fixed: &[usize], value: usize, mut f: impl FnMut(usize)) {
    let mut sorted: Vec<usize> = fixed.to_vec();
    sorted.sort_unstable();
    let free = num_qubits - sorted.len();
    // Ascending positions: each insertion is already in final coordinates.
    let low_masks: Vec<usize> = sorted.iter().map(|&p| (1usize << p) - 1).collect();
    for counter in 0..(1usize << free) {
        let mut idx = counter;
        for &low in &low_masks {
            idx = ((idx & !low) << 1) | (idx & low);
        }
        f(idx | value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{Control, GateOp};
    use crate::rng::seeded;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn plus() -> Statevector {
        let mut s = Statevector::zero(1).unwrap();
        s.apply(&GateOp::h(0)).unwrap();
        s
    }

    #[test]
    fn zero_state() {
        let s = Statevector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
        let s = Statevector::zero(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amplitudes()[0], c(1.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == ZERO));
    }

    #[test]
    fn capacity_enforced() {
        assert_eq!(
            Statevector::zero(27).unwrap_err(),
            Error::Capacity {
                requested: 27,
                cap: 26
            }
        );
        assert!(Statevector::zero(0).is_err());
        assert!(Statevector::zero_with_cap(5, 4).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let s = plus();
        assert!(close(
            s.amplitudes(),
            &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
            1e-15
        ));
    }

    #[test]
    fn selective_phase_flips_one_amplitude() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply(&GateOp::h(0)).unwrap();
        s.apply(&GateOp::h(1)).unwrap();
        s.apply(&GateOp::SelectivePhase {
            qubits: vec![0, 1],
            basis: 3,
            angle: PI,
        })
        .unwrap();
        assert!(close(s.amplitudes(), &[c(0.5), c(0.5), c(0.5), c(-0.5)], 1e-15));
    }

    #[test]
    fn cnot_on_one_zero() {
        // |10⟩ in ket order q1 q0 with the control (q1) set.
        let mut s = Statevector::basis_with_cap(2, 0b10, 26).unwrap();
        s.apply(&GateOp::cnot(1, 0)).unwrap();
        assert_eq!(s.amplitudes()[0b11], c(1.0));
    }

    #[test]
    fn negative_polarity_control() {
        let mut s = Statevector::zero(2).unwrap();
        let op = GateOp::Controlled {
            controls: vec![Control::off(1)],
            target: 0,
            matrix: crate::gate::pauli_x_matrix(),
        };
        s.apply(&op).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0));
    }

    #[test]
    fn measure_basis_state() {
        let mut s = Statevector::basis_with_cap(1, 1, 26).unwrap();
        let m = s.measure_qubit(0, &mut seeded(3)).unwrap();
        assert_eq!(m.outcome, 1);
        assert!((m.probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measurement_frequency_of_plus() {
        // 3σ binomial band for p = 0.5, N = 10000 is ±0.015.
        let mut rng = seeded(2024);
        let mut ones = 0;
        for _ in 0..10_000 {
            let mut s = plus();
            ones += usize::from(s.measure_qubit(0, &mut rng).unwrap().outcome);
        }
        let f = ones as f64 / 10_000.0;
        assert!((0.485..=0.515).contains(&f), "frequency {f}");
    }

    #[test]
    fn bell_measurement_correlates() {
        let mut rng = seeded(9);
        for _ in 0..20 {
            let mut s = Statevector::zero(2).unwrap();
            s.apply(&GateOp::h(0)).unwrap();
            s.apply(&GateOp::cnot(0, 1)).unwrap();
            let m = s.measure_qubit(0, &mut rng).unwrap();
            assert!((s.probability(1, m.outcome).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn project_plus_and_zero() {
        let mut s = plus();
        let p = s.project(0, 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(close(s.amplitudes(), &[c(0.0), c(1.0)], 1e-15));

        let mut z = Statevector::zero(1).unwrap();
        assert!(matches!(z.project(0, 1), Err(Error::DegenerateBranch { .. })));
    }

    #[test]
    fn sampling_zero_state() {
        let s = Statevector::zero(1).unwrap();
        let h = s.sample_counts(&[0], 100, &mut seeded(0)).unwrap();
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(0, 100)]);
        assert_eq!(
            s.sample_counts(&[], 1, &mut seeded(0)).unwrap_err(),
            Error::EmptySubset
        );
        assert_eq!(
            s.sample_counts(&[0], 0, &mut seeded(0)).unwrap_err(),
            Error::ZeroShots
        );
    }

    #[test]
    fn sampling_uniform_within_three_sigma() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply(&GateOp::h(0)).unwrap();
        s.apply(&GateOp::h(1)).unwrap();
        let h = s.sample_counts(&[0, 1], 4000, &mut seeded(11)).unwrap();
        // σ = sqrt(4000·0.25·0.75) ≈ 27.4
        let sigma = (4000.0f64 * 0.25 * 0.75).sqrt();
        for v in 0..4 {
            let n = *h.get(&v).unwrap_or(&0) as f64;
            assert!((n - 1000.0).abs() <= 3.0 * sigma, "bin {v}: {n}");
        }
        assert_eq!(h.values().sum::<usize>(), 4000);
        let again = s.sample_counts(&[0, 1], 4000, &mut seeded(11)).unwrap();
        assert_eq!(h, again);
    }

    #[test]
    fn full_dump_of_plus() {
        let d = plus().dump(None).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, 0);
        assert!((d[0].1 - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((d[1].1 - c(FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn subset_dump_of_product_state() {
        // |+⟩ on qubit 0, |1⟩ on qubit 1.
        let mut s = Statevector::zero(2).unwrap();
        s.apply(&GateOp::h(0)).unwrap();
        s.apply(&GateOp::x(1)).unwrap();
        let d = s.dump(Some(&[0])).unwrap();
        assert!((d[0].1 - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((d[1].1 - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        let d = s.dump(Some(&[1])).unwrap();
        assert!(d[0].1.norm() < 1e-12 && (d[1].1.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subset_dump_across_entangled_cut_fails() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply(&GateOp::h(0)).unwrap();
        s.apply(&GateOp::cnot(0, 1)).unwrap();
        assert!(matches!(s.dump(Some(&[0])), Err(Error::Entangled { .. })));
    }

    #[test]
    fn deposit_extract_roundtrip() {
        let qs = [4, 1, 6];
        for v in 0..8 {
            assert_eq!(extract(deposit(v, &qs), &qs), v);
        }
        assert_eq!(deposit(0b011, &qs), (1 << 4) | (1 << 1));
    }
}
