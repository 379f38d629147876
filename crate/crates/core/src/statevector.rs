// Copyright 2026 The grover-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Dense state-vector simulation.
//!
//! Amplitudes are indexed by the big-endian basis index (see [`crate::bits`]),
//! so qubit `q` of an n-qubit register is bit `n - 1 - q`. Every gate in the
//! circuit IR is applied directly: single-qubit gates as stride kernels over
//! index pairs, controlled gates as sign flips or pair swaps on the indices
//! whose control bits are all set.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::qubit_mask;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::grover::{Circuit, GateKind, GateOp};

/// Default ceiling for dense simulation: 2^24 amplitudes, 256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Generator used for every seeded draw in the crate (ChaCha8, seeded from a u64).
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_limit(n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > limit {
        return Err(Error::Resource { n_qubits, limit });
    }
    Ok(())
}

impl StateVector {
    /// |0…0⟩ on `n_qubits`, refusing registers above `limit`.
    pub fn zero_state(n_qubits: usize, limit: usize) -> Result<Self> {
        check_limit(n_qubits, limit)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        let n = self.n_qubits;
        gate.check_bounds(n)?;
        let mask = |q: usize| qubit_mask(n, q) as usize;
        match gate.kind {
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.pair_kernel(mask(gate.qubits[0]), |a, b| ((a + b) * s, (a - b) * s));
            }
            GateKind::X => self.pair_kernel(mask(gate.qubits[0]), |a, b| (b, a)),
            GateKind::Z => self.pair_kernel(mask(gate.qubits[0]), |a, b| (a, -b)),
            GateKind::CZ => {
                let both = mask(gate.qubits[0]) | mask(gate.qubits[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *a = -*a;
                    }
                }
            }
            GateKind::CCX | GateKind::MCX => {
                let (target, controls) = gate.qubits.split_last().expect("validated arity");
                let cmask = controls.iter().fold(0usize, |m, &q| m | mask(q));
                let tmask = mask(*target);
                for i in 0..self.amps.len() {
                    if i & cmask == cmask && i & tmask == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies `f` to every amplitude pair (i, i | mask) with bit `mask` clear in `i`.
    fn pair_kernel(&mut self, mask: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let dim = self.amps.len();
        for base in (0..dim).step_by(2 * mask) {
            let (lo, hi) = self.amps[base..base + 2 * mask].split_at_mut(mask);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = f(*a, *b);
                *a = x;
                *b = y;
            }
        }
    }

    /// Born-rule probabilities as an exhaustive dense distribution.
    pub fn probabilities(&self) -> Distribution {
        let probs = self.amps.iter().map(|a| a.norm_sqr().min(1.0)).collect();
        Distribution::dense(self.n_qubits, probs).expect("state vector length is a power of two")
    }
}

/// Uniform superposition, every amplitude 1/√(2^n).
pub fn init_uniform(n_qubits: usize) -> Result<StateVector> {
    init_uniform_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
}

pub fn init_uniform_with_limit(n_qubits: usize, limit: usize) -> Result<StateVector> {
    check_limit(n_qubits, limit)?;
    let dim = 1usize << n_qubits;
    let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(StateVector {
        n_qubits,
        amps: vec![a; dim],
    })
}

/// Value-level gate application.
pub fn apply_gate(mut state: StateVector, gate: &GateOp) -> Result<StateVector> {
    state.apply(gate)?;
    Ok(state)
}

/// Runs `circuit` from |0…0⟩; initialization comes from the circuit's own H layer.
pub fn run_circuit(circuit: &Circuit) -> Result<StateVector> {
    run_circuit_with_limit(circuit, DEFAULT_MAX_QUBITS)
}

pub fn run_circuit_with_limit(circuit: &Circuit, limit: usize) -> Result<StateVector> {
    let mut state = StateVector::zero_state(circuit.n_qubits, limit)?;
    for op in &circuit.ops {
        state.apply(op)?;
    }
    Ok(state)
}

pub fn probabilities(state: &StateVector) -> Distribution {
    state.probabilities()
}

/// Draws `shots` samples from an exhaustive distribution with [`SeededRng`]
/// seeded by `seed`, returning empirical frequencies of the observed states.
pub fn sample_shots(dist: &Distribution, shots: u64, seed: u64) -> Result<Distribution> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if !dist.is_exhaustive() {
        return Err(Error::InvalidArgument(
            "cannot sample from a truncated distribution".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();

    if dist.is_two_value() {
        // Marked states are drawn individually; the unmarked block as one
        // outcome followed by a uniform pick among unmarked indices.
        let dim = dist.dim();
        let (marked, unmarked_each) = dist.two_value_parts().expect("checked two-value");
        let unmarked_total = (dim - marked.len() as u64) as f64 * unmarked_each;
        let mut weights: Vec<f64> = marked.iter().map(|&(_, p)| p).collect();
        weights.push(unmarked_total.max(0.0));
        let picker = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(format!("cannot sample: {e}")))?;
        for _ in 0..shots {
            let slot = picker.sample(&mut rng);
            let idx = if slot < marked.len() {
                marked[slot].0
            } else {
                loop {
                    let cand = rng.gen_range(0..dim);
                    if marked.binary_search_by_key(&cand, |&(k, _)| k).is_err() {
                        break cand;
                    }
                }
            };
            *counts.entry(idx).or_default() += 1;
        }
    } else {
        let entries: Vec<(u64, f64)> = dist.iter().collect();
        let picker = WeightedIndex::new(entries.iter().map(|&(_, p)| p))
            .map_err(|e| Error::InvalidArgument(format!("cannot sample: {e}")))?;
        for _ in 0..shots {
            *counts.entry(entries[picker.sample(&mut rng)].0).or_default() += 1;
        }
    }

    let freqs = counts.into_iter().map(|(k, c)| (k, c as f64 / shots as f64)).collect();
    Distribution::sparse(dist.n_qubits(), freqs, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::{build_circuit, GroverInstance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = seeded_rng(seed);
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn uniform_amplitudes() {
        let s = init_uniform(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.amplitudes().iter().all(|a| (a.re - h).abs() < 1e-15 && a.im == 0.0));
        let s = init_uniform(3).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.35355339).abs() < 1e-8));
    }

    #[test]
    fn resource_limit() {
        assert!(matches!(init_uniform(25), Err(Error::Resource { .. })));
        assert!(init_uniform_with_limit(5, 4).is_err());
        assert!(StateVector::zero_state(0, 24).is_err());
    }

    #[test]
    fn x_flips_zero_to_one() {
        let s = StateVector::zero_state(1, 24).unwrap();
        let s = apply_gate(s, &GateOp::single(GateKind::X, 0)).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn z_flips_sign_of_one() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let s = apply_gate(s, &GateOp::single(GateKind::Z, 0)).unwrap();
        assert_eq!(s.amplitudes(), &[c(h, 0.0), c(-h, 0.0)]);
    }

    #[test]
    fn hadamard_is_self_inverse() {
        for seed in 0..10 {
            let orig = random_state(4, seed);
            let mut s = orig.clone();
            for q in 0..4 {
                s.apply(&GateOp::single(GateKind::H, q)).unwrap();
                s.apply(&GateOp::single(GateKind::H, q)).unwrap();
            }
            for (a, b) in s.amplitudes().iter().zip(orig.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn out_of_range_operand() {
        let mut s = StateVector::zero_state(2, 24).unwrap();
        assert!(s.apply(&GateOp::single(GateKind::H, 2)).is_err());
    }

    #[test]
    fn empty_circuit_stays_at_zero() {
        let s = run_circuit(&Circuit::empty(2)).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn probabilities_of_basis_and_uniform() {
        let s = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = s.probabilities();
        assert_eq!(d.prob_of("0").unwrap(), 1.0);
        assert_eq!(d.prob_of("1").unwrap(), 0.0);
        let u = init_uniform(2).unwrap().probabilities();
        assert!(u.iter().all(|(_, p)| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn grover_four_qubit_probabilities() {
        let inst = GroverInstance::from_bitstrings(4, &["0000"]).unwrap();
        let d = run_circuit(&build_circuit(&inst, None).unwrap())
            .unwrap()
            .probabilities();
        assert!((d.prob(0) - 0.9613).abs() < 1e-4);
        for i in 1..16 {
            assert!((d.prob(i) - 0.002579).abs() < 1e-6);
        }
    }

    #[test]
    fn two_marked_three_qubits_is_exact() {
        let inst = GroverInstance::from_bitstrings(3, &["011", "101"]).unwrap();
        let d = run_circuit(&build_circuit(&inst, None).unwrap())
            .unwrap()
            .probabilities();
        assert!((d.prob_of("011").unwrap() - 0.5).abs() < 1e-12);
        assert!((d.prob_of("101").unwrap() - 0.5).abs() < 1e-12);
        for bits in ["000", "001", "010", "100", "110", "111"] {
            assert!(d.prob_of(bits).unwrap() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = Distribution::dense(1, vec![1.0, 0.0]).unwrap();
        let s = sample_shots(&d, 17, 3).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);

        let inst = GroverInstance::from_bitstrings(4, &["0000"]).unwrap();
        let d = run_circuit(&build_circuit(&inst, None).unwrap())
            .unwrap()
            .probabilities();
        let a = serde_json::to_string(&sample_shots(&d, 1000, 42).unwrap()).unwrap();
        let b = serde_json::to_string(&sample_shots(&d, 1000, 42).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_rejects_bad_input() {
        let d = Distribution::dense(1, vec![0.5, 0.5]).unwrap();
        assert!(sample_shots(&d, 0, 1).is_err());
        let t = Distribution::sparse(1, [(0, 0.5)].into_iter().collect(), false).unwrap();
        assert!(sample_shots(&t, 10, 1).is_err());
    }

    #[test]
    fn two_value_sampling_concentrates() {
        let d = Distribution::two_value(20, vec![(12345, 0.5)], 0.5 / ((1u64 << 20) - 1) as f64).unwrap();
        let s = sample_shots(&d, 20_000, 9).unwrap();
        assert!((s.prob(12345) - 0.5).abs() < 0.02);
    }
}
