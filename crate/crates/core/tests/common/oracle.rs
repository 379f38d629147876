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

//! Reference computations that share no code with the library.

use grover_bench::{GateKind, GateOp};
use num_complex::Complex64;

/// Grover by direct real-vector iteration: phase flip on marked entries, then
/// reflection about the mean.
pub fn brute_force_grover(n_qubits: usize, marked: &[u64], iterations: usize) -> Vec<f64> {
    let dim = 1usize << n_qubits;
    let mut a = vec![1.0 / (dim as f64).sqrt(); dim];
    for _ in 0..iterations {
        for &m in marked {
            a[m as usize] = -a[m as usize];
        }
        let mean = a.iter().sum::<f64>() / dim as f64;
        for x in a.iter_mut() {
            *x = 2.0 * mean - *x;
        }
    }
    a.iter().map(|x| x * x).collect()
}

/// floor(pi/4 * sqrt(N/M)), at least 1.
pub fn reference_iterations(n_qubits: usize, m: usize) -> usize {
    let r = std::f64::consts::FRAC_PI_4 * ((1u64 << n_qubits) as f64 / m as f64).sqrt();
    (r.floor() as usize).max(1)
}

fn bit(index: usize, n_qubits: usize, qubit: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

fn others_equal(r: usize, c: usize, n_qubits: usize, qubit: usize) -> bool {
    let mask = 1usize << (n_qubits - 1 - qubit);
    (r & !mask) == (c & !mask)
}

/// Matrix element <r|U|c> of a gate, from its textbook definition.
pub fn gate_element(op: &GateOp, n_qubits: usize, r: usize, c: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let q = &op.qubits;
    match op.kind {
        GateKind::H => {
            if !others_equal(r, c, n_qubits, q[0]) {
                return zero;
            }
            let sign = if bit(r, n_qubits, q[0]) & bit(c, n_qubits, q[0]) == 1 {
                -1.0
            } else {
                1.0
            };
            Complex64::new(sign / 2f64.sqrt(), 0.0)
        }
        GateKind::X => {
            if others_equal(r, c, n_qubits, q[0]) && r != c {
                one
            } else {
                zero
            }
        }
        GateKind::Z => {
            if r != c {
                zero
            } else if bit(c, n_qubits, q[0]) == 1 {
                -one
            } else {
                one
            }
        }
        GateKind::CZ => {
            if r != c {
                zero
            } else if bit(c, n_qubits, q[0]) == 1 && bit(c, n_qubits, q[1]) == 1 {
                -one
            } else {
                one
            }
        }
        GateKind::CCX | GateKind::MCX => {
            let (controls, target) = q.split_at(q.len() - 1);
            let fire = controls.iter().all(|&k| bit(c, n_qubits, k) == 1);
            let expect = if fire {
                c ^ (1usize << (n_qubits - 1 - target[0]))
            } else {
                c
            };
            if r == expect {
                one
            } else {
                zero
            }
        }
    }
}

/// Dense matrix-vector product with the gate's full 2^n x 2^n unitary.
pub fn apply_dense(op: &GateOp, state: &[Complex64]) -> Vec<Complex64> {
    let dim = state.len();
    let n = dim.trailing_zeros() as usize;
    (0..dim)
        .map(|r| (0..dim).map(|c| gate_element(op, n, r, c) * state[c]).sum())
        .collect()
}

/// Bitstring for an index with character j = qubit j.
pub fn bits(index: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|j| {
            if (index >> (n_qubits - 1 - j)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
