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

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

use super::{Circuit, GateKind, GateOp, GroverInstance};

/// floor(π/4 · √(N/M)), clamped to at least one iteration.
pub fn optimal_iterations(n_qubits: usize, marked_count: usize) -> Result<usize> {
    if n_qubits > super::instance::MAX_QUBITS {
        return Err(Error::InvalidInstance(format!("{n_qubits} qubits is out of range")));
    }
    let dim = 1u64 << n_qubits;
    if marked_count == 0 || marked_count as u64 >= dim {
        return Err(Error::InvalidInstance(format!(
            "marked count {marked_count} must be in 1..{dim}"
        )));
    }
    let k = (FRAC_PI_4 * (dim as f64 / marked_count as f64).sqrt()).floor() as usize;
    Ok(k.max(1))
}

/// Phase-flip oracle: one reflection per marked state, applied in ascending order.
///
/// Each reflection conjugates a multi-controlled Z on the highest qubit
/// (H · MCX · H) with X on every qubit whose bit is '0'.
pub fn build_oracle(instance: &GroverInstance) -> Vec<GateOp> {
    let n = instance.n_qubits();
    let target = n - 1;
    let controls: Vec<usize> = (0..target).collect();
    let mut ops = Vec::new();
    for bits in instance.marked_bitstrings() {
        let zeros: Vec<usize> = bits
            .bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'0')
            .map(|(q, _)| q)
            .collect();
        ops.extend(zeros.iter().map(|&q| GateOp::single(GateKind::X, q)));
        ops.push(GateOp::single(GateKind::H, target));
        ops.push(GateOp::controlled_x(&controls, target));
        ops.push(GateOp::single(GateKind::H, target));
        ops.extend(zeros.iter().map(|&q| GateOp::single(GateKind::X, q)));
    }
    ops
}

/// Inversion about the mean, up to a global phase of −1.
pub fn build_diffuser(n_qubits: usize) -> Result<Vec<GateOp>> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(format!(
            "diffuser needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let target = n_qubits - 1;
    let controls: Vec<usize> = (0..target).collect();
    let layer = |kind| (0..n_qubits).map(move |q| GateOp::single(kind, q));
    let mut ops = Vec::with_capacity(4 * n_qubits + 3);
    ops.extend(layer(GateKind::H));
    ops.extend(layer(GateKind::X));
    ops.push(GateOp::single(GateKind::H, target));
    ops.push(GateOp::controlled_x(&controls, target));
    ops.push(GateOp::single(GateKind::H, target));
    ops.extend(layer(GateKind::X));
    ops.extend(layer(GateKind::H));
    Ok(ops)
}

/// Initialization layer followed by `iterations` (oracle, diffuser) rounds.
///
/// MCX gates are labelled `0, 1, 2, …` in emission order.
pub fn build_circuit(instance: &GroverInstance, iterations: Option<usize>) -> Result<Circuit> {
    let n = instance.n_qubits();
    let iterations = match iterations {
        Some(0) => {
            return Err(Error::InvalidArgument(
                "a Grover circuit needs at least one iteration".into(),
            ))
        }
        Some(k) => k,
        None => optimal_iterations(n, instance.marked_count())?,
    };
    let oracle = build_oracle(instance);
    let diffuser = build_diffuser(n)?;

    let mut ops = Vec::with_capacity(n + iterations * (oracle.len() + diffuser.len()));
    ops.extend((0..n).map(|q| GateOp::single(GateKind::H, q)));
    for _ in 0..iterations {
        ops.extend(oracle.iter().cloned());
        ops.extend(diffuser.iter().cloned());
    }
    for (label, op) in ops.iter_mut().filter(|op| op.kind == GateKind::MCX).enumerate() {
        op.label = Some(label.to_string());
    }
    Circuit::new(n, ops, iterations)
}
