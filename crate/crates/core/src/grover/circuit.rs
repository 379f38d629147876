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

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Z,
    CZ,
    CCX,
    /// Multi-controlled X; the last operand is the target.
    MCX,
}

impl GateKind {
    /// Lower-case QASM mnemonic (without any `mcx_` label suffix).
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::CZ => "cz",
            GateKind::CCX => "ccx",
            GateKind::MCX => "mcx",
        }
    }

    pub fn is_single_qubit(self) -> bool {
        matches!(self, GateKind::H | GateKind::X | GateKind::Z)
    }

    fn arity_ok(self, operands: usize) -> bool {
        match self {
            GateKind::H | GateKind::X | GateKind::Z => operands == 1,
            GateKind::CZ => operands == 2,
            GateKind::CCX => operands == 3,
            GateKind::MCX => operands >= 2,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self> {
        if !kind.arity_ok(qubits.len()) {
            return Err(Error::InvalidGate(format!(
                "{kind} cannot take {} operands",
                qubits.len()
            )));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::InvalidGate(format!("{kind} repeats operand q[{q}]")));
            }
        }
        Ok(GateOp {
            kind,
            qubits,
            label: None,
        })
    }

    pub fn single(kind: GateKind, qubit: usize) -> Self {
        debug_assert!(kind.is_single_qubit());
        GateOp {
            kind,
            qubits: vec![qubit],
            label: None,
        }
    }

    /// Multi-controlled X: two controls become CCX, anything else MCX.
    pub fn controlled_x(controls: &[usize], target: usize) -> Self {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        let kind = if controls.len() == 2 {
            GateKind::CCX
        } else {
            GateKind::MCX
        };
        GateOp {
            kind,
            qubits,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gate has operands")
    }

    pub fn check_bounds(&self, n_qubits: usize) -> Result<()> {
        match self.qubits.iter().find(|&&q| q >= n_qubits) {
            Some(q) => Err(Error::InvalidGate(format!(
                "{} operand q[{q}] out of range for {n_qubits} qubits",
                self.kind
            ))),
            None => Ok(()),
        }
    }
}

/// Ordered gate list over a fixed register. `iterations` records how many
/// (oracle, diffuser) rounds follow the initialization layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<GateOp>,
    pub iterations: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, ops: Vec<GateOp>, iterations: usize) -> Result<Self> {
        for op in &ops {
            op.check_bounds(n_qubits)?;
        }
        Ok(Circuit {
            n_qubits,
            ops,
            iterations,
        })
    }

    pub fn empty(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            iterations: 0,
        }
    }

    pub fn mcx_labels(&self) -> impl Iterator<Item = Option<&str>> {
        self.ops
            .iter()
            .filter(|op| op.kind == GateKind::MCX)
            .map(|op| op.label.as_deref())
    }

    /// Number of complete Hadamard layers (H on q[0], …, q[n-1] in order).
    ///
    /// A Grover circuit has one from initialization and two per diffuser, which
    /// is how parsers recover `iterations` from plain gate text.
    pub fn count_hadamard_layers(&self) -> usize {
        let n = self.n_qubits;
        if n == 0 {
            return 0;
        }
        let mut layers = 0;
        let mut i = 0;
        while i < self.ops.len() {
            let is_layer = i + n <= self.ops.len()
                && self.ops[i..i + n]
                    .iter()
                    .enumerate()
                    .all(|(q, op)| op.kind == GateKind::H && op.qubits[0] == q);
            if is_layer {
                layers += 1;
                i += n;
            } else {
                i += 1;
            }
        }
        layers
    }
}
