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

use std::fmt::Write as _;

use super::simplified::{render_statements, Operand, Stmt};
use super::{QasmDocument, QasmStyle};
use crate::grover::{build_diffuser, build_oracle, Circuit, GateKind, GateOp, GroverInstance};

/// Gate-definition policy for full listings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ListingGates {
    /// Named `U_omega`/`U_s` definitions when the circuit is a single Grover
    /// iteration built for the given instance, otherwise inline.
    #[default]
    Auto,
    Inline,
}

pub(crate) fn mnemonic(op: &GateOp) -> String {
    match (&op.kind, &op.label) {
        (GateKind::MCX, Some(label)) => format!("mcx_{label}"),
        (kind, _) => kind.mnemonic().to_string(),
    }
}

fn write_operands(out: &mut String, qubits: &[usize], name: impl Fn(usize) -> String) {
    for (i, &q) in qubits.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&name(q));
    }
}

/// One line of `; `-separated statements, no header and no measurements.
pub fn emit_prompt_flat(circuit: &Circuit) -> QasmDocument {
    let mut out = String::with_capacity(circuit.ops.len() * 10);
    for (i, op) in circuit.ops.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&mnemonic(op));
        out.push(' ');
        for (j, q) in op.qubits.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "q[{q}]");
        }
        out.push(';');
    }
    QasmDocument::new(QasmStyle::PromptFlat, out, circuit.n_qubits)
}

/// Simplified text straight from the circuit; equal to compressing the flat emission.
pub fn emit_simplified(circuit: &Circuit) -> QasmDocument {
    let mut stmts: Vec<Stmt> = Vec::new();
    for op in &circuit.ops {
        let m = mnemonic(op);
        if op.kind.is_single_qubit() {
            let q = op.qubits[0];
            if let Some(last) = stmts.last_mut() {
                if last.mnemonic == m {
                    match last.operands[0] {
                        Operand::Single(s) if s + 1 == q => {
                            last.operands[0] = Operand::Range(s, q + 1);
                            continue;
                        }
                        Operand::Range(a, b) if b == q => {
                            last.operands[0] = Operand::Range(a, q + 1);
                            continue;
                        }
                        _ => {}
                    }
                }
            }
            stmts.push(Stmt {
                mnemonic: m,
                register: "q".into(),
                operands: vec![Operand::Single(q)],
            });
        } else {
            let consecutive = op.qubits.windows(2).all(|w| w[1] == w[0] + 1);
            let operands = if op.kind == GateKind::MCX && consecutive {
                vec![Operand::Range(op.qubits[0], op.target() + 1)]
            } else {
                op.qubits.iter().map(|&q| Operand::Single(q)).collect()
            };
            stmts.push(Stmt {
                mnemonic: m,
                register: "q".into(),
                operands,
            });
        }
    }
    QasmDocument::new(QasmStyle::Simplified, render_statements(&stmts), circuit.n_qubits)
}

fn same_gates(a: &[GateOp], b: &[GateOp]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.kind == y.kind && x.qubits == y.qubits)
}

/// Splits a single-iteration Grover circuit into (init, oracle, diffuser).
fn split_single_iteration<'a>(
    circuit: &'a Circuit,
    instance: &GroverInstance,
) -> Option<(&'a [GateOp], &'a [GateOp], &'a [GateOp])> {
    let n = circuit.n_qubits;
    if circuit.iterations != 1 || instance.n_qubits() != n {
        return None;
    }
    let oracle = build_oracle(instance);
    let diffuser = build_diffuser(n).ok()?;
    if circuit.ops.len() != n + oracle.len() + diffuser.len() {
        return None;
    }
    let (init, rest) = circuit.ops.split_at(n);
    let (o, d) = rest.split_at(oracle.len());
    let init_ok = init
        .iter()
        .enumerate()
        .all(|(q, op)| op.kind == GateKind::H && op.qubits == [q]);
    (init_ok && same_gates(o, &oracle) && same_gates(d, &diffuser)).then_some((init, o, d))
}

fn push_gate_line(out: &mut String, indent: &str, op: &GateOp, name: &dyn Fn(usize) -> String) {
    out.push_str(indent);
    out.push_str(&mnemonic(op));
    out.push(' ');
    write_operands(out, &op.qubits, name);
    out.push_str(";\n");
}

pub fn emit_full_listing(circuit: &Circuit, instance: &GroverInstance) -> QasmDocument {
    emit_full_listing_with(circuit, instance, ListingGates::Auto)
}

/// OpenQASM 3.0 program with declarations, barrier, and per-qubit measurements.
pub fn emit_full_listing_with(circuit: &Circuit, instance: &GroverInstance, gates: ListingGates) -> QasmDocument {
    let n = circuit.n_qubits;
    let reg = |q: usize| format!("q[{q}]");
    let param = |q: usize| format!("_gate_q_{q}");
    let all_params: Vec<usize> = (0..n).collect();

    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\n");
    out.push_str("include \"stdgates.inc\";\n");

    let named = match gates {
        ListingGates::Auto => split_single_iteration(circuit, instance),
        ListingGates::Inline => None,
    };
    if let Some((_, oracle, diffuser)) = named {
        for (name, body) in [("U_omega", oracle), ("U_s", diffuser)] {
            out.push_str("gate ");
            out.push_str(name);
            out.push(' ');
            write_operands(&mut out, &all_params, param);
            out.push_str(" {\n");
            for op in body {
                push_gate_line(&mut out, "  ", op, &param);
            }
            out.push_str("}\n");
        }
    }
    let _ = writeln!(out, "bit[{n}] meas;");
    let _ = writeln!(out, "qubit[{n}] q;");
    match named {
        Some((init, _, _)) => {
            for op in init {
                push_gate_line(&mut out, "", op, &reg);
            }
            for name in ["U_omega", "U_s"] {
                out.push_str(name);
                out.push(' ');
                write_operands(&mut out, &all_params, reg);
                out.push_str(";\n");
            }
        }
        None => {
            for op in &circuit.ops {
                push_gate_line(&mut out, "", op, &reg);
            }
        }
    }
    out.push_str("barrier ");
    write_operands(&mut out, &all_params, reg);
    out.push_str(";\n");
    for q in 0..n {
        let _ = writeln!(out, "meas[{q}] = measure q[{q}];");
    }
    QasmDocument::new(QasmStyle::FullListing, out, n)
}
