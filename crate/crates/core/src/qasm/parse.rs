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

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::lexer::{tokenize, Cursor, Tok};
use super::QasmDocument;
use crate::error::{Error, Result};
use crate::grover::{Circuit, GateKind, GateOp};

/// Non-gate statements seen while parsing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QasmMeta {
    pub version: Option<String>,
    pub includes: Vec<String>,
    pub declared_qubits: Option<usize>,
    pub declared_bits: Option<usize>,
    /// (bit, qubit) pairs in source order.
    pub measurements: Vec<(usize, usize)>,
    pub barriers: Vec<Vec<usize>>,
    pub gate_definitions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedQasm {
    pub circuit: Circuit,
    pub meta: QasmMeta,
}

#[derive(Clone, Debug)]
enum Arg {
    Qubit(usize),
    Range(usize, usize),
    Param(String),
}

#[derive(Clone, Debug)]
struct Application {
    mnemonic: String,
    args: Vec<Arg>,
}

#[derive(Clone, Debug)]
struct GateDef {
    params: Vec<String>,
    body: Vec<Application>,
}

fn builtin(mnemonic: &str) -> Option<(GateKind, Option<String>)> {
    let kind = match mnemonic {
        "h" => GateKind::H,
        "x" => GateKind::X,
        "z" => GateKind::Z,
        "cz" => GateKind::CZ,
        "ccx" => GateKind::CCX,
        "mcx" => GateKind::MCX,
        m => {
            let label = m.strip_prefix("mcx_")?;
            if label.is_empty() {
                return None;
            }
            return Some((GateKind::MCX, Some(label.to_string())));
        }
    };
    Some((kind, None))
}

struct Parser {
    cur: Cursor,
    defs: HashMap<String, GateDef>,
    meta: QasmMeta,
    ops: Vec<GateOp>,
    n_qubits: Option<usize>,
}

const MAX_INLINE_DEPTH: usize = 16;

impl Parser {
    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut args = Vec::new();
        loop {
            let name = self.cur.expect_ident()?;
            if self.cur.eat_punct('[') {
                let a = self.cur.expect_index()?;
                if self.cur.eat_punct(':') {
                    let b = self.cur.expect_index()?;
                    if a >= b {
                        return Err(self.cur.error(format!("empty range [{a}:{b}]")));
                    }
                    args.push(Arg::Range(a, b));
                } else {
                    args.push(Arg::Qubit(a));
                }
                self.cur.expect_punct(']')?;
            } else {
                args.push(Arg::Param(name));
            }
            if !self.cur.eat_punct(',') {
                return Ok(args);
            }
        }
    }

    fn end_statement(&mut self) -> Result<()> {
        self.cur.expect_punct(';')?;
        self.cur.statement += 1;
        Ok(())
    }

    fn qubit_list(&self, args: &[Arg]) -> Result<Vec<usize>> {
        let mut qs = Vec::new();
        for a in args {
            match a {
                Arg::Qubit(q) => qs.push(*q),
                Arg::Range(x, y) => qs.extend(*x..*y),
                Arg::Param(p) => return Err(self.cur.error(format!("unbound parameter '{p}'"))),
            }
        }
        Ok(qs)
    }

    fn check_qubits(&self, qs: &[usize]) -> Result<()> {
        if let (Some(n), Some(&bad)) = (self.n_qubits, qs.iter().find(|&&q| Some(q) >= self.n_qubits)) {
            return Err(self.cur.error(format!("bad index q[{bad}] for {n} qubits")));
        }
        Ok(())
    }

    fn apply(&mut self, app: &Application, depth: usize) -> Result<()> {
        if let Some((kind, label)) = builtin(&app.mnemonic) {
            let qs = self.qubit_list(&app.args)?;
            self.check_qubits(&qs)?;
            if kind.is_single_qubit() {
                self.ops.extend(qs.into_iter().map(|q| GateOp::single(kind, q)));
            } else {
                let mut op = GateOp::new(kind, qs).map_err(|e| self.cur.error(e.to_string()))?;
                op.label = label;
                self.ops.push(op);
            }
            return Ok(());
        }
        let Some(def) = self.defs.get(&app.mnemonic).cloned() else {
            return Err(self.cur.error(format!("unknown mnemonic '{}'", app.mnemonic)));
        };
        if depth >= MAX_INLINE_DEPTH {
            return Err(self.cur.error("gate definitions nest too deeply"));
        }
        let qs = self.qubit_list(&app.args)?;
        if qs.len() != def.params.len() {
            return Err(self.cur.error(format!(
                "gate '{}' takes {} qubits, got {}",
                app.mnemonic,
                def.params.len(),
                qs.len()
            )));
        }
        let binding: HashMap<&str, usize> = def.params.iter().map(String::as_str).zip(qs).collect();
        for inner in &def.body {
            let args = inner
                .args
                .iter()
                .map(|a| match a {
                    Arg::Param(p) => binding
                        .get(p.as_str())
                        .map(|&q| Arg::Qubit(q))
                        .ok_or_else(|| self.cur.error(format!("unknown parameter '{p}'"))),
                    other => Ok(other.clone()),
                })
                .collect::<Result<Vec<_>>>()?;
            self.apply(
                &Application {
                    mnemonic: inner.mnemonic.clone(),
                    args,
                },
                depth + 1,
            )?;
        }
        Ok(())
    }

    fn gate_definition(&mut self) -> Result<()> {
        let name = self.cur.expect_ident()?;
        let mut params = Vec::new();
        while let Some(Tok::Ident(p)) = self.cur.peek() {
            params.push(p.clone());
            self.cur.next()?;
            if !self.cur.eat_punct(',') {
                break;
            }
        }
        if params.is_empty() {
            return Err(self.cur.error(format!("gate '{name}' declares no qubits")));
        }
        self.cur.expect_punct('{')?;
        let mut body = Vec::new();
        loop {
            match self.cur.peek() {
                Some(Tok::Punct('}')) => {
                    self.cur.next()?;
                    break;
                }
                None => {
                    return Err(self.cur.error(format!("unbalanced definition of gate '{name}'")));
                }
                _ => {
                    let mnemonic = self.cur.expect_ident()?;
                    let args = self.args()?;
                    self.cur.expect_punct(';')?;
                    body.push(Application { mnemonic, args });
                }
            }
        }
        self.meta.gate_definitions.push(name.clone());
        self.defs.insert(name, GateDef { params, body });
        self.cur.statement += 1;
        Ok(())
    }

    fn declaration(&mut self) -> Result<(usize, String)> {
        self.cur.expect_punct('[')?;
        let size = self.cur.expect_index()?;
        self.cur.expect_punct(']')?;
        let name = self.cur.expect_ident()?;
        self.end_statement()?;
        Ok((size, name))
    }

    fn statement(&mut self) -> Result<()> {
        let head = self.cur.expect_ident()?;
        match head.as_str() {
            "OPENQASM" => {
                match self.cur.next()? {
                    Tok::Number(v) => self.meta.version = Some(v),
                    _ => return Err(self.cur.error("expected version number")),
                }
                self.end_statement()
            }
            "include" => {
                match self.cur.next()? {
                    Tok::Str(s) => self.meta.includes.push(s),
                    _ => return Err(self.cur.error("expected include path")),
                }
                self.end_statement()
            }
            "qubit" => {
                let (size, _) = self.declaration()?;
                self.meta.declared_qubits = Some(size);
                self.n_qubits = Some(size);
                Ok(())
            }
            "bit" => {
                let (size, _) = self.declaration()?;
                self.meta.declared_bits = Some(size);
                Ok(())
            }
            "gate" => self.gate_definition(),
            "barrier" => {
                let args = self.args()?;
                let qs = self.qubit_list(&args)?;
                self.check_qubits(&qs)?;
                self.meta.barriers.push(qs);
                self.end_statement()
            }
            _ if self.cur.peek() == Some(&Tok::Punct('[')) && matches!(self.cur.peek_at(3), Some(Tok::Punct('='))) => {
                self.cur.expect_punct('[')?;
                let bit = self.cur.expect_index()?;
                self.cur.expect_punct(']')?;
                self.cur.expect_punct('=')?;
                if self.cur.expect_ident()? != "measure" {
                    return Err(self.cur.error("expected 'measure'"));
                }
                let args = self.args()?;
                let qs = self.qubit_list(&args)?;
                if qs.len() != 1 {
                    return Err(self.cur.error("measure takes one qubit"));
                }
                self.check_qubits(&qs)?;
                self.meta.measurements.push((bit, qs[0]));
                self.end_statement()
            }
            _ => {
                let args = self.args()?;
                let app = Application { mnemonic: head, args };
                self.apply(&app, 0)?;
                self.end_statement()
            }
        }
    }
}

/// Parses any of the three styles into a circuit. Named gate definitions are
/// inlined; barriers and measurements go to [`QasmMeta`].
///
/// The register size comes from a `qubit[n]` declaration when present, then
/// from `doc.n_qubits`, and otherwise from the largest index used.
pub fn parse_qasm(doc: &QasmDocument) -> Result<ParsedQasm> {
    let mut p = Parser {
        cur: Cursor::new(tokenize(&doc.text)?),
        defs: HashMap::new(),
        meta: QasmMeta::default(),
        ops: Vec::new(),
        n_qubits: (doc.n_qubits > 0).then_some(doc.n_qubits),
    };
    while !p.cur.at_end() {
        p.statement()?;
    }
    let n = p
        .n_qubits
        .unwrap_or_else(|| p.ops.iter().flat_map(|op| op.qubits.iter()).max().map_or(0, |q| q + 1));
    let mut circuit = Circuit::new(n, p.ops, 0).map_err(|e| Error::Parse {
        statement: p.cur.statement,
        line: p.cur.line(),
        message: e.to_string(),
    })?;
    circuit.iterations = circuit.count_hadamard_layers().saturating_sub(1) / 2;
    Ok(ParsedQasm { circuit, meta: p.meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::QasmStyle;

    fn flat(text: &str, n: usize) -> QasmDocument {
        QasmDocument::new(QasmStyle::PromptFlat, text, n)
    }

    #[test]
    fn empty_text_is_empty_circuit() {
        let p = parse_qasm(&flat("", 3)).unwrap();
        assert!(p.circuit.ops.is_empty());
        assert_eq!(p.circuit.n_qubits, 3);
    }

    #[test]
    fn labels_and_ranges() {
        let p = parse_qasm(&flat("h q[0:3]; mcx_12 q[0:3]; mcx q[1], q[0];", 3)).unwrap();
        let ops = p.circuit.ops;
        assert_eq!(ops.len(), 5);
        assert_eq!(ops[3].label.as_deref(), Some("12"));
        assert_eq!(ops[3].qubits, vec![0, 1, 2]);
        assert_eq!(ops[4].label, None);
    }

    #[test]
    fn positioned_errors() {
        let e = parse_qasm(&flat("h q[0]; y q[1];", 3)).unwrap_err();
        assert!(matches!(e, Error::Parse { statement: 1, .. }), "{e}");
        let e = parse_qasm(&flat("h q[0]; h q[5];", 3)).unwrap_err();
        assert!(matches!(e, Error::Parse { statement: 1, .. }), "{e}");
        let e = parse_qasm(&flat("cz q[0], q[0];", 3)).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let doc = QasmDocument::new(QasmStyle::FullListing, "OPENQASM 3.0;\ngate G a, b {\n  cz a, b;\n", 2);
        let e = parse_qasm(&doc).unwrap_err();
        assert!(e.to_string().contains("unbalanced"), "{e}");
    }

    #[test]
    fn listing_metadata() {
        let text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nbit[2] meas;\nqubit[2] q;\nh q[0];\nh q[1];\nbarrier q[0], q[1];\nmeas[0] = measure q[0];\nmeas[1] = measure q[1];\n";
        let p = parse_qasm(&QasmDocument::new(QasmStyle::FullListing, text, 0)).unwrap();
        assert_eq!(p.circuit.n_qubits, 2);
        assert_eq!(p.circuit.ops.len(), 2);
        assert_eq!(p.meta.version.as_deref(), Some("3.0"));
        assert_eq!(p.meta.measurements, vec![(0, 0), (1, 1)]);
        assert_eq!(p.meta.barriers, vec![vec![0, 1]]);
    }
}
