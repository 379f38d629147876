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

use super::lexer::{tokenize, Cursor};
use super::{QasmDocument, QasmStyle};
use crate::error::{Error, Result};

/// `<gate> q[start:end_exclusive]`: one gate over consecutive ascending qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeToken {
    pub gate: String,
    pub start: usize,
    pub end_exclusive: usize,
}

impl RangeToken {
    pub fn new(gate: impl Into<String>, start: usize, end_exclusive: usize) -> Result<Self> {
        if start >= end_exclusive {
            return Err(Error::InvalidArgument(format!(
                "range q[{start}:{end_exclusive}] is empty"
            )));
        }
        Ok(RangeToken {
            gate: gate.into(),
            start,
            end_exclusive,
        })
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.end_exclusive
    }
}

impl fmt::Display for RangeToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} q[{}:{}]", self.gate, self.start, self.end_exclusive)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Operand {
    Single(usize),
    /// End-exclusive.
    Range(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Stmt {
    pub mnemonic: String,
    pub register: String,
    pub operands: Vec<Operand>,
}

/// Mnemonics applied qubit-by-qubit when given a range.
pub(crate) fn is_single_qubit_mnemonic(m: &str) -> bool {
    matches!(m, "h" | "x" | "z")
}

pub(crate) fn is_mcx_mnemonic(m: &str) -> bool {
    m == "mcx" || m.starts_with("mcx_")
}

/// Parses a header-less sequence of gate statements.
pub(crate) fn parse_statements(text: &str) -> Result<Vec<Stmt>> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut out = Vec::new();
    while !cur.at_end() {
        let mnemonic = cur.expect_ident()?;
        let mut register = None;
        let mut operands = Vec::new();
        loop {
            let reg = cur.expect_ident()?;
            match &register {
                None => register = Some(reg),
                Some(r) if *r == reg => {}
                Some(r) => return Err(cur.error(format!("mixed registers '{r}' and '{reg}'"))),
            }
            cur.expect_punct('[')?;
            let a = cur.expect_index()?;
            if cur.eat_punct(':') {
                let b = cur.expect_index()?;
                if a >= b {
                    return Err(cur.error(format!("empty range [{a}:{b}]")));
                }
                operands.push(Operand::Range(a, b));
            } else {
                operands.push(Operand::Single(a));
            }
            cur.expect_punct(']')?;
            if !cur.eat_punct(',') {
                break;
            }
        }
        cur.expect_punct(';')?;
        cur.statement += 1;
        out.push(Stmt {
            mnemonic,
            register: register.expect("at least one operand"),
            operands,
        });
    }
    Ok(out)
}

pub(crate) fn render_statements(stmts: &[Stmt]) -> String {
    let mut out = String::new();
    for (i, s) in stmts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&s.mnemonic);
        out.push(' ');
        for (j, op) in s.operands.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            match op {
                Operand::Single(q) => {
                    out.push_str(&format!("{}[{q}]", s.register));
                }
                Operand::Range(a, b) => {
                    out.push_str(&format!("{}[{a}:{b}]", s.register));
                }
            }
        }
        out.push(';');
    }
    out
}

fn consecutive_run(ops: &[Operand]) -> Option<(usize, usize)> {
    let mut it = ops.iter();
    let Operand::Single(first) = *it.next()? else {
        return None;
    };
    let mut end = first + 1;
    for op in it {
        match *op {
            Operand::Single(q) if q == end => end += 1,
            _ => return None,
        }
    }
    Some((first, end))
}

/// Merges runs of one single-qubit gate on ascending consecutive qubits into
/// `g q[a:b];` and writes consecutive MCX operand lists as `mcx_k q[a:b];`.
pub fn compress_simplified(doc: &QasmDocument) -> Result<QasmDocument> {
    let stmts = parse_statements(&doc.text)?;
    for (i, s) in stmts.iter().enumerate() {
        if s.operands.iter().any(|o| matches!(o, Operand::Range(..))) {
            return Err(Error::Parse {
                statement: i,
                line: 1,
                message: "flat input must not contain ranges".into(),
            });
        }
    }
    let mut out: Vec<Stmt> = Vec::with_capacity(stmts.len());
    let mut i = 0;
    while i < stmts.len() {
        let s = &stmts[i];
        if is_single_qubit_mnemonic(&s.mnemonic) && s.operands.len() == 1 {
            let Operand::Single(start) = s.operands[0] else {
                unreachable!()
            };
            let mut end = start + 1;
            let mut j = i + 1;
            while j < stmts.len()
                && stmts[j].mnemonic == s.mnemonic
                && stmts[j].register == s.register
                && stmts[j].operands == [Operand::Single(end)]
            {
                end += 1;
                j += 1;
            }
            let operand = if end - start > 1 {
                Operand::Range(start, end)
            } else {
                Operand::Single(start)
            };
            out.push(Stmt {
                mnemonic: s.mnemonic.clone(),
                register: s.register.clone(),
                operands: vec![operand],
            });
            i = j;
            continue;
        }
        let mut s = s.clone();
        if is_mcx_mnemonic(&s.mnemonic) && s.operands.len() > 1 {
            if let Some((a, b)) = consecutive_run(&s.operands) {
                s.operands = vec![Operand::Range(a, b)];
            }
        }
        out.push(s);
        i += 1;
    }
    Ok(QasmDocument::new(
        QasmStyle::Simplified,
        render_statements(&out),
        doc.n_qubits,
    ))
}

/// Inverse of [`compress_simplified`] on its image.
pub fn expand_simplified(doc: &QasmDocument) -> Result<QasmDocument> {
    let stmts = parse_statements(&doc.text)?;
    let mut out = Vec::with_capacity(stmts.len());
    for s in stmts {
        let qubits: Vec<usize> = s
            .operands
            .iter()
            .flat_map(|op| match *op {
                Operand::Single(q) => q..q + 1,
                Operand::Range(a, b) => a..b,
            })
            .collect();
        if is_single_qubit_mnemonic(&s.mnemonic) {
            out.extend(qubits.into_iter().map(|q| Stmt {
                mnemonic: s.mnemonic.clone(),
                register: s.register.clone(),
                operands: vec![Operand::Single(q)],
            }));
        } else {
            out.push(Stmt {
                operands: qubits.into_iter().map(Operand::Single).collect(),
                ..s
            });
        }
    }
    Ok(QasmDocument::new(
        QasmStyle::PromptFlat,
        render_statements(&out),
        doc.n_qubits,
    ))
}

/// True if no two adjacent statements could be merged by the compression rule.
pub fn is_canonical_simplified(text: &str) -> Result<bool> {
    let stmts = parse_statements(text)?;
    let span = |s: &Stmt| match s.operands.as_slice() {
        [Operand::Single(q)] => Some((*q, q + 1)),
        [Operand::Range(a, b)] => Some((*a, *b)),
        _ => None,
    };
    for w in stmts.windows(2) {
        if is_single_qubit_mnemonic(&w[0].mnemonic) && w[0].mnemonic == w[1].mnemonic && w[0].register == w[1].register
        {
            if let (Some((_, end)), Some((start, _))) = (span(&w[0]), span(&w[1])) {
                if end == start {
                    return Ok(false);
                }
            }
        }
    }
    for s in &stmts {
        if is_mcx_mnemonic(&s.mnemonic) && s.operands.len() > 1 && consecutive_run(&s.operands).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}
