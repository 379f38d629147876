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

//! OpenQASM 3.0 text for Grover circuits.
//!
//! Three styles are produced and accepted:
//! - full listing: header, optional named oracle/diffuser gate definitions,
//!   declarations, gate applications, barrier, and measurements;
//! - flat prompt: a single line of `; `-separated gate statements, with MCX
//!   written as `mcx_<label> q[i], q[j], …;`;
//! - simplified: the flat style with runs merged into end-exclusive ranges,
//!   `h q[0:4];` meaning `h q[0]; h q[1]; h q[2]; h q[3];`. This range form is
//!   a project dialect and not valid OpenQASM.

mod emit;
mod lexer;
mod parse;
mod simplified;

use serde::{Deserialize, Serialize};

pub use emit::{emit_full_listing, emit_full_listing_with, emit_prompt_flat, emit_simplified, ListingGates};
pub use parse::{parse_qasm, ParsedQasm, QasmMeta};
pub use simplified::{compress_simplified, expand_simplified, is_canonical_simplified, RangeToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QasmStyle {
    FullListing,
    PromptFlat,
    Simplified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QasmDocument {
    pub style: QasmStyle,
    pub text: String,
    pub n_qubits: usize,
}

impl QasmDocument {
    pub fn new(style: QasmStyle, text: impl Into<String>, n_qubits: usize) -> Self {
        QasmDocument {
            style,
            text: text.into(),
            n_qubits,
        }
    }
}

/// Collapses every whitespace run to one space and trims the ends.
pub fn normalize_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
