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

use serde::{Deserialize, Serialize};

use crate::bits::index_to_bits;
use crate::distribution::Distribution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnswerEntry {
    pub bits: String,
    /// Rounded to four decimals.
    pub probability: f64,
}

pub fn round_probability(p: f64) -> f64 {
    format_probability(p).parse().expect("formatted float parses")
}

/// Four decimals with trailing zeros (and a bare point) removed: 0.5, 0.003, 0, 1.
pub fn format_probability(p: f64) -> String {
    let mut s = format!("{p:.4}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Top min(top_k, 2^n) states by exact probability (ties ascending), rounded.
pub fn build_answer(dist: &Distribution, top_k: usize) -> Vec<AnswerEntry> {
    dist.top_k(top_k)
        .into_iter()
        .map(|(k, p)| AnswerEntry {
            bits: index_to_bits(k, dist.n_qubits()),
            probability: round_probability(p),
        })
        .collect()
}

/// Single-quoted map literal, e.g. `{'0000': 0.9613, '0001': 0.0026}`.
pub fn format_answer(entries: &[AnswerEntry]) -> String {
    let mut out = String::with_capacity(entries.len() * 16 + 2);
    out.push('{');
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "'{}': {}", e.bits, format_probability(e.probability));
    }
    out.push('}');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::analytic_distribution;
    use crate::grover::GroverInstance;

    #[test]
    fn probability_formatting() {
        assert_eq!(format_probability(0.9613189697265625), "0.9613");
        assert_eq!(format_probability(0.003), "0.003");
        assert_eq!(format_probability(0.5), "0.5");
        assert_eq!(format_probability(0.0), "0");
        assert_eq!(format_probability(1e-9), "0");
        assert_eq!(format_probability(1.0), "1");
        assert_eq!(format_probability(0.0025787353515625), "0.0026");
    }

    #[test]
    fn four_qubit_answer() {
        let inst = GroverInstance::from_bitstrings(4, &["0000"]).unwrap();
        let d = analytic_distribution(&inst, None).unwrap();
        let a = build_answer(&d, 30);
        assert_eq!(a.len(), 16);
        assert_eq!(a[0].bits, "0000");
        assert_eq!(a[0].probability, 0.9613);
        assert!(a[1..].iter().all(|e| e.probability == 0.0026));
        assert_eq!(a[1].bits, "0001");
        assert!(format_answer(&a).starts_with("{'0000': 0.9613, '0001': 0.0026, '0010': 0.0026"));
    }

    #[test]
    fn forced_exact_answer_ordering() {
        let inst = GroverInstance::from_bitstrings(3, &["011", "101"]).unwrap();
        let d = analytic_distribution(&inst, None).unwrap();
        let text = format_answer(&build_answer(&d, 30));
        assert_eq!(
            text,
            "{'011': 0.5, '101': 0.5, '000': 0, '001': 0, '010': 0, '100': 0, '110': 0, '111': 0}"
        );
    }

    #[test]
    fn top_one() {
        let inst = GroverInstance::from_bitstrings(5, &["10101"]).unwrap();
        let d = analytic_distribution(&inst, None).unwrap();
        let a = build_answer(&d, 1);
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].bits, "10101");
    }
}
