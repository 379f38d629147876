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

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::is_bitstring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseStatus {
    Ok,
    Malformed,
    Empty,
}

/// A model reply after extraction and validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub raw_reply: String,
    /// Present iff `status` is OK.
    pub parsed: Option<BTreeMap<String, f64>>,
    pub status: ParseStatus,
    /// Some value fell outside [0, 1] and was clamped.
    pub clamped: bool,
    /// Entries dropped for bad or duplicate keys.
    pub invalid_keys: usize,
}

struct Scanner<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn quoted(&mut self) -> Option<String> {
        self.ws();
        let q = *self.s.get(self.pos)?;
        if q != b'\'' && q != b'"' {
            return None;
        }
        let start = self.pos + 1;
        let len = self.s[start..].iter().position(|&c| c == q)?;
        self.pos = start + len + 1;
        Some(String::from_utf8_lossy(&self.s[start..start + len]).into_owned())
    }

    fn number(&mut self) -> Option<f64> {
        self.ws();
        if let Some(text) = self.quoted() {
            return text.trim().parse().ok();
        }
        let start = self.pos;
        while self.pos < self.s.len() && matches!(self.s[self.pos], b'0'..=b'9' | b'.' | b'e' | b'E' | b'+' | b'-') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    /// `{ 'key': number, ... }` with an optional trailing comma.
    fn map_literal(&mut self) -> Option<Vec<(String, f64)>> {
        if !self.eat(b'{') {
            return None;
        }
        let mut out = Vec::new();
        if self.eat(b'}') {
            return Some(out);
        }
        loop {
            let key = self.quoted()?;
            if !self.eat(b':') {
                return None;
            }
            out.push((key, self.number()?));
            if self.eat(b'}') {
                return Some(out);
            }
            if !self.eat(b',') {
                return None;
            }
            if self.eat(b'}') {
                return Some(out);
            }
        }
    }
}

fn extract(raw: &str) -> Option<Vec<(String, f64)>> {
    let bytes = raw.as_bytes();
    bytes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == b'{')
        .find_map(|(i, _)| Scanner { s: bytes, pos: i }.map_literal())
}

/// Pulls the first quoted-key map literal out of a reply and validates it
/// against `n_qubits`. Never fails; problems are reported through the status.
pub fn parse_model_answer(raw: &str, n_qubits: usize) -> PredictionRecord {
    let mut rec = PredictionRecord {
        id: String::new(),
        raw_reply: raw.to_string(),
        parsed: None,
        status: ParseStatus::Malformed,
        clamped: false,
        invalid_keys: 0,
    };
    if raw.trim().is_empty() {
        rec.status = ParseStatus::Empty;
        return rec;
    }
    let Some(entries) = extract(raw) else {
        return rec;
    };
    let mut map = BTreeMap::new();
    for (key, value) in entries {
        let key = key.trim().to_string();
        if !is_bitstring(&key, n_qubits) || map.contains_key(&key) || value.is_nan() {
            rec.invalid_keys += 1;
            continue;
        }
        let v = value.clamp(0.0, 1.0);
        rec.clamped |= v != value;
        map.insert(key, v);
    }
    if !map.is_empty() {
        rec.parsed = Some(map);
        rec.status = ParseStatus::Ok;
    }
    rec
}
