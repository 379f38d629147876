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

use crate::bits::{bits_to_index, index_to_bits};
use crate::error::{Error, Result};

/// Smallest register the builders accept (the diffuser needs two qubits).
pub const MIN_QUBITS: usize = 2;
/// Largest register supported anywhere in the crate; analytic paths only above 24.
pub const MAX_QUBITS: usize = 30;

/// A search problem: `n_qubits` and the non-empty set of marked basis states.
///
/// Marked states are kept sorted ascending by basis index, which is also
/// lexicographic order of their bitstrings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct GroverInstance {
    n_qubits: usize,
    marked: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    n_qubits: usize,
    marked: Vec<String>,
}

impl TryFrom<RawInstance> for GroverInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        GroverInstance::from_bitstrings(raw.n_qubits, &raw.marked)
    }
}

impl From<GroverInstance> for RawInstance {
    fn from(inst: GroverInstance) -> Self {
        RawInstance {
            n_qubits: inst.n_qubits,
            marked: inst.marked_bitstrings(),
        }
    }
}

impl GroverInstance {
    pub fn new(n_qubits: usize, marked: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::InvalidInstance(format!(
                "n_qubits must be in {MIN_QUBITS}..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        let dim = 1u64 << n_qubits;
        let mut marked: Vec<u64> = marked.into_iter().collect();
        let given = marked.len();
        marked.sort_unstable();
        marked.dedup();
        if marked.len() != given {
            return Err(Error::InvalidInstance("duplicate marked state".into()));
        }
        if marked.is_empty() {
            return Err(Error::InvalidInstance("marked set is empty".into()));
        }
        if marked.len() as u64 >= dim {
            return Err(Error::InvalidInstance(format!(
                "{} marked states leaves nothing unmarked in a {n_qubits}-qubit space",
                marked.len()
            )));
        }
        if let Some(bad) = marked.iter().find(|&&m| m >= dim) {
            return Err(Error::InvalidInstance(format!(
                "marked index {bad} out of range for {n_qubits} qubits"
            )));
        }
        Ok(GroverInstance { n_qubits, marked })
    }

    pub fn from_bitstrings<S: AsRef<str>>(n_qubits: usize, marked: &[S]) -> Result<Self> {
        let indices = marked
            .iter()
            .map(|s| bits_to_index(s.as_ref(), n_qubits).map_err(|e| Error::InvalidInstance(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        GroverInstance::new(n_qubits, indices)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// N = 2^n.
    pub fn dim(&self) -> u64 {
        1u64 << self.n_qubits
    }

    /// M = number of marked states.
    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &[u64] {
        &self.marked
    }

    pub fn is_marked(&self, index: u64) -> bool {
        self.marked.binary_search(&index).is_ok()
    }

    pub fn marked_bitstrings(&self) -> Vec<String> {
        self.marked.iter().map(|&m| index_to_bits(m, self.n_qubits)).collect()
    }
}

impl fmt::Display for GroverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} marked={{{}}}",
            self.n_qubits,
            self.marked_bitstrings().join(",")
        )
    }
}
