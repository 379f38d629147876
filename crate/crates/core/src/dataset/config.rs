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
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grover::instance::{MAX_QUBITS, MIN_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    Base,
    Qasm,
    SimplifiedConversational,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Base, Variant::Qasm, Variant::SimplifiedConversational];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Base => "BASE",
            Variant::Qasm => "QASM",
            Variant::SimplifiedConversational => "SIMPLIFIED_CONVERSATIONAL",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown prompt variant {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Split {
    Train,
    Test,
}

/// Inclusive qubit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitRange {
    pub min: usize,
    pub max: usize,
}

impl QubitRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min > max {
            return Err(Error::Config(format!("qubit range {min}..={max} is empty")));
        }
        Ok(QubitRange { min, max })
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.min..=self.max).contains(&n)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }

    pub fn overlaps(&self, other: &QubitRange) -> bool {
        self.min <= other.max && other.min <= self.max
    }

    pub fn tag(&self) -> String {
        format!("{}-{}", self.min, self.max)
    }
}

impl fmt::Display for QubitRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.min, self.max)
    }
}

impl std::str::FromStr for QubitRange {
    type Err = Error;

    /// Accepts `a-b` or a single size `a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad qubit range {s:?}, expected e.g. 3-10"));
        let (a, b) = match s.split_once('-') {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        QubitRange::new(a, b).map_err(|_| bad())
    }
}

/// Exact probabilities, or empirical frequencies from a fixed shot count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl Serialize for Shots {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Exact => s.serialize_str("EXACT"),
            Shots::Count(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(serde::de::Error::custom("shots must be positive")),
            Raw::Count(n) => Ok(Shots::Count(n)),
            Raw::Text(t) if t.eq_ignore_ascii_case("exact") => Ok(Shots::Exact),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad shots value {t:?}"))),
        }
    }
}

/// A named train/test bundle cut from the corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub name: String,
    pub train_range: QubitRange,
    pub test_range: QubitRange,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub qubit_range: QubitRange,
    /// Records per qubit size; every size in `qubit_range` needs an entry.
    pub counts: BTreeMap<usize, usize>,
    /// Relative weights of marked-set sizes M.
    pub marked_sizes: BTreeMap<usize, f64>,
    pub top_k: usize,
    pub shots: Shots,
    /// Proportions of prompt variants; must sum to 1.
    pub variant_mix: BTreeMap<Variant, f64>,
    pub master_seed: u64,
    /// Sizes tagged TRAIN in the corpus; everything else is TEST.
    pub train_range: QubitRange,
    pub test_range: QubitRange,
    /// Store full-precision truth as a dense map up to this size, two-value above.
    pub dense_truth_max_qubits: usize,
    /// Cross-check analytic truth against the state-vector engine up to this size.
    pub validate_max_qubits: Option<usize>,
    /// Distinct-instance draws attempted before falling back to a repeat.
    pub max_distinct_attempts: u32,
    /// Fraction of overlapping-size (instance, variant) keys routed to test in bundles.
    pub overlap_test_fraction: f64,
    pub bundles: Vec<BundleSpec>,
}

/// Size of the default corpus.
pub const DEFAULT_TOTAL_RECORDS: usize = 97_000;

impl Default for CorpusConfig {
    fn default() -> Self {
        let qubit_range = QubitRange { min: 3, max: 20 };
        let sizes = qubit_range.max - qubit_range.min + 1;
        let per_size = DEFAULT_TOTAL_RECORDS / sizes;
        let remainder = DEFAULT_TOTAL_RECORDS - per_size * sizes;
        let counts = qubit_range
            .iter()
            .map(|n| {
                (
                    n,
                    if n == qubit_range.min {
                        per_size + remainder
                    } else {
                        per_size
                    },
                )
            })
            .collect();
        CorpusConfig {
            qubit_range,
            counts,
            marked_sizes: [(1, 0.6), (2, 0.2), (3, 0.1), (4, 0.1)].into_iter().collect(),
            top_k: 30,
            shots: Shots::Exact,
            variant_mix: Variant::ALL.into_iter().map(|v| (v, 1.0 / 3.0)).collect(),
            master_seed: 20_241_224,
            train_range: QubitRange { min: 3, max: 10 },
            test_range: QubitRange { min: 6, max: 20 },
            dense_truth_max_qubits: 10,
            validate_max_qubits: None,
            max_distinct_attempts: 64,
            overlap_test_fraction: 0.5,
            bundles: Vec::new(),
        }
    }
}

impl CorpusConfig {
    /// Same as the default but with `per_size` records for every size in `range`.
    pub fn uniform(range: QubitRange, per_size: usize) -> Self {
        CorpusConfig {
            qubit_range: range,
            counts: range.iter().map(|n| (n, per_size)).collect(),
            ..CorpusConfig::default()
        }
    }

    pub fn total_records(&self) -> usize {
        self.qubit_range
            .iter()
            .map(|n| self.counts.get(&n).copied().unwrap_or(0))
            .sum()
    }

    pub fn split_for(&self, n: usize) -> Split {
        if self.train_range.contains(n) {
            Split::Train
        } else {
            Split::Test
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.qubit_range;
        if r.min > r.max || r.min < MIN_QUBITS.max(2) || r.max > MAX_QUBITS {
            return Err(Error::Config(format!(
                "qubit_range must lie within {}..={MAX_QUBITS}",
                MIN_QUBITS.max(2)
            )));
        }
        for n in r.iter() {
            match self.counts.get(&n) {
                Some(&c) if c > 0 => {}
                _ => return Err(Error::Config(format!("missing or zero count for {n} qubits"))),
            }
        }
        if let Some(n) = self.counts.keys().find(|&&n| !r.contains(n)) {
            return Err(Error::Config(format!("count given for {n} qubits outside qubit_range")));
        }
        if self.marked_sizes.is_empty() {
            return Err(Error::Config("marked_sizes is empty".into()));
        }
        for (&m, &w) in &self.marked_sizes {
            if m == 0 || !(w.is_finite() && w >= 0.0) {
                return Err(Error::Config(format!("bad marked size weight {m}: {w}")));
            }
        }
        for n in r.iter() {
            let feasible = self
                .marked_sizes
                .iter()
                .any(|(&m, &w)| w > 0.0 && (m as u64) < (1u64 << n));
            if !feasible {
                return Err(Error::Config(format!("no feasible marked size for {n} qubits")));
            }
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be positive".into()));
        }
        let mix: f64 = self.variant_mix.values().sum();
        if self.variant_mix.values().any(|&w| !(w.is_finite() && w >= 0.0)) || (mix - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("variant proportions must sum to 1, got {mix}")));
        }
        if !(0.0..=1.0).contains(&self.overlap_test_fraction) {
            return Err(Error::Config("overlap_test_fraction must be in [0, 1]".into()));
        }
        if self.max_distinct_attempts == 0 {
            return Err(Error::Config("max_distinct_attempts must be positive".into()));
        }
        Ok(())
    }

    /// Reads YAML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: CorpusConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            serde_yaml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
