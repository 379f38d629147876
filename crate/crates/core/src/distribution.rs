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

//! Probability distributions over n-bit basis states.
//!
//! Three representations share one interface:
//! - dense: all 2^n probabilities, indexed by basis index;
//! - sparse: an explicit subset of entries, either exhaustive (absent keys
//!   are exactly zero) or truncated (absent keys unknown, scored as zero);
//! - two-value: the Grover shape, where marked states carry their own
//!   probabilities and every other state shares one value. Nothing of size
//!   2^n is ever materialized for this form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::{bits_to_index, index_to_bits};
use crate::error::{Error, Result};

const PROB_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    n_qubits: usize,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Dense(Vec<f64>),
    Sparse {
        entries: BTreeMap<u64, f64>,
        exhaustive: bool,
    },
    TwoValue {
        marked: Vec<(u64, f64)>,
        unmarked_each: f64,
    },
}

/// Descending probability, then ascending index (lexicographic bitstring order).
pub fn rank_order(a: &(u64, f64), b: &(u64, f64)) -> Ordering {
    rank_bucket(b.1).cmp(&rank_bucket(a.1)).then(a.0.cmp(&b.0))
}

/// Probabilities closer than this rank as equal, so float noise cannot reorder ties.
pub const RANK_RESOLUTION: f64 = 1e-12;

fn rank_bucket(p: f64) -> i64 {
    (p / RANK_RESOLUTION).round() as i64
}

fn check_prob(p: f64) -> Result<()> {
    if p.is_finite() && (-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")))
    }
}

impl Distribution {
    pub fn dense(n_qubits: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() as u64 != 1u64 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "dense distribution over {n_qubits} qubits needs {} entries, got {}",
                1u64 << n_qubits,
                probs.len()
            )));
        }
        probs.iter().try_for_each(|&p| check_prob(p))?;
        Ok(Distribution {
            n_qubits,
            repr: Repr::Dense(probs),
        })
    }

    pub fn sparse(n_qubits: usize, entries: BTreeMap<u64, f64>, exhaustive: bool) -> Result<Self> {
        let dim = 1u64 << n_qubits;
        for (&k, &p) in &entries {
            if k >= dim {
                return Err(Error::InvalidArgument(format!(
                    "index {k} out of range for {n_qubits} qubits"
                )));
            }
            check_prob(p)?;
        }
        Ok(Distribution {
            n_qubits,
            repr: Repr::Sparse { entries, exhaustive },
        })
    }

    /// Builds a sparse distribution from bitstring keys.
    pub fn from_bitstring_map(n_qubits: usize, map: &BTreeMap<String, f64>, exhaustive: bool) -> Result<Self> {
        let entries = map
            .iter()
            .map(|(k, &p)| Ok((bits_to_index(k, n_qubits)?, p)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Distribution::sparse(n_qubits, entries, exhaustive)
    }

    pub fn two_value(n_qubits: usize, mut marked: Vec<(u64, f64)>, unmarked_each: f64) -> Result<Self> {
        let dim = 1u64 << n_qubits;
        marked.sort_by_key(|&(k, _)| k);
        for w in marked.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("duplicate marked index {}", w[0].0)));
            }
        }
        if marked.is_empty() || marked.len() as u64 >= dim {
            return Err(Error::InvalidArgument(
                "two-value form needs 1..N-1 marked states".into(),
            ));
        }
        for &(k, p) in &marked {
            if k >= dim {
                return Err(Error::InvalidArgument(format!("index {k} out of range")));
            }
            check_prob(p)?;
        }
        check_prob(unmarked_each)?;
        Ok(Distribution {
            n_qubits,
            repr: Repr::TwoValue { marked, unmarked_each },
        })
    }

    pub fn uniform(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Distribution {
            n_qubits,
            repr: Repr::Dense(vec![1.0 / dim as f64; dim]),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> u64 {
        1u64 << self.n_qubits
    }

    /// True when every basis state's probability is known (absent = 0).
    pub fn is_exhaustive(&self) -> bool {
        match &self.repr {
            Repr::Dense(_) | Repr::TwoValue { .. } => true,
            Repr::Sparse { exhaustive, .. } => *exhaustive,
        }
    }

    pub fn is_two_value(&self) -> bool {
        matches!(self.repr, Repr::TwoValue { .. })
    }

    /// Marked entries and the shared unmarked probability of a two-value form.
    pub fn two_value_parts(&self) -> Option<(&[(u64, f64)], f64)> {
        match &self.repr {
            Repr::TwoValue { marked, unmarked_each } => Some((marked, *unmarked_each)),
            _ => None,
        }
    }

    /// Probability of `index`, or `None` when a truncated distribution does not record it.
    pub fn get(&self, index: u64) -> Option<f64> {
        match &self.repr {
            Repr::Dense(p) => p.get(index as usize).copied(),
            Repr::Sparse { entries, exhaustive } => match entries.get(&index) {
                Some(&p) => Some(p),
                None if *exhaustive && index < self.dim() => Some(0.0),
                None => None,
            },
            Repr::TwoValue { marked, unmarked_each } => {
                if index >= self.dim() {
                    return None;
                }
                Some(match marked.binary_search_by_key(&index, |&(k, _)| k) {
                    Ok(i) => marked[i].1,
                    Err(_) => *unmarked_each,
                })
            }
        }
    }

    /// Probability with unknown entries read as zero.
    pub fn prob(&self, index: u64) -> f64 {
        self.get(index).unwrap_or(0.0)
    }

    pub fn prob_of(&self, bits: &str) -> Result<f64> {
        Ok(self.prob(bits_to_index(bits, self.n_qubits)?))
    }

    /// Number of explicitly stored entries (2^n for two-value, which is virtual).
    pub fn explicit_len(&self) -> u64 {
        match &self.repr {
            Repr::Dense(p) => p.len() as u64,
            Repr::Sparse { entries, .. } => entries.len() as u64,
            Repr::TwoValue { .. } => self.dim(),
        }
    }

    /// Every entry that carries a value, ascending by index. Two-value forms
    /// enumerate all 2^n states lazily.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (u64, f64)> + '_> {
        match &self.repr {
            Repr::Dense(p) => Box::new(p.iter().enumerate().map(|(i, &v)| (i as u64, v))),
            Repr::Sparse { entries, .. } => Box::new(entries.iter().map(|(&k, &v)| (k, v))),
            Repr::TwoValue { .. } => Box::new((0..self.dim()).map(move |i| (i, self.prob(i)))),
        }
    }

    /// Sum of stored probabilities; closed form for two-value.
    pub fn total(&self) -> f64 {
        match &self.repr {
            Repr::TwoValue { marked, unmarked_each } => {
                let m: f64 = marked.iter().map(|&(_, p)| p).sum();
                m + (self.dim() - marked.len() as u64) as f64 * unmarked_each
            }
            _ => self.iter().map(|(_, p)| p).sum(),
        }
    }

    /// Σ p_x² over all states not in `exclude`; O(|exclude| + M) for two-value.
    pub fn sum_sq_excluding(&self, exclude: &HashSet<u64>) -> f64 {
        match &self.repr {
            Repr::TwoValue { marked, unmarked_each } => {
                let marked_part: f64 = marked
                    .iter()
                    .filter(|(k, _)| !exclude.contains(k))
                    .map(|&(_, p)| p * p)
                    .sum();
                let excluded_unmarked = exclude
                    .iter()
                    .filter(|&&k| k < self.dim() && marked.binary_search_by_key(&k, |&(m, _)| m).is_err())
                    .count() as u64;
                let free = self.dim() - marked.len() as u64 - excluded_unmarked;
                marked_part + free as f64 * unmarked_each * unmarked_each
            }
            _ => self
                .iter()
                .filter(|(k, _)| !exclude.contains(k))
                .map(|(_, p)| p * p)
                .sum(),
        }
    }

    /// Largest probability among states not in `exclude`. Absent states of an
    /// exhaustive sparse distribution count as zero.
    pub fn max_excluding(&self, exclude: &HashSet<u64>) -> f64 {
        match &self.repr {
            Repr::TwoValue { marked, unmarked_each } => {
                let excluded_unmarked = exclude
                    .iter()
                    .filter(|&&k| k < self.dim() && marked.binary_search_by_key(&k, |&(m, _)| m).is_err())
                    .count() as u64;
                let mut best = marked
                    .iter()
                    .filter(|(k, _)| !exclude.contains(k))
                    .map(|&(_, p)| p)
                    .fold(f64::NEG_INFINITY, f64::max);
                if self.dim() - marked.len() as u64 > excluded_unmarked {
                    best = best.max(*unmarked_each);
                }
                best.max(0.0)
            }
            _ => self
                .iter()
                .filter(|(k, _)| !exclude.contains(k))
                .map(|(_, p)| p)
                .fold(0.0, f64::max),
        }
    }

    /// The `k` most probable states, descending, ties broken by ascending index.
    ///
    /// For truncated sparse input only stored entries are ranked.
    pub fn top_k(&self, k: usize) -> Vec<(u64, f64)> {
        let mut ranked: Vec<(u64, f64)> = match &self.repr {
            Repr::Dense(_) => self.iter().collect(),
            Repr::Sparse { entries, exhaustive } => {
                let mut c: Vec<(u64, f64)> = entries.iter().map(|(&i, &p)| (i, p)).collect();
                if *exhaustive {
                    let absent = (0..self.dim()).filter(|i| !entries.contains_key(i));
                    c.extend(absent.take(k).map(|i| (i, 0.0)));
                }
                c
            }
            Repr::TwoValue { marked, unmarked_each } => {
                let mut c = marked.clone();
                let mut idx = 0u64;
                let mut taken = 0usize;
                let mut mi = 0usize;
                while taken < k && idx < self.dim() {
                    while mi < marked.len() && marked[mi].0 < idx {
                        mi += 1;
                    }
                    if mi < marked.len() && marked[mi].0 == idx {
                        idx += 1;
                        continue;
                    }
                    c.push((idx, *unmarked_each));
                    taken += 1;
                    idx += 1;
                }
                c
            }
        };
        if k < ranked.len() {
            ranked.select_nth_unstable_by(k, rank_order);
            ranked.truncate(k);
        }
        ranked.sort_by(rank_order);
        ranked
    }

    /// Explicit entries keyed by bitstring. Refuses to expand two-value forms
    /// above `limit_qubits`.
    pub fn to_bitstring_map(&self, limit_qubits: usize) -> Result<BTreeMap<String, f64>> {
        if self.is_two_value() && self.n_qubits > limit_qubits {
            return Err(Error::Resource {
                n_qubits: self.n_qubits,
                limit: limit_qubits,
            });
        }
        Ok(self.iter().map(|(k, p)| (index_to_bits(k, self.n_qubits), p)).collect())
    }

    pub fn to_dense(&self) -> Result<Vec<f64>> {
        if self.n_qubits > 26 {
            return Err(Error::Resource {
                n_qubits: self.n_qubits,
                limit: 26,
            });
        }
        match &self.repr {
            Repr::Dense(p) => Ok(p.clone()),
            _ => Ok((0..self.dim()).map(|i| self.prob(i)).collect()),
        }
    }
}

/// Serialized shape: `kind` plus bitstring-keyed maps (sorted).
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DistributionDoc {
    Dense {
        n_qubits: usize,
        probabilities: BTreeMap<String, f64>,
    },
    Sparse {
        n_qubits: usize,
        exhaustive: bool,
        probabilities: BTreeMap<String, f64>,
    },
    TwoValue {
        n_qubits: usize,
        marked: BTreeMap<String, f64>,
        unmarked_each: f64,
    },
}

impl Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n_qubits;
        let keyed = |it: &mut dyn Iterator<Item = (u64, f64)>| -> BTreeMap<String, f64> {
            it.map(|(k, p)| (index_to_bits(k, n), p)).collect()
        };
        let doc = match &self.repr {
            Repr::Dense(_) => DistributionDoc::Dense {
                n_qubits: n,
                probabilities: keyed(&mut self.iter()),
            },
            Repr::Sparse { exhaustive, .. } => DistributionDoc::Sparse {
                n_qubits: n,
                exhaustive: *exhaustive,
                probabilities: keyed(&mut self.iter()),
            },
            Repr::TwoValue { marked, unmarked_each } => DistributionDoc::TwoValue {
                n_qubits: n,
                marked: keyed(&mut marked.iter().copied()),
                unmarked_each: *unmarked_each,
            },
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = DistributionDoc::deserialize(d)?;
        let res = match doc {
            DistributionDoc::Dense {
                n_qubits,
                probabilities,
            } => {
                if probabilities.len() as u64 != 1u64 << n_qubits {
                    return Err(D::Error::custom("dense distribution is missing entries"));
                }
                Distribution::from_bitstring_map(n_qubits, &probabilities, true).and_then(|d| {
                    let probs = d.to_dense()?;
                    Distribution::dense(n_qubits, probs)
                })
            }
            DistributionDoc::Sparse {
                n_qubits,
                exhaustive,
                probabilities,
            } => Distribution::from_bitstring_map(n_qubits, &probabilities, exhaustive),
            DistributionDoc::TwoValue {
                n_qubits,
                marked,
                unmarked_each,
            } => marked
                .iter()
                .map(|(k, &p)| Ok((bits_to_index(k, n_qubits)?, p)))
                .collect::<Result<Vec<_>>>()
                .and_then(|m| Distribution::two_value(n_qubits, m, unmarked_each)),
        };
        res.map_err(D::Error::custom)
    }
}
