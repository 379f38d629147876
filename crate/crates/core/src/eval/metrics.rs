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

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::{bits_to_index, index_to_bits};
use crate::distribution::{rank_order, Distribution};
use crate::grover::GroverInstance;

/// Prediction map keyed by bitstring.
pub type PredMap = BTreeMap<String, f64>;

fn indexed(pred: &PredMap, n_qubits: usize) -> Vec<(u64, f64)> {
    pred.iter()
        .filter_map(|(k, &p)| bits_to_index(k, n_qubits).ok().map(|i| (i, p)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub alpha: f64,
    /// Prediction had no usable entries.
    pub empty_prediction: bool,
    /// Marked states were not the top-k of the truth, so the truth's own
    /// top-k stood in for the target set.
    pub truth_fallback: bool,
}

/// Truth probabilities closer than this are ranked as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Top-k of the truth with near-equal probabilities treated as tied, so the
/// lexicographic tie-break is not decided by rounding noise.
fn truth_top_k(truth: &Distribution, k: usize) -> HashSet<u64> {
    let ranked = truth.top_k(k);
    let Some(&(_, kth)) = ranked.last() else {
        return HashSet::new();
    };
    let mut out: HashSet<u64> = ranked
        .iter()
        .filter(|&&(_, p)| p > kth + TIE_TOLERANCE)
        .map(|&(i, _)| i)
        .collect();
    let need = ranked.len() - out.len();
    let tied: Vec<u64> = truth
        .iter()
        .filter(|&(_, p)| (p - kth).abs() <= TIE_TOLERANCE)
        .map(|(i, _)| i)
        .take(need)
        .collect();
    out.extend(tied);
    for &(i, _) in &ranked {
        if out.len() >= ranked.len() {
            break;
        }
        out.insert(i);
    }
    out
}

/// Top-k of explicit entries under the same near-tie rule as the truth.
fn tolerant_top_k(mut entries: Vec<(u64, f64)>, k: usize) -> Vec<u64> {
    entries.sort_by(rank_order);
    if entries.len() <= k {
        return entries.into_iter().map(|(i, _)| i).collect();
    }
    let kth = entries[k - 1].1;
    let mut out: Vec<u64> = entries
        .iter()
        .take_while(|&&(_, p)| p > kth + TIE_TOLERANCE)
        .map(|&(i, _)| i)
        .collect();
    let mut tied: Vec<u64> = entries
        .iter()
        .filter(|&&(_, p)| (p - kth).abs() <= TIE_TOLERANCE)
        .map(|&(i, _)| i)
        .collect();
    tied.sort_unstable();
    out.extend(tied.into_iter().take(k - out.len()));
    out
}

/// α with its flags. `marked` must be non-empty.
pub fn search_accuracy_detail(pred: &PredMap, truth: &Distribution, marked: &[u64]) -> Accuracy {
    let k = marked.len();
    assert!(k >= 1, "search accuracy needs at least one marked state");
    let entries = indexed(pred, truth.n_qubits());
    if entries.is_empty() {
        return Accuracy {
            alpha: 0.0,
            empty_prediction: true,
            truth_fallback: false,
        };
    }
    let predicted = tolerant_top_k(entries, k);

    let marked_set: HashSet<u64> = marked.iter().copied().collect();
    let min_marked = marked.iter().map(|&m| truth.prob(m)).fold(f64::INFINITY, f64::min);
    let truth_fallback = min_marked <= truth.max_excluding(&marked_set) + TIE_TOLERANCE;
    let target: HashSet<u64> = if truth_fallback {
        truth_top_k(truth, k)
    } else {
        marked_set
    };
    let hits = predicted.iter().filter(|i| target.contains(i)).count();
    Accuracy {
        alpha: hits as f64 / k as f64,
        empty_prediction: false,
        truth_fallback,
    }
}

/// α = |M_model ∩ M_true| / k.
pub fn search_accuracy(pred: &PredMap, truth: &Distribution, marked: &[u64]) -> f64 {
    search_accuracy_detail(pred, truth, marked).alpha
}

/// ε = (1/2^n) Σ_x (p_model(x) − p_true(x))², absent keys read as zero.
///
/// Runs in O(|pred| + M) when the truth is in two-value form.
pub fn infidelity(pred: &PredMap, truth: &Distribution) -> f64 {
    let entries = indexed(pred, truth.n_qubits());
    let keys: HashSet<u64> = entries.iter().map(|&(i, _)| i).collect();
    let present: f64 = entries
        .iter()
        .map(|&(i, p)| {
            let d = p - truth.prob(i);
            d * d
        })
        .sum();
    (present + truth.sum_sq_excluding(&keys)) / truth.dim() as f64
}

/// ε^k: mean squared error over the marked states only.
pub fn marked_infidelity(pred: &PredMap, truth: &Distribution, marked: &[u64]) -> f64 {
    assert!(!marked.is_empty(), "marked infidelity needs at least one marked state");
    let n = truth.n_qubits();
    let sum: f64 = marked
        .iter()
        .map(|&m| {
            let p = pred.get(&index_to_bits(m, n)).copied().unwrap_or(0.0);
            let d = p - truth.prob(m);
            d * d
        })
        .sum();
    sum / marked.len() as f64
}

/// Uniform guess over all 2^n states, cut to the first `top_k` under the
/// ranking tie-break (lexicographically smallest strings).
pub fn uniform_baseline(instance: &GroverInstance, top_k: usize) -> PredMap {
    let n = instance.n_qubits();
    Distribution::uniform(n)
        .top_k(top_k)
        .into_iter()
        .map(|(i, p)| (index_to_bits(i, n), p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::analytic_distribution;

    fn map(entries: &[(&str, f64)]) -> PredMap {
        entries.iter().map(|&(k, p)| (k.to_string(), p)).collect()
    }

    fn grover4() -> (GroverInstance, Distribution) {
        let inst = GroverInstance::from_bitstrings(4, &["0000"]).unwrap();
        let d = analytic_distribution(&inst, None).unwrap();
        (inst, d)
    }

    #[test]
    fn accuracy_examples() {
        let (inst, truth) = grover4();
        assert_eq!(search_accuracy(&map(&[("0000", 0.9)]), &truth, inst.marked()), 1.0);
        assert_eq!(search_accuracy(&map(&[("0001", 0.9)]), &truth, inst.marked()), 0.0);

        let inst = GroverInstance::from_bitstrings(3, &["011", "101"]).unwrap();
        let truth = analytic_distribution(&inst, Some(1)).unwrap();
        let pred = map(&[("011", 0.6), ("000", 0.3), ("101", 0.1)]);
        assert_eq!(search_accuracy(&pred, &truth, inst.marked()), 0.5);
    }

    #[test]
    fn empty_prediction_flagged() {
        let (inst, truth) = grover4();
        let a = search_accuracy_detail(&PredMap::new(), &truth, inst.marked());
        assert_eq!(a.alpha, 0.0);
        assert!(a.empty_prediction);
    }

    #[test]
    fn fallback_when_marked_not_dominant() {
        let inst = GroverInstance::from_bitstrings(3, &["000"]).unwrap();
        let truth = Distribution::two_value(3, vec![(0, 0.0)], 1.0 / 7.0).unwrap();
        let a = search_accuracy_detail(&map(&[("001", 0.5)]), &truth, inst.marked());
        assert!(a.truth_fallback);
        assert_eq!(a.alpha, 1.0);
    }

    #[test]
    fn near_ties_break_lexicographically() {
        let inst = GroverInstance::from_bitstrings(3, &["001", "011", "100", "111"]).unwrap();
        let truth = analytic_distribution(&inst, None).unwrap();
        let flat: PredMap = (0..8).map(|i| (crate::bits::index_to_bits(i, 3), 0.125)).collect();
        let a = search_accuracy_detail(&flat, &truth, inst.marked());
        assert!(a.truth_fallback);
        assert_eq!(a.alpha, 1.0);
    }

    #[test]
    fn infidelity_examples() {
        let uniform1 = Distribution::uniform(1);
        assert!((infidelity(&map(&[("0", 1.0)]), &uniform1) - 0.25).abs() < 1e-15);
        let (_, truth) = grover4();
        let exact = truth.to_bitstring_map(4).unwrap();
        assert_eq!(infidelity(&exact, &truth), 0.0);
    }

    #[test]
    fn marked_infidelity_examples() {
        let (inst, truth) = grover4();
        let half = marked_infidelity(&map(&[("0000", 0.5)]), &truth, inst.marked());
        assert!((half - 0.212_815_191_829_577_1).abs() < 1e-12);
        let missing = marked_infidelity(&map(&[("0001", 0.5)]), &truth, inst.marked());
        assert!((missing - 0.924_134_161_556_139_6).abs() < 1e-12);
    }

    #[test]
    fn uniform_baseline_values() {
        let inst = GroverInstance::from_bitstrings(2, &["11"]).unwrap();
        let b = uniform_baseline(&inst, 30);
        assert_eq!(b.len(), 4);
        assert!(b.values().all(|&p| p == 0.25));

        let (inst, truth) = grover4();
        let b = uniform_baseline(&inst, 16);
        assert!((infidelity(&b, &truth) - 0.053_858_369_356_021_285).abs() < 1e-12);
        assert_eq!(search_accuracy(&b, &truth, inst.marked()), 1.0);
        let other = GroverInstance::from_bitstrings(4, &["0110"]).unwrap();
        let t = analytic_distribution(&other, None).unwrap();
        assert_eq!(search_accuracy(&uniform_baseline(&other, 16), &t, other.marked()), 0.0);
    }
}
