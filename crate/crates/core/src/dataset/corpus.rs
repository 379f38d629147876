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
use std::io::Write;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::answer::{build_answer, format_answer};
use super::config::{CorpusConfig, Shots, Split, Variant};
use super::prompt::build_prompt_with_qasm;
use super::sampling::{derive_record_seed, generate_instance};
use crate::analytic::analytic_distribution;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::grover::{build_circuit, optimal_iterations, GroverInstance};
use crate::qasm::{emit_prompt_flat, emit_simplified};
use crate::statevector::{run_circuit, sample_shots, seeded_rng};

/// One corpus line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub id: String,
    pub instance: GroverInstance,
    pub variant: Variant,
    pub split: Split,
    pub iterations: usize,
    pub shots: Shots,
    pub seed: u64,
    pub top_k: usize,
    /// Set when no unused (instance, variant) pair could be drawn for this slot.
    #[serde(default)]
    pub sampled_with_replacement: bool,
    /// Expected reply: top-k map literal with four-decimal values.
    pub answer: String,
    /// Full-precision exact distribution (dense map or two-value form).
    pub exact_answer: Distribution,
    pub prompt: String,
    /// QASM text embedded in the prompt; absent for the BASE variant.
    pub qasm_variant_text: Option<String>,
}

impl PromptRecord {
    pub fn n_qubits(&self) -> usize {
        self.instance.n_qubits()
    }
}

/// Everything about a record that is decided before any text is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordPlan {
    pub id: String,
    pub ordinal: u64,
    pub seed: u64,
    pub instance: GroverInstance,
    pub variant: Variant,
    pub sampled_with_replacement: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub records: usize,
    pub per_size: BTreeMap<usize, usize>,
    pub per_split: BTreeMap<String, usize>,
    pub per_variant: BTreeMap<String, usize>,
    pub sampled_with_replacement: usize,
    pub warnings: Vec<String>,
    pub validated: usize,
    pub validation_mismatches: usize,
    pub max_validation_deviation: f64,
    pub bytes: u64,
    pub sha256: String,
}

fn binomial_saturating(n: u64, k: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Decides instance and variant for every record, size by size, in order.
///
/// Each record draws from a ChaCha8 stream seeded by
/// [`derive_record_seed`]`(master_seed, n, ordinal)`: first M from
/// `marked_sizes`, then the variant from `variant_mix`, then up to
/// `max_distinct_attempts` instance seeds until an unused (instance, variant)
/// pair appears.
pub fn plan_corpus(config: &CorpusConfig) -> Result<(Vec<RecordPlan>, Vec<String>)> {
    config.validate()?;
    let mut plans = Vec::with_capacity(config.total_records());
    let mut warnings = Vec::new();
    let variants: Vec<(Variant, f64)> = config
        .variant_mix
        .iter()
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| (v, w))
        .collect();
    let variant_pick =
        WeightedIndex::new(variants.iter().map(|&(_, w)| w)).map_err(|e| Error::Config(format!("variant_mix: {e}")))?;

    for n in config.qubit_range.iter() {
        let dim = 1u64 << n;
        let sizes: Vec<(usize, f64)> = config
            .marked_sizes
            .iter()
            .filter(|(&m, &w)| w > 0.0 && (m as u64) < dim)
            .map(|(&m, &w)| (m, w))
            .collect();
        let size_pick = WeightedIndex::new(sizes.iter().map(|&(_, w)| w))
            .map_err(|e| Error::Config(format!("marked_sizes: {e}")))?;
        let count = config.counts[&n];

        let capacity = sizes
            .iter()
            .map(|&(m, _)| binomial_saturating(dim, m as u64))
            .fold(0u128, u128::saturating_add)
            .saturating_mul(variants.len() as u128);
        if (count as u128) > capacity {
            warnings.push(format!(
                "{count} records requested for {n} qubits but only {capacity} distinct (instance, variant) pairs exist; repeats are flagged"
            ));
        }

        let mut seen: HashSet<(GroverInstance, Variant)> = HashSet::with_capacity(count);
        for ordinal in 0..count as u64 {
            let seed = derive_record_seed(config.master_seed, n, ordinal);
            let mut rng = seeded_rng(seed);
            let m = sizes[size_pick.sample(&mut rng)].0;
            let variant = variants[variant_pick.sample(&mut rng)].0;
            let mut chosen = None;
            for _ in 0..config.max_distinct_attempts {
                let inst = generate_instance(n, m, rng.gen::<u64>())?;
                let key = (inst, variant);
                if !seen.contains(&key) {
                    seen.insert(key.clone());
                    chosen = Some((key.0, false));
                    break;
                }
                chosen = Some((key.0, true));
            }
            let (instance, repeated) = chosen.expect("at least one attempt");
            plans.push(RecordPlan {
                id: format!("n{n:02}-{ordinal:05}"),
                ordinal,
                seed,
                instance,
                variant,
                sampled_with_replacement: repeated,
            });
        }
    }
    Ok((plans, warnings))
}

/// Builds the full record for a plan. Returns the state-vector deviation when
/// the size is within the config's validation bound.
pub fn materialize_record(config: &CorpusConfig, plan: &RecordPlan) -> Result<(PromptRecord, Option<f64>)> {
    let inst = &plan.instance;
    let n = inst.n_qubits();
    let iterations = optimal_iterations(n, inst.marked_count())?;
    let truth = analytic_distribution(inst, Some(iterations))?;
    let validate = config.validate_max_qubits.is_some_and(|v| n <= v);

    let circuit = if plan.variant != Variant::Base || validate {
        Some(build_circuit(inst, Some(iterations))?)
    } else {
        None
    };
    let qasm_text = match (plan.variant, &circuit) {
        (Variant::Qasm, Some(c)) => Some(emit_prompt_flat(c).text),
        (Variant::SimplifiedConversational, Some(c)) => Some(emit_simplified(c).text),
        _ => None,
    };
    let deviation = match (&circuit, validate) {
        (Some(c), true) => {
            let sim = run_circuit(c)?.probabilities();
            Some(sim.iter().map(|(k, p)| (p - truth.prob(k)).abs()).fold(0.0, f64::max))
        }
        _ => None,
    };

    let answer_dist = match config.shots {
        Shots::Exact => truth.clone(),
        Shots::Count(s) => sample_shots(&truth, s, plan.seed)?,
    };
    let answer = format_answer(&build_answer(&answer_dist, config.top_k));
    let exact_answer = if n <= config.dense_truth_max_qubits {
        Distribution::dense(n, truth.to_dense()?)?
    } else {
        truth
    };
    let prompt = build_prompt_with_qasm(inst, plan.variant, qasm_text.as_deref(), config.top_k);

    Ok((
        PromptRecord {
            id: plan.id.clone(),
            instance: inst.clone(),
            variant: plan.variant,
            split: config.split_for(n),
            iterations,
            shots: config.shots,
            seed: plan.seed,
            top_k: config.top_k,
            sampled_with_replacement: plan.sampled_with_replacement,
            answer,
            exact_answer,
            prompt,
            qasm_variant_text: qasm_text,
        },
        deviation,
    ))
}

/// Lazily materialized corpus in deterministic order.
pub fn generate_corpus(config: &CorpusConfig) -> Result<impl Iterator<Item = Result<PromptRecord>> + '_> {
    let (plans, _) = plan_corpus(config)?;
    Ok(plans
        .into_iter()
        .map(move |p| materialize_record(config, &p).map(|(r, _)| r)))
}

/// `io::Write` adapter that hashes and counts everything passing through.
pub struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
    bytes: u64,
}

impl<W: Write> HashingWriter<W> {
    pub fn new(inner: W) -> Self {
        HashingWriter {
            inner,
            hasher: Sha256::new(),
            bytes: 0,
        }
    }

    pub fn finish(self) -> (W, String, u64) {
        (self.inner, hex::encode(self.hasher.finalize()), self.bytes)
    }
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        self.bytes += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

const CHUNK: usize = 64;

/// Writes the corpus as JSONL, one record per line in plan order.
pub fn write_corpus<W: Write>(config: &CorpusConfig, out: W) -> Result<GenerationSummary> {
    write_corpus_with(config, out, |_| Ok(()))
}

type BuiltRecord = (PromptRecord, Option<f64>, Vec<u8>);

/// As [`write_corpus`], calling `inspect` on every record in output order.
///
/// Records are built in parallel chunks; output order and bytes do not
/// depend on the worker count.
pub fn write_corpus_with<W: Write>(
    config: &CorpusConfig,
    out: W,
    mut inspect: impl FnMut(&PromptRecord) -> Result<()>,
) -> Result<GenerationSummary> {
    let (plans, warnings) = plan_corpus(config)?;
    let mut summary = GenerationSummary {
        warnings,
        ..GenerationSummary::default()
    };
    let mut writer = HashingWriter::new(out);
    for chunk in plans.chunks(CHUNK) {
        let built: Vec<Result<BuiltRecord>> = chunk
            .par_iter()
            .map(|plan| {
                let (rec, dev) = materialize_record(config, plan)?;
                let mut line = serde_json::to_vec(&rec)?;
                line.push(b'\n');
                Ok((rec, dev, line))
            })
            .collect();
        for item in built {
            let (rec, dev, line) = item?;
            writer.write_all(&line)?;
            inspect(&rec)?;
            summary.records += 1;
            *summary.per_size.entry(rec.n_qubits()).or_default() += 1;
            *summary
                .per_split
                .entry(format!("{:?}", rec.split).to_uppercase())
                .or_default() += 1;
            *summary.per_variant.entry(rec.variant.to_string()).or_default() += 1;
            summary.sampled_with_replacement += rec.sampled_with_replacement as usize;
            if let Some(d) = dev {
                summary.validated += 1;
                summary.max_validation_deviation = summary.max_validation_deviation.max(d);
                if d >= 1e-9 {
                    summary.validation_mismatches += 1;
                }
            }
        }
    }
    writer.flush()?;
    let (_, sha, bytes) = writer.finish();
    summary.sha256 = sha;
    summary.bytes = bytes;
    if summary.validation_mismatches > 0 {
        log::warn!(
            "{} records disagree with the state-vector engine",
            summary.validation_mismatches
        );
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::config::QubitRange;

    fn small() -> CorpusConfig {
        CorpusConfig::uniform(QubitRange::new(3, 6).unwrap(), 12)
    }

    #[test]
    fn ids_are_unique_and_ordered() {
        let (plans, _) = plan_corpus(&small()).unwrap();
        assert_eq!(plans.len(), 48);
        let ids: HashSet<_> = plans.iter().map(|p| p.id.clone()).collect();
        assert_eq!(ids.len(), 48);
        assert_eq!(plans[0].id, "n03-00000");
        assert_eq!(plans[47].id, "n06-00011");
    }

    #[test]
    fn infeasible_sizes_are_reported_and_flagged() {
        let mut c = CorpusConfig::uniform(QubitRange::new(3, 3).unwrap(), 40);
        c.marked_sizes = [(1, 1.0)].into_iter().collect();
        c.variant_mix = [(Variant::Base, 1.0)].into_iter().collect();
        let (plans, warnings) = plan_corpus(&c).unwrap();
        assert_eq!(warnings.len(), 1);
        let distinct: HashSet<_> = plans.iter().map(|p| p.instance.clone()).collect();
        assert_eq!(distinct.len(), 8);
        assert_eq!(plans.iter().filter(|p| p.sampled_with_replacement).count(), 32);
    }

    #[test]
    fn shots_mode_is_seeded() {
        let mut c = small();
        c.shots = Shots::Count(500);
        let a: Vec<_> = generate_corpus(&c).unwrap().map(Result::unwrap).collect();
        let b: Vec<_> = generate_corpus(&c).unwrap().map(Result::unwrap).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.shots == Shots::Count(500)));
    }

    #[test]
    fn validation_mode_checks_statevector() {
        let mut c = small();
        c.validate_max_qubits = Some(6);
        let s = write_corpus(&c, std::io::sink()).unwrap();
        assert_eq!(s.validated, 48);
        assert_eq!(s.validation_mismatches, 0);
        assert!(s.max_validation_deviation < 1e-9);
    }

    #[test]
    fn binomial() {
        assert_eq!(binomial_saturating(8, 3), 56);
        assert_eq!(binomial_saturating(1 << 30, 4), u128::MAX);
    }
}
