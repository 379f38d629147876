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

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{infidelity, marked_infidelity, search_accuracy_detail};
use super::parse::{parse_model_answer, ParseStatus};
use crate::dataset::{PromptRecord, Split, Variant};
use crate::error::{Error, Result};

/// One line of a predictions file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionInput {
    pub id: String,
    pub model_tag: String,
    /// Missing when the query failed.
    pub raw_reply: Option<String>,
    /// Training-range tag of the model, e.g. "3-7".
    #[serde(default)]
    pub train_range: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    /// Tag used for predictions that carry no `train_range` of their own.
    pub default_train_range: Option<String>,
}

pub(crate) const UNTAGGED: &str = "-";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordScore {
    pub id: String,
    pub model_tag: String,
    pub train_range: String,
    pub n_qubits: usize,
    pub variant: Variant,
    pub split: Split,
    pub status: ParseStatus,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_k: Option<f64>,
    pub clamped: bool,
    pub invalid_keys: usize,
    pub empty_prediction: bool,
    pub truth_fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupKey {
    pub model_tag: String,
    pub train_range: String,
    pub n_qubits: usize,
    pub variant: Variant,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Stat { mean, std })
    }
}

/// Metric summary over the OK records of one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    #[serde(flatten)]
    pub key: GroupKey,
    pub ok_records: usize,
    pub alpha: Stat,
    pub epsilon: Stat,
    pub epsilon_k: Stat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRate {
    #[serde(flatten)]
    pub key: GroupKey,
    pub records: usize,
    pub failures: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub records: Vec<RecordScore>,
    /// Groups with at least one OK record.
    pub aggregates: Vec<Aggregate>,
    pub failure_rates: Vec<FailureRate>,
    pub failure_rate: f64,
    pub unmatched_predictions: Vec<String>,
    pub duplicate_predictions: usize,
    pub truth_fallbacks: usize,
}

fn score(rec: &PromptRecord, pred: &PredictionInput, opts: &EvalOptions) -> RecordScore {
    let n = rec.n_qubits();
    let parsed = parse_model_answer(pred.raw_reply.as_deref().unwrap_or(""), n);
    let mut out = RecordScore {
        id: rec.id.clone(),
        model_tag: pred.model_tag.clone(),
        train_range: pred
            .train_range
            .clone()
            .or_else(|| opts.default_train_range.clone())
            .unwrap_or_else(|| UNTAGGED.to_string()),
        n_qubits: n,
        variant: rec.variant,
        split: rec.split,
        status: parsed.status,
        alpha: None,
        epsilon: None,
        epsilon_k: None,
        clamped: parsed.clamped,
        invalid_keys: parsed.invalid_keys,
        empty_prediction: false,
        truth_fallback: false,
    };
    if let Some(map) = &parsed.parsed {
        let truth = &rec.exact_answer;
        let marked = rec.instance.marked();
        let acc = search_accuracy_detail(map, truth, marked);
        out.alpha = Some(acc.alpha);
        out.empty_prediction = acc.empty_prediction;
        out.truth_fallback = acc.truth_fallback;
        out.epsilon = Some(infidelity(map, truth));
        out.epsilon_k = Some(marked_infidelity(map, truth, marked));
    }
    out
}

const CHUNK: usize = 256;

/// Joins predictions to corpus records by id and scores every match.
///
/// The corpus is streamed; only predictions are held in memory.
pub fn evaluate_bundle<P, C>(predictions: P, corpus: C, opts: &EvalOptions) -> Result<EvalResult>
where
    P: IntoIterator<Item = Result<PredictionInput>>,
    C: IntoIterator<Item = Result<PromptRecord>>,
{
    let mut by_id: HashMap<String, Vec<PredictionInput>> = HashMap::new();
    let mut duplicates = 0;
    for p in predictions {
        let p = p?;
        let slot = by_id.entry(p.id.clone()).or_default();
        if slot
            .iter()
            .any(|q| q.model_tag == p.model_tag && q.train_range == p.train_range)
        {
            duplicates += 1;
        } else {
            slot.push(p);
        }
    }

    let mut scores = Vec::new();
    let mut corpus = corpus.into_iter();
    loop {
        let mut batch = Vec::with_capacity(CHUNK);
        for rec in corpus.by_ref() {
            let rec = rec?;
            if let Some(preds) = by_id.remove(&rec.id) {
                batch.push((rec, preds));
                if batch.len() == CHUNK {
                    break;
                }
            }
        }
        if batch.is_empty() {
            break;
        }
        let scored: Vec<RecordScore> = batch
            .par_iter()
            .flat_map_iter(|(rec, preds)| preds.iter().map(move |p| score(rec, p, opts)))
            .collect();
        scores.extend(scored);
    }
    if scores.is_empty() {
        return Err(Error::Eval("no prediction id matches a corpus record".into()));
    }
    let mut unmatched: Vec<String> = by_id.into_keys().collect();
    unmatched.sort();
    scores.sort_by(|a, b| (&a.id, &a.model_tag, &a.train_range).cmp(&(&b.id, &b.model_tag, &b.train_range)));
    Ok(summarize(scores, unmatched, duplicates))
}

/// Builds aggregates from per-record scores.
pub fn summarize(records: Vec<RecordScore>, unmatched: Vec<String>, duplicates: usize) -> EvalResult {
    let mut groups: BTreeMap<GroupKey, Vec<&RecordScore>> = BTreeMap::new();
    for r in &records {
        let key = GroupKey {
            model_tag: r.model_tag.clone(),
            train_range: r.train_range.clone(),
            n_qubits: r.n_qubits,
            variant: r.variant,
        };
        groups.entry(key).or_default().push(r);
    }
    let mut aggregates = Vec::new();
    let mut failure_rates = Vec::new();
    for (key, rs) in groups {
        let ok: Vec<&&RecordScore> = rs.iter().filter(|r| r.status == ParseStatus::Ok).collect();
        let failures = rs.len() - ok.len();
        failure_rates.push(FailureRate {
            key: key.clone(),
            records: rs.len(),
            failures,
            rate: failures as f64 / rs.len() as f64,
        });
        let col = |f: fn(&RecordScore) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
        if let (Some(alpha), Some(epsilon), Some(epsilon_k)) = (
            Stat::of(&col(|r| r.alpha)),
            Stat::of(&col(|r| r.epsilon)),
            Stat::of(&col(|r| r.epsilon_k)),
        ) {
            aggregates.push(Aggregate {
                key,
                ok_records: ok.len(),
                alpha,
                epsilon,
                epsilon_k,
            });
        }
    }
    let failed = records.iter().filter(|r| r.status != ParseStatus::Ok).count();
    EvalResult {
        failure_rate: failed as f64 / records.len().max(1) as f64,
        truth_fallbacks: records.iter().filter(|r| r.truth_fallback).count(),
        records,
        aggregates,
        failure_rates,
        unmatched_predictions: unmatched,
        duplicate_predictions: duplicates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_corpus, CorpusConfig, QubitRange};

    fn corpus(range: (usize, usize), per: usize) -> Vec<PromptRecord> {
        let cfg = CorpusConfig::uniform(QubitRange::new(range.0, range.1).unwrap(), per);
        generate_corpus(&cfg).unwrap().map(Result::unwrap).collect()
    }

    fn preds(recs: &[PromptRecord], reply: impl Fn(&PromptRecord) -> Option<String>) -> Vec<Result<PredictionInput>> {
        recs.iter()
            .map(|r| {
                Ok(PredictionInput {
                    id: r.id.clone(),
                    model_tag: "m".into(),
                    raw_reply: reply(r),
                    train_range: None,
                })
            })
            .collect()
    }

    #[test]
    fn self_answers_score_perfectly() {
        let recs = corpus((3, 6), 6);
        let p = preds(&recs, |r| Some(r.answer.clone()));
        let res = evaluate_bundle(p, recs.iter().cloned().map(Ok), &EvalOptions::default()).unwrap();
        assert_eq!(res.records.len(), 24);
        assert_eq!(res.failure_rate, 0.0);
        for a in &res.aggregates {
            assert_eq!(a.alpha.mean, 1.0);
            assert!(a.epsilon.mean < 1e-6, "{a:?}");
        }
    }

    #[test]
    fn all_malformed() {
        let recs = corpus((3, 4), 5);
        let p = preds(&recs, |_| Some("no idea".into()));
        let res = evaluate_bundle(p, recs.into_iter().map(Ok), &EvalOptions::default()).unwrap();
        assert_eq!(res.failure_rate, 1.0);
        assert!(res.aggregates.is_empty());
        assert!(res.failure_rates.iter().all(|f| f.rate == 1.0));
    }

    #[test]
    fn unmatched_and_empty_join() {
        let recs = corpus((3, 3), 4);
        let mut p = preds(&recs[..2], |r| Some(r.answer.clone()));
        p.push(Ok(PredictionInput {
            id: "nope".into(),
            model_tag: "m".into(),
            raw_reply: None,
            train_range: None,
        }));
        let res = evaluate_bundle(p, recs.iter().cloned().map(Ok), &EvalOptions::default()).unwrap();
        assert_eq!(res.unmatched_predictions, vec!["nope".to_string()]);
        assert_eq!(res.records.len(), 2);

        let none: Vec<Result<PredictionInput>> = Vec::new();
        assert!(evaluate_bundle(none, recs.into_iter().map(Ok), &EvalOptions::default()).is_err());
    }

    #[test]
    fn stat_uses_sample_std() {
        let s = Stat::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Stat::of(&[7.0]).unwrap().std, 0.0);
    }
}
