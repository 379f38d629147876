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

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transport::{ChatClient, ClientStats, LogEvent, Reply};
use crate::dataset::{PromptRecord, Variant};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QueryStatus {
    Ok,
    Failed,
}

/// One predictions-file line; readable as an evaluation prediction input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub id: String,
    pub model_tag: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub train_range: Option<String>,
    pub variant: Variant,
    pub n_qubits: usize,
    pub status: QueryStatus,
    pub raw_reply: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct QueryOptions {
    pub model_tag: String,
    pub train_range: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    pub records: usize,
    pub ok: usize,
    pub failed: usize,
    #[serde(flatten)]
    pub stats: ClientStats,
    pub events: Vec<LogEvent>,
}

/// Sends every record's prompt and writes one [`QueryRecord`] per input, in
/// input order, flushing after each line.
///
/// Up to `width` requests run at once. A rerun over the same cache replays
/// finished records without network traffic, so an interrupted run resumes
/// by running it again. On error the run-log events stay in `client`.
pub fn query_model<I, W>(records: I, client: &ChatClient, opts: &QueryOptions, mut out: W) -> Result<QueryReport>
where
    I: IntoIterator<Item = Result<PromptRecord>>,
    W: Write,
{
    let width = client.config().width;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(width)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let mut report = QueryReport {
        records: 0,
        ok: 0,
        failed: 0,
        stats: ClientStats::default(),
        events: Vec::new(),
    };
    let mut it = records.into_iter();
    let chunk = width * 2;
    let result = loop {
        let batch: Vec<PromptRecord> = match it.by_ref().take(chunk).collect::<Result<_>>() {
            Ok(b) => b,
            Err(e) => break Err(e),
        };
        if batch.is_empty() {
            break Ok(());
        }
        let replies: Vec<Result<Reply>> =
            pool.install(|| batch.par_iter().map(|r| client.ask(&r.id, &r.prompt)).collect());
        let mut failure = None;
        for (rec, reply) in batch.iter().zip(replies) {
            let reply = match reply {
                Ok(r) => r,
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            };
            let (status, raw_reply, error) = match reply {
                Reply::Ok { text, .. } => (QueryStatus::Ok, Some(text), None),
                Reply::Failed(msg) => (QueryStatus::Failed, None, Some(msg)),
            };
            let line = QueryRecord {
                id: rec.id.clone(),
                model_tag: opts.model_tag.clone(),
                train_range: opts.train_range.clone(),
                variant: rec.variant,
                n_qubits: rec.n_qubits(),
                status,
                raw_reply,
                error,
            };
            let mut bytes = serde_json::to_vec(&line)?;
            bytes.push(b'\n');
            out.write_all(&bytes)?;
            out.flush()?;
            report.records += 1;
            match status {
                QueryStatus::Ok => report.ok += 1,
                QueryStatus::Failed => report.failed += 1,
            }
        }
        if let Some(e) = failure {
            break Err(e);
        }
    };
    result?;
    report.stats = client.stats();
    report.events = client.take_events();
    Ok(report)
}
