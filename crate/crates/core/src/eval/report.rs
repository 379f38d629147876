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
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::bundle::{EvalResult, RecordScore, Stat};
use super::parse::ParseStatus;
use crate::error::{Error, Result};

pub const PLOT_SERIES: [&str; 4] = [
    "accuracy_vs_train_range",
    "infidelity_vs_train_range",
    "scalability_accuracy",
    "scalability_marked_infidelity",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn to_csv<'a>(header: &'a [String], rows: impl IntoIterator<Item = &'a Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let written = std::iter::once(header)
        .chain(rows.into_iter().map(Vec::as_slice))
        .try_for_each(|r| w.write_record(r));
    written.expect("writing CSV to memory");
    String::from_utf8(w.into_inner().expect("in-memory buffer")).expect("CSV of UTF-8 fields")
}

impl PlotSeries {
    pub fn to_csv(&self) -> String {
        to_csv(&self.header, &self.rows)
    }
}

fn series(
    name: &str,
    records: &[RecordScore],
    by_size: bool,
    metric: &str,
    value: fn(&RecordScore) -> Option<f64>,
) -> PlotSeries {
    let mut groups: BTreeMap<(String, String, String, usize), Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == ParseStatus::Ok) {
        if let Some(v) = value(r) {
            let n = if by_size { r.n_qubits } else { 0 };
            groups
                .entry((r.model_tag.clone(), r.variant.to_string(), r.train_range.clone(), n))
                .or_default()
                .push(v);
        }
    }
    let mut header = vec!["model_tag".to_string(), "variant".into(), "train_range".into()];
    if by_size {
        header.push("n_qubits".into());
    }
    header.extend([format!("{metric}_mean"), format!("{metric}_std"), "records".into()]);
    let rows = groups
        .into_iter()
        .map(|((model, variant, range, n), vals)| {
            let s = Stat::of(&vals).unwrap_or_default();
            let mut row = vec![model, variant, range];
            if by_size {
                row.push(n.to_string());
            }
            row.extend([s.mean.to_string(), s.std.to_string(), vals.len().to_string()]);
            row
        })
        .collect();
    PlotSeries {
        name: name.to_string(),
        header,
        rows,
    }
}

/// Accuracy and infidelity per training range, and accuracy and marked
/// infidelity per test size.
pub fn plot_series(result: &EvalResult) -> Vec<PlotSeries> {
    let r = &result.records;
    vec![
        series(PLOT_SERIES[0], r, false, "alpha", |s| s.alpha),
        series(PLOT_SERIES[1], r, false, "epsilon", |s| s.epsilon),
        series(PLOT_SERIES[2], r, true, "alpha", |s| s.alpha),
        series(PLOT_SERIES[3], r, true, "epsilon_k", |s| s.epsilon_k),
    ]
}

pub fn aggregates_csv(result: &EvalResult) -> String {
    let header: Vec<String> = [
        "model_tag",
        "train_range",
        "n_qubits",
        "variant",
        "records",
        "failures",
        "failure_rate",
        "ok_records",
        "alpha_mean",
        "alpha_std",
        "epsilon_mean",
        "epsilon_std",
        "epsilon_k_mean",
        "epsilon_k_std",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<String>> = result
        .failure_rates
        .iter()
        .map(|f| {
            let mut fields = vec![
                f.key.model_tag.clone(),
                f.key.train_range.clone(),
                f.key.n_qubits.to_string(),
                f.key.variant.to_string(),
                f.records.to_string(),
                f.failures.to_string(),
                f.rate.to_string(),
            ];
            match result.aggregates.iter().find(|a| a.key == f.key) {
                Some(a) => fields.extend([
                    a.ok_records.to_string(),
                    a.alpha.mean.to_string(),
                    a.alpha.std.to_string(),
                    a.epsilon.mean.to_string(),
                    a.epsilon.std.to_string(),
                    a.epsilon_k.mean.to_string(),
                    a.epsilon_k.std.to_string(),
                ]),
                None => {
                    fields.push("0".into());
                    fields.extend(std::iter::repeat_n(String::new(), 6));
                }
            }
            fields
        })
        .collect();
    to_csv(&header, &rows)
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `report.json` and `aggregates.csv` into `dir`.
pub fn write_report(result: &EvalResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(vec![
        write(dir.join("report.json"), &serde_json::to_vec_pretty(result)?)?,
        write(dir.join("aggregates.csv"), aggregates_csv(result).as_bytes())?,
    ])
}

/// Writes one CSV per plot series into `dir`.
pub fn write_plot_data(result: &EvalResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    plot_series(result)
        .into_iter()
        .map(|s| write(dir.join(format!("{}.csv", s.name)), s.to_csv().as_bytes()))
        .collect()
}
