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

//! Scoring predicted distributions: answer parsing, the three metrics,
//! per-bundle aggregation and report output.

mod bundle;
mod metrics;
mod parse;
mod report;

pub use bundle::{
    evaluate_bundle, summarize, Aggregate, EvalOptions, EvalResult, FailureRate, GroupKey, PredictionInput,
    RecordScore, Stat,
};
pub use metrics::{
    infidelity, marked_infidelity, search_accuracy, search_accuracy_detail, uniform_baseline, Accuracy, PredMap,
};
pub use parse::{parse_model_answer, ParseStatus, PredictionRecord};
pub use report::{aggregates_csv, plot_series, write_plot_data, write_report, PlotSeries, PLOT_SERIES};
