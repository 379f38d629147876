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

//! Prompt/answer corpus construction.

mod answer;
mod config;
mod corpus;
mod prompt;
mod sampling;
mod split;

pub use answer::{build_answer, format_answer, format_probability, round_probability, AnswerEntry};
pub use config::{BundleSpec, CorpusConfig, QubitRange, Shots, Split, Variant};
pub use corpus::{
    generate_corpus, materialize_record, plan_corpus, write_corpus, write_corpus_with, GenerationSummary,
    HashingWriter, PromptRecord, RecordPlan,
};
pub use prompt::build_prompt;
pub use sampling::{derive_record_seed, generate_instance, splitmix64};
pub use split::{
    open_records, read_records, read_records_as, record_key, split_corpus, write_bundle, BundleManifest, ManifestFile,
    SplitReport,
};
