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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n_qubits} qubits exceeds the dense simulation limit of {limit}")]
    Resource { n_qubits: usize, limit: usize },

    /// Positioned QASM parse failure. `statement` is the zero-based statement index.
    #[error("parse error at statement {statement} (line {line}): {message}")]
    Parse {
        statement: usize,
        line: usize,
        message: String,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    IoBare(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("evaluation: {0}")]
    Eval(String),

    #[error("endpoint rejected credentials (HTTP {status})")]
    Auth { status: u16 },

    #[error("endpoint: {0}")]
    Endpoint(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
