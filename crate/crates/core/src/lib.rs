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

//! Exact ground truth for Grover search, QASM prompt corpora, and scoring of
//! model-predicted output distributions.

pub mod analytic;
pub mod bits;
pub mod cli;
pub mod client;
pub mod dataset;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod grover;
pub mod qasm;
pub mod statevector;

pub use distribution::Distribution;
pub use error::{Error, Result};
pub use grover::{Circuit, GateKind, GateOp, GroverInstance};
