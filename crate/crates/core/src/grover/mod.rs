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

//! Grover search instances and their gate-level circuits.

mod build;
mod circuit;
pub(crate) mod instance;

pub use build::{build_circuit, build_diffuser, build_oracle, optimal_iterations};
pub use circuit::{Circuit, GateKind, GateOp};
pub use instance::GroverInstance;
