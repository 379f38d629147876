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

//! Chat-completion endpoint client for collecting model predictions.

mod cache;
mod config;
mod query;
mod transport;

pub use cache::{cache_key, CacheEntry, DecodingParams, ReplyCache, TokenUsage};
pub use config::EndpointConfig;
pub use query::{query_model, QueryOptions, QueryRecord, QueryReport, QueryStatus};
pub use transport::{ChatClient, ClientStats, EventKind, LogEvent, RateLimiter, Reply};
