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

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where and how to send prompts. The auth token itself is never stored
/// here, only the name of the environment variable that holds it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EndpointConfig {
    /// Base URL; requests go to `{base_url}/chat/completions`.
    pub base_url: String,
    pub model: String,
    /// Environment variable holding a bearer token. Unset means no auth header.
    pub token_env: Option<String>,
    pub max_retries: u32,
    pub requests_per_minute: u32,
    pub timeout_secs: u64,
    pub cache_dir: PathBuf,
    pub temperature: f64,
    pub max_tokens: Option<u32>,
    /// Requests in flight at once.
    pub width: usize,
    pub backoff_base_ms: u64,
    pub backoff_max_ms: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://127.0.0.1:8000/v1".into(),
            model: "default".into(),
            token_env: None,
            max_retries: 3,
            requests_per_minute: 60,
            timeout_secs: 60,
            cache_dir: PathBuf::from(".grover-bench-cache"),
            temperature: 0.0,
            max_tokens: None,
            width: 4,
            backoff_base_ms: 500,
            backoff_max_ms: 30_000,
        }
    }
}

impl EndpointConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_url.starts_with("http://") || self.base_url.starts_with("https://")) {
            return Err(Error::Config(format!(
                "base_url must be http(s), got {:?}",
                self.base_url
            )));
        }
        if self.model.trim().is_empty() {
            return Err(Error::Config("model is empty".into()));
        }
        if self.requests_per_minute == 0 {
            return Err(Error::Config("requests_per_minute must be at least 1".into()));
        }
        if self.width == 0 {
            return Err(Error::Config("width must be at least 1".into()));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::Config("temperature must be non-negative".into()));
        }
        if let Some(var) = &self.token_env {
            if var.is_empty() {
                return Err(Error::Config("token_env is empty".into()));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: EndpointConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            serde_yaml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn endpoint_url(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }

    /// Reads the token from the configured variable.
    pub(crate) fn token(&self) -> Result<Option<String>> {
        match &self.token_env {
            None => Ok(None),
            Some(var) => std::env::var(var)
                .map(Some)
                .map_err(|_| Error::Config(format!("environment variable {var} is not set"))),
        }
    }
}
