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
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: Option<u64>,
    pub completion_tokens: Option<u64>,
    pub total_tokens: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub reply: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub usage: Option<TokenUsage>,
}

/// Decoding parameters that change the reply and so take part in the key.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodingParams {
    pub temperature: f64,
    pub max_tokens: Option<u32>,
}

/// SHA-256 over a canonical JSON encoding of the request identity.
pub fn cache_key(endpoint: &str, model: &str, prompt: &str, params: &DecodingParams) -> String {
    #[derive(Serialize)]
    struct Identity<'a> {
        endpoint: &'a str,
        model: &'a str,
        prompt: &'a str,
        params: &'a DecodingParams,
    }
    let bytes = serde_json::to_vec(&Identity {
        endpoint,
        model,
        prompt,
        params,
    })
    .expect("plain struct serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Content-addressed reply store: one JSON file per key under a two-hex-digit fan-out.
#[derive(Clone, Debug)]
pub struct ReplyCache {
    dir: PathBuf,
}

impl ReplyCache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(ReplyCache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<CacheEntry>> {
        let p = self.path(key);
        match std::fs::read(&p) {
            Ok(bytes) => {
                let entry: CacheEntry = serde_json::from_slice(&bytes)
                    .map_err(|e| Error::Config(format!("corrupt cache entry {}: {e}", p.display())))?;
                Ok(Some(entry))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&p, e)),
        }
    }

    /// Stores `entry` unless the key is already present, and returns whichever
    /// entry ends up on disk. A key never maps to two different replies.
    pub fn put(&self, entry: CacheEntry) -> Result<CacheEntry> {
        let p = self.path(&entry.key);
        let parent = p.parent().expect("cache paths have a parent");
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| Error::io(parent, e))?;
        tmp.write_all(&serde_json::to_vec(&entry)?)
            .map_err(|e| Error::io(tmp.path(), e))?;
        match tmp.persist_noclobber(&p) {
            Ok(_) => Ok(entry),
            Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => Ok(self.get(&entry.key)?.unwrap_or(entry)),
            Err(e) => Err(Error::io(&p, e.error)),
        }
    }

    pub fn len(&self) -> usize {
        walk(&self.dir)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn walk(dir: &Path) -> usize {
    std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .map(|e| {
            let p = e.path();
            if p.is_dir() {
                walk(&p)
            } else {
                usize::from(p.extension().is_some_and(|x| x == "json"))
            }
        })
        .sum()
}
