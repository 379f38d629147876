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

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::cache::{cache_key, CacheEntry, DecodingParams, ReplyCache, TokenUsage};
use super::config::EndpointConfig;
use crate::error::{Error, Result};

/// Spaces request starts at least `60 / cap` seconds apart.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next: Mutex<Instant>,
}

impl RateLimiter {
    pub fn per_minute(cap: u32) -> Self {
        RateLimiter {
            interval: Duration::from_secs(60) / cap.max(1),
            next: Mutex::new(Instant::now()),
        }
    }

    /// Blocks until the caller may send.
    pub fn acquire(&self) {
        let wait = {
            let mut next = self.next.lock().expect("limiter lock");
            let now = Instant::now();
            let slot = (*next).max(now);
            *next = slot + self.interval;
            slot - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    CacheHit,
    Request,
    Retry,
    Failed,
    AuthError,
}

/// One run-log line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEvent {
    pub id: String,
    pub kind: EventKind,
    pub attempt: u32,
    pub status: Option<u16>,
    pub delay_ms: Option<u64>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply {
    Ok { text: String, cached: bool },
    Failed(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientStats {
    pub requests: u64,
    pub retries: u64,
    pub cache_hits: u64,
    pub failures: u64,
}

#[derive(Default)]
struct Counters {
    requests: AtomicU64,
    retries: AtomicU64,
    cache_hits: AtomicU64,
    failures: AtomicU64,
}

/// Chat-completion client with reply cache, rate cap and retries.
pub struct ChatClient {
    cfg: EndpointConfig,
    url: String,
    token: Option<String>,
    http: reqwest::blocking::Client,
    limiter: RateLimiter,
    cache: ReplyCache,
    counters: Counters,
    events: Mutex<Vec<LogEvent>>,
    aborted: AtomicBool,
}

impl std::fmt::Debug for ChatClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChatClient")
            .field("url", &self.url)
            .field("model", &self.cfg.model)
            .field("token", &self.token.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

enum Attempt {
    Done(String, Option<TokenUsage>),
    Retry {
        status: Option<u16>,
        delay: Duration,
        message: String,
    },
    Fail(String),
}

fn parse_usage(v: &Value) -> Option<TokenUsage> {
    let u = v.get("usage")?;
    Some(TokenUsage {
        prompt_tokens: u.get("prompt_tokens").and_then(Value::as_u64),
        completion_tokens: u.get("completion_tokens").and_then(Value::as_u64),
        total_tokens: u.get("total_tokens").and_then(Value::as_u64),
    })
}

impl ChatClient {
    pub fn new(cfg: &EndpointConfig) -> Result<Self> {
        cfg.validate()?;
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .build()
            .map_err(|e| Error::Endpoint(e.to_string()))?;
        Ok(ChatClient {
            url: cfg.endpoint_url(),
            token: cfg.token()?,
            http,
            limiter: RateLimiter::per_minute(cfg.requests_per_minute),
            cache: ReplyCache::open(&cfg.cache_dir)?,
            counters: Counters::default(),
            events: Mutex::new(Vec::new()),
            aborted: AtomicBool::new(false),
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.cfg
    }

    fn params(&self) -> DecodingParams {
        DecodingParams {
            temperature: self.cfg.temperature,
            max_tokens: self.cfg.max_tokens,
        }
    }

    pub fn key_for(&self, prompt: &str) -> String {
        cache_key(&self.url, &self.cfg.model, prompt, &self.params())
    }

    fn log(&self, event: LogEvent) {
        self.events.lock().expect("event lock").push(event);
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let ms = self
            .cfg
            .backoff_base_ms
            .saturating_mul(1u64 << attempt.min(20))
            .min(self.cfg.backoff_max_ms);
        Duration::from_millis(ms)
    }

    fn send(&self, prompt: &str, attempt: u32) -> Result<Attempt> {
        let mut body = json!({
            "model": self.cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
        });
        if let Some(m) = self.cfg.max_tokens {
            body["max_tokens"] = json!(m);
        }
        let mut req = self.http.post(&self.url).json(&body);
        if let Some(t) = &self.token {
            req = req.bearer_auth(t);
        }
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) => {
                return Ok(Attempt::Retry {
                    status: None,
                    delay: self.backoff(attempt),
                    message: e.without_url().to_string(),
                })
            }
        };
        let status = resp.status().as_u16();
        match status {
            200..=299 => {
                let v: Value = match resp.json() {
                    Ok(v) => v,
                    Err(e) => return Ok(Attempt::Fail(format!("unreadable response body: {}", e.without_url()))),
                };
                match v.pointer("/choices/0/message/content").and_then(Value::as_str) {
                    Some(text) => Ok(Attempt::Done(text.to_string(), parse_usage(&v))),
                    None => Ok(Attempt::Fail("response has no choices[0].message.content".into())),
                }
            }
            401 | 403 => Err(Error::Auth { status }),
            429 | 500..=599 => {
                let delay = resp
                    .headers()
                    .get(reqwest::header::RETRY_AFTER)
                    .and_then(|h| h.to_str().ok())
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .filter(|s| s.is_finite() && *s >= 0.0)
                    .map(|s| Duration::from_secs_f64(s).min(Duration::from_millis(self.cfg.backoff_max_ms)))
                    .unwrap_or_else(|| self.backoff(attempt));
                Ok(Attempt::Retry {
                    status: Some(status),
                    delay,
                    message: format!("HTTP {status}"),
                })
            }
            _ => Ok(Attempt::Fail(format!("HTTP {status}"))),
        }
    }

    /// Answers `prompt` from cache or the endpoint. Transport failures that
    /// outlast the retry budget come back as [`Reply::Failed`]; auth errors
    /// abort this and every later call.
    pub fn ask(&self, id: &str, prompt: &str) -> Result<Reply> {
        let key = self.key_for(prompt);
        if let Some(hit) = self.cache.get(&key)? {
            self.counters.cache_hits.fetch_add(1, Ordering::Relaxed);
            self.log(LogEvent {
                id: id.into(),
                kind: EventKind::CacheHit,
                attempt: 0,
                status: None,
                delay_ms: None,
                message: None,
            });
            return Ok(Reply::Ok {
                text: hit.reply,
                cached: true,
            });
        }
        let mut last = String::new();
        for attempt in 0..=self.cfg.max_retries {
            if self.aborted.load(Ordering::SeqCst) {
                return Err(Error::Auth { status: 0 });
            }
            self.limiter.acquire();
            self.counters.requests.fetch_add(1, Ordering::Relaxed);
            self.log(LogEvent {
                id: id.into(),
                kind: EventKind::Request,
                attempt,
                status: None,
                delay_ms: None,
                message: None,
            });
            match self.send(prompt, attempt) {
                Err(Error::Auth { status }) => {
                    self.aborted.store(true, Ordering::SeqCst);
                    self.log(LogEvent {
                        id: id.into(),
                        kind: EventKind::AuthError,
                        attempt,
                        status: Some(status),
                        delay_ms: None,
                        message: None,
                    });
                    return Err(Error::Auth { status });
                }
                Err(e) => return Err(e),
                Ok(Attempt::Done(text, usage)) => {
                    let timestamp = SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    let stored = self.cache.put(CacheEntry {
                        key,
                        reply: text,
                        timestamp,
                        usage,
                    })?;
                    return Ok(Reply::Ok {
                        text: stored.reply,
                        cached: false,
                    });
                }
                Ok(Attempt::Fail(msg)) => {
                    last = msg;
                    break;
                }
                Ok(Attempt::Retry { status, delay, message }) => {
                    last = message;
                    if attempt == self.cfg.max_retries {
                        break;
                    }
                    self.counters.retries.fetch_add(1, Ordering::Relaxed);
                    log::warn!("{id}: {last}, retrying in {} ms", delay.as_millis());
                    self.log(LogEvent {
                        id: id.into(),
                        kind: EventKind::Retry,
                        attempt,
                        status,
                        delay_ms: Some(delay.as_millis() as u64),
                        message: Some(last.clone()),
                    });
                    std::thread::sleep(delay);
                }
            }
        }
        self.counters.failures.fetch_add(1, Ordering::Relaxed);
        self.log(LogEvent {
            id: id.into(),
            kind: EventKind::Failed,
            attempt: self.cfg.max_retries,
            status: None,
            delay_ms: None,
            message: Some(last.clone()),
        });
        Ok(Reply::Failed(last))
    }

    pub fn stats(&self) -> ClientStats {
        ClientStats {
            requests: self.counters.requests.load(Ordering::Relaxed),
            retries: self.counters.retries.load(Ordering::Relaxed),
            cache_hits: self.counters.cache_hits.load(Ordering::Relaxed),
            failures: self.counters.failures.load(Ordering::Relaxed),
        }
    }

    pub fn take_events(&self) -> Vec<LogEvent> {
        std::mem::take(&mut *self.events.lock().expect("event lock"))
    }
}
