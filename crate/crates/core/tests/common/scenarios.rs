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

use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use grover_bench::client::{query_model, ChatClient, EndpointConfig, QueryOptions, QueryReport, ReplyCache};
use grover_bench::dataset::{generate_corpus, CorpusConfig, PromptRecord, QubitRange};
use sha2::{Digest, Sha256};

use super::stub::{StubResponse, StubServer};

pub fn records() -> Vec<PromptRecord> {
    let cfg = CorpusConfig::uniform(QubitRange::new(3, 4).unwrap(), 4);
    generate_corpus(&cfg).unwrap().map(Result::unwrap).collect()
}

pub fn deterministic_reply(prompt: &str) -> String {
    let h = hex::encode(Sha256::digest(prompt.as_bytes()));
    format!("{{'{}': 1.0}}", &h[..8])
}

pub fn config(stub: &StubServer, cache: &Path) -> EndpointConfig {
    EndpointConfig {
        base_url: stub.base_url.clone(),
        model: "stub-model".into(),
        requests_per_minute: 60_000,
        cache_dir: cache.to_path_buf(),
        width: 2,
        backoff_base_ms: 1,
        backoff_max_ms: 5,
        ..EndpointConfig::default()
    }
}

pub fn opts() -> QueryOptions {
    QueryOptions {
        model_tag: "stub".into(),
        train_range: Some("3-6".into()),
    }
}

pub fn run(cfg: &EndpointConfig, recs: &[PromptRecord]) -> (Vec<u8>, QueryReport) {
    let client = ChatClient::new(cfg).unwrap();
    let mut out = Vec::new();
    let report = query_model(recs.iter().cloned().map(Ok), &client, &opts(), &mut out).unwrap();
    (out, report)
}

/// A run cut off by an auth failure resumes from the cache to the bytes of an uninterrupted run.
pub fn interrupted_run_resumes_to_the_same_file() {
    let healthy = Arc::new(AtomicBool::new(true));
    let flag = healthy.clone();
    let stub = StubServer::start(move |req, _| {
        if flag.load(Ordering::SeqCst) {
            StubResponse::reply(&deterministic_reply(&req.prompt()))
        } else {
            StubResponse::status(401)
        }
    });
    let recs = records();

    let clean_dir = tempfile::tempdir().unwrap();
    let (uninterrupted, _) = run(&config(&stub, clean_dir.path()), &recs);

    let dir = tempfile::tempdir().unwrap();
    let cfg = EndpointConfig {
        width: 1,
        ..config(&stub, dir.path())
    };
    let before = stub.request_count();
    {
        let client = ChatClient::new(&cfg).unwrap();
        let mut partial = Vec::new();
        let half = recs[..3].iter().cloned().map(Ok);
        query_model(half, &client, &opts(), &mut partial).unwrap();
        healthy.store(false, Ordering::SeqCst);
        let rest = recs.iter().cloned().map(Ok);
        assert!(query_model(rest, &client, &opts(), &mut partial).is_err());
    }
    healthy.store(true, Ordering::SeqCst);
    let (resumed, report) = run(&cfg, &recs);
    assert_eq!(resumed, uninterrupted);
    assert_eq!(report.stats.cache_hits, 3);
    assert_eq!(stub.request_count() - before, 3 + 1 + (recs.len() - 3));
}

/// Replies are nondeterministic but the cache keeps the first one per request.
pub fn cache_never_holds_two_replies_for_one_request() {
    let stub = StubServer::start(|_, n| StubResponse::reply(&format!("{{'000': {}}}", n % 2)));
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&stub, dir.path());
    let recs = records();
    let (first, _) = run(&cfg, &recs);
    let (second, _) = run(&cfg, &recs);
    assert_eq!(first, second);
    let cache = ReplyCache::open(dir.path()).unwrap();
    assert_eq!(cache.len(), recs.len());
}
