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

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{BundleSpec, QubitRange, Variant};
use super::corpus::{HashingWriter, PromptRecord};
use crate::error::{Error, Result};

/// Identity used for leakage checks between train and test.
pub fn record_key(rec: &PromptRecord) -> String {
    let marked: Vec<String> = rec.instance.marked_bitstrings();
    format!("{}|{}|{}", rec.n_qubits(), marked.join(","), rec.variant)
}

fn routes_to_test(key: &str, fraction: f64) -> bool {
    let digest = Sha256::digest(key.as_bytes());
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    let u = (u64::from_be_bytes(head) >> 11) as f64 / (1u64 << 53) as f64;
    u < fraction
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub train_records: usize,
    pub test_records: usize,
    /// Records whose size lies in neither range.
    pub dropped: usize,
    /// Overlapping-size records held out of train so their key stays test-only.
    pub excluded_from_train: usize,
    /// Overlapping-size records held out of test so their key stays train-only.
    pub excluded_from_test: usize,
    /// Number of (instance, variant) keys present in both outputs. Always zero.
    pub key_intersection: usize,
}

/// Routes records into train and test streams.
///
/// Sizes in exactly one range go to that side. Sizes in both ranges are
/// partitioned by a hash of the (instance, variant) key, so a key lands in
/// test with probability `overlap_test_fraction` and never on both sides.
pub fn split_corpus<I, A, B>(
    records: I,
    train_range: QubitRange,
    test_range: QubitRange,
    overlap_test_fraction: f64,
    mut train: A,
    mut test: B,
) -> Result<SplitReport>
where
    I: IntoIterator<Item = Result<PromptRecord>>,
    A: Write,
    B: Write,
{
    let mut report = SplitReport::default();
    let mut train_keys = HashSet::new();
    let mut test_keys = HashSet::new();
    for rec in records {
        let rec = rec?;
        let n = rec.n_qubits();
        let key = record_key(&rec);
        let to_test = match (train_range.contains(n), test_range.contains(n)) {
            (true, false) => false,
            (false, true) => true,
            (false, false) => {
                report.dropped += 1;
                continue;
            }
            (true, true) => {
                let t = routes_to_test(&key, overlap_test_fraction);
                if t {
                    report.excluded_from_train += 1;
                } else {
                    report.excluded_from_test += 1;
                }
                t
            }
        };
        let mut line = serde_json::to_vec(&rec)?;
        line.push(b'\n');
        if to_test {
            test.write_all(&line)?;
            report.test_records += 1;
            test_keys.insert(key);
        } else {
            train.write_all(&line)?;
            report.train_records += 1;
            train_keys.insert(key);
        }
    }
    train.flush()?;
    test.flush()?;
    report.key_intersection = train_keys.intersection(&test_keys).count();
    if report.key_intersection != 0 {
        return Err(Error::Eval(format!(
            "{} keys leaked across the split",
            report.key_intersection
        )));
    }
    Ok(report)
}

/// Streams corpus records from a JSONL reader, skipping blank lines.
pub fn read_records<R: BufRead>(reader: R) -> impl Iterator<Item = Result<PromptRecord>> {
    read_records_as(reader)
}

/// Streams any JSONL line type.
pub fn read_records_as<T: DeserializeOwned, R: BufRead>(reader: R) -> impl Iterator<Item = Result<T>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some(serde_json::from_str(&l).map_err(|e| Error::Parse {
            statement: i + 1,
            line: i + 1,
            message: e.to_string(),
        })),
    })
}

pub fn open_records(path: &Path) -> Result<impl Iterator<Item = Result<PromptRecord>>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(read_records(BufReader::new(f)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub path: PathBuf,
    pub records: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub name: String,
    pub master_seed: u64,
    pub train_range: QubitRange,
    pub test_range: QubitRange,
    pub overlap_test_fraction: f64,
    pub variants: Vec<Variant>,
    pub files: Vec<ManifestFile>,
    pub split: SplitReport,
}

/// Writes `<dir>/<name>/{train,test}.jsonl` and `manifest.json` for one bundle.
pub fn write_bundle(
    corpus: &Path,
    spec: &BundleSpec,
    master_seed: u64,
    overlap_test_fraction: f64,
    dir: &Path,
) -> Result<BundleManifest> {
    let out = dir.join(&spec.name);
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let train_path = out.join("train.jsonl");
    let test_path = out.join("test.jsonl");
    let create = |p: &Path| -> Result<HashingWriter<BufWriter<File>>> {
        let f = File::create(p).map_err(|e| Error::io(p, e))?;
        Ok(HashingWriter::new(BufWriter::new(f)))
    };
    let mut train = create(&train_path)?;
    let mut test = create(&test_path)?;
    let mut variants = HashSet::new();
    let records = open_records(corpus)?.inspect(|r| {
        if let Ok(r) = r {
            variants.insert(r.variant);
        }
    });
    let report = split_corpus(
        records,
        spec.train_range,
        spec.test_range,
        overlap_test_fraction,
        &mut train,
        &mut test,
    )?;
    let (_, train_sha, _) = train.finish();
    let (_, test_sha, _) = test.finish();
    let mut variants: Vec<Variant> = variants.into_iter().collect();
    variants.sort();
    let manifest = BundleManifest {
        name: spec.name.clone(),
        master_seed,
        train_range: spec.train_range,
        test_range: spec.test_range,
        overlap_test_fraction,
        variants,
        files: vec![
            ManifestFile {
                path: PathBuf::from("train.jsonl"),
                records: report.train_records,
                sha256: train_sha,
            },
            ManifestFile {
                path: PathBuf::from("test.jsonl"),
                records: report.test_records,
                sha256: test_sha,
            },
        ],
        split: report,
    };
    let mpath = out.join("manifest.json");
    std::fs::write(&mpath, serde_json::to_vec_pretty(&manifest)?).map_err(|e| Error::io(&mpath, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_corpus, write_corpus, CorpusConfig};

    fn keys(bytes: &[u8]) -> HashSet<String> {
        read_records(bytes).map(|r| record_key(&r.unwrap())).collect()
    }

    #[test]
    fn overlapping_ranges_never_share_keys() {
        let cfg = CorpusConfig::uniform(QubitRange::new(3, 7).unwrap(), 30);
        let mut train = Vec::new();
        let mut test = Vec::new();
        let r = split_corpus(
            generate_corpus(&cfg).unwrap(),
            QubitRange::new(3, 6).unwrap(),
            QubitRange::new(5, 7).unwrap(),
            0.5,
            &mut train,
            &mut test,
        )
        .unwrap();
        assert_eq!(r.train_records + r.test_records + r.dropped, 150);
        assert!(r.excluded_from_test > 0 && r.excluded_from_train > 0);
        assert!(keys(&train).is_disjoint(&keys(&test)));
    }

    #[test]
    fn disjoint_ranges_split_by_size() {
        let cfg = CorpusConfig::uniform(QubitRange::new(3, 5).unwrap(), 10);
        let r = split_corpus(
            generate_corpus(&cfg).unwrap(),
            QubitRange::new(3, 3).unwrap(),
            QubitRange::new(5, 5).unwrap(),
            0.5,
            std::io::sink(),
            std::io::sink(),
        )
        .unwrap();
        assert_eq!((r.train_records, r.test_records, r.dropped), (10, 10, 10));
    }

    #[test]
    fn bundle_manifest_hashes_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CorpusConfig::uniform(QubitRange::new(3, 6).unwrap(), 8);
        let corpus = dir.path().join("corpus.jsonl");
        write_corpus(&cfg, File::create(&corpus).unwrap()).unwrap();
        let spec = BundleSpec {
            name: "b1".into(),
            train_range: QubitRange::new(3, 5).unwrap(),
            test_range: QubitRange::new(5, 6).unwrap(),
        };
        let m = write_bundle(&corpus, &spec, cfg.master_seed, 0.5, dir.path()).unwrap();
        let bytes = std::fs::read(dir.path().join("b1/test.jsonl")).unwrap();
        assert_eq!(m.files[1].sha256, hex::encode(Sha256::digest(&bytes)));
        assert_eq!(m.split.key_intersection, 0);
        assert!(dir.path().join("b1/manifest.json").exists());
    }
}
