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

//! Command-line entry point.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analytic::analytic_distribution;
use crate::client::{query_model, ChatClient, EndpointConfig, QueryOptions};
use crate::dataset::{
    build_answer, format_answer, open_records, write_bundle, write_corpus, CorpusConfig, QubitRange, Shots,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate_bundle, write_plot_data, write_report, EvalOptions, EvalResult, PredictionInput};
use crate::grover::{build_circuit, optimal_iterations, GroverInstance};
use crate::qasm::{
    compress_simplified, emit_full_listing, emit_prompt_flat, emit_simplified, expand_simplified, parse_qasm,
    QasmDocument, QasmStyle,
};
use crate::statevector::{run_circuit, sample_shots};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_AUTH: i32 = 77;
pub const EXIT_CONFIG: i32 = 78;

#[derive(Debug, Parser)]
#[command(
    name = "grover-bench",
    version,
    about = "Grover-search ground truth, QASM prompt corpora, and scoring of predicted distributions",
    after_help = "Exit codes: 0 ok, 1 runtime failure, 64 usage, 65 bad input data, 66 missing input, \
                  77 endpoint auth rejected, 78 invalid config.\n\
                  Environment: RUST_LOG sets log verbosity; the endpoint token is read from the variable \
                  named by `token_env` in the endpoint config."
)]
struct Cli {
    /// Seed for anything random (corpus master seed, shot sampling).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config file (YAML, or JSON by extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the prompt/answer corpus as JSONL.
    Generate(GenerateArgs),
    /// Exact or sampled output distribution of one Grover instance.
    Simulate(SimulateArgs),
    /// Emit, compress, expand, or parse QASM text.
    #[command(subcommand)]
    Qasm(QasmCommand),
    /// Score predictions against a corpus.
    Evaluate(EvaluateArgs),
    /// Collect predictions from a chat-completion endpoint.
    QueryModel(QueryArgs),
    /// Turn an evaluation report into plot CSVs.
    Plotdata(PlotArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Override the qubit range, e.g. 3-8.
    #[arg(long)]
    qubits: Option<QubitRange>,
    /// Records per qubit size (replaces the configured counts).
    #[arg(long)]
    per_size: Option<usize>,
    /// Shot count, or "exact".
    #[arg(long)]
    shots: Option<String>,
    /// Cross-check against the state-vector engine up to this many qubits.
    #[arg(long)]
    validate_up_to: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Analytic,
    Statevector,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Number of qubits; defaults to the length of the marked strings.
    #[arg(long)]
    qubits: Option<usize>,
    /// Marked bitstrings, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    marked: Vec<String>,
    /// Grover iterations; defaults to the optimal count.
    #[arg(long)]
    iterations: Option<usize>,
}

impl InstanceArgs {
    fn instance(&self) -> Result<GroverInstance> {
        let n = match self.qubits {
            Some(n) => n,
            None => self.marked[0].len(),
        };
        GroverInstance::from_bitstrings(n, &self.marked)
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Sample this many shots instead of exact probabilities.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 30)]
    top_k: usize,
    #[arg(long)]
    json: bool,
    #[arg(long, value_enum, default_value_t = Engine::Analytic)]
    engine: Engine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    Full,
    Flat,
    Simplified,
}

#[derive(Debug, Subcommand)]
enum QasmCommand {
    /// Print the circuit for an instance.
    Emit {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = StyleArg::Flat)]
        style: StyleArg,
    },
    /// Flat prompt QASM to Simplified-QASM.
    Compress { input: Option<PathBuf> },
    /// Simplified-QASM to flat prompt QASM.
    Expand { input: Option<PathBuf> },
    /// Parse any style and print a JSON summary.
    Parse { input: Option<PathBuf> },
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    predictions: PathBuf,
    /// Train-range tag for predictions that carry none.
    #[arg(long)]
    train_range: Option<String>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    model_tag: String,
    #[arg(long)]
    train_range: Option<String>,
    /// Only the first N records.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// report.json written by `evaluate`.
    #[arg(long)]
    report: PathBuf,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInstance(_) | Error::InvalidGate(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Parse { .. } | Error::Json(_) => EXIT_DATA,
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => EXIT_NO_INPUT,
        Error::Config(_) => EXIT_CONFIG,
        Error::Auth { .. } => EXIT_AUTH,
        _ => EXIT_RUNTIME,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInstance(_) => "invalid_instance",
        Error::InvalidGate(_) => "invalid_gate",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Resource { .. } => "resource",
        Error::Parse { .. } => "parse",
        Error::Config(_) => "config",
        Error::Io { .. } | Error::IoBare(_) => "io",
        Error::Json(_) => "json",
        Error::Eval(_) => "eval",
        Error::Auth { .. } => "auth",
        Error::Endpoint(_) => "endpoint",
    }
}

fn error_line(kind: &str, message: &str, code: i32) -> String {
    json!({"error": kind, "message": message, "exit_code": code}).to_string()
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run_cli`] with explicit output streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "{}", error_line("usage", first, EXIT_USAGE));
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "{}", error_line(error_kind(&e), &e.to_string(), code));
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a, out),
        Command::Simulate(a) => simulate(cli, a, out),
        Command::Qasm(q) => qasm(cli, q, out),
        Command::Evaluate(a) => evaluate(cli, a, out),
        Command::QueryModel(a) => query(cli, a, out),
        Command::Plotdata(a) => plotdata(cli, a, out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ))
    }
}

fn emit_to(cli: &Cli, out: &mut dyn Write, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn generate(cli: &Cli, a: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => {
            require_file(p)?;
            CorpusConfig::load(p)?
        }
        None => CorpusConfig::default(),
    };
    if let Some(r) = a.qubits {
        cfg.qubit_range = r;
        let per = a.per_size.unwrap_or(cfg.counts.values().copied().max().unwrap_or(1));
        cfg.counts = r.iter().map(|n| (n, per)).collect();
    } else if let Some(per) = a.per_size {
        cfg.counts = cfg.qubit_range.iter().map(|n| (n, per)).collect();
    }
    if let Some(s) = &a.shots {
        cfg.shots = serde_json::from_value(match s.parse::<u64>() {
            Ok(n) => json!(n),
            Err(_) => json!(s),
        })
        .map_err(|e| Error::InvalidArgument(format!("--shots: {e}")))?;
    }
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if a.validate_up_to.is_some() {
        cfg.validate_max_qubits = a.validate_up_to;
    }
    cfg.validate()?;

    match &cli.out {
        None => {
            let summary = write_corpus(&cfg, &mut *out)?;
            log::info!("{} records, sha256 {}", summary.records, summary.sha256);
        }
        Some(path) => {
            let summary = write_corpus(&cfg, create(path)?)?;
            for w in &summary.warnings {
                log::warn!("{w}");
            }
            let dir = path.parent().unwrap_or(Path::new("."));
            let bundles = cfg
                .bundles
                .iter()
                .map(|b| {
                    write_bundle(
                        path,
                        b,
                        cfg.master_seed,
                        cfg.overlap_test_fraction,
                        &dir.join("bundles"),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let report = json!({"corpus": path, "summary": summary, "bundles": bundles});
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
    }
    Ok(())
}

fn simulate(cli: &Cli, a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let inst = a.instance.instance()?;
    let iterations = match a.instance.iterations {
        Some(k) => k,
        None => optimal_iterations(inst.n_qubits(), inst.marked_count())?,
    };
    let exact = match a.engine {
        Engine::Analytic => analytic_distribution(&inst, Some(iterations))?,
        Engine::Statevector => run_circuit(&build_circuit(&inst, Some(iterations))?)?.probabilities(),
    };
    let dist = match a.shots {
        Some(s) => sample_shots(&exact, s, cli.seed.unwrap_or(0))?,
        None => exact,
    };
    let entries = build_answer(&dist, a.top_k);
    let answer = format_answer(&entries);
    let text = if a.json {
        let v = json!({
            "instance": inst,
            "iterations": iterations,
            "engine": format!("{:?}", a.engine).to_lowercase(),
            "shots": a.shots.map(Shots::Count).unwrap_or(Shots::Exact),
            "top": entries,
            "answer": answer,
            "distribution": dist,
        });
        format!("{}\n", serde_json::to_string_pretty(&v)?)
    } else {
        format!("{answer}\n")
    };
    emit_to(cli, out, &text)
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    let mut s = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            require_file(p)?;
            s = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut s)?;
        }
    }
    Ok(s.trim_end_matches(['\n', '\r']).to_string())
}

fn qasm(cli: &Cli, q: &QasmCommand, out: &mut dyn Write) -> Result<()> {
    let text = match q {
        QasmCommand::Emit { instance, style } => {
            let inst = instance.instance()?;
            let c = build_circuit(&inst, instance.iterations)?;
            let doc = match style {
                StyleArg::Full => emit_full_listing(&c, &inst),
                StyleArg::Flat => emit_prompt_flat(&c),
                StyleArg::Simplified => emit_simplified(&c),
            };
            let mut t = doc.text;
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
        QasmCommand::Compress { input } => {
            let doc = QasmDocument::new(QasmStyle::PromptFlat, read_input(input)?, 0);
            format!("{}\n", compress_simplified(&doc)?.text)
        }
        QasmCommand::Expand { input } => {
            let doc = QasmDocument::new(QasmStyle::Simplified, read_input(input)?, 0);
            format!("{}\n", expand_simplified(&doc)?.text)
        }
        QasmCommand::Parse { input } => {
            let text = read_input(input)?;
            let style = if text.contains("OPENQASM") {
                QasmStyle::FullListing
            } else {
                QasmStyle::PromptFlat
            };
            let parsed = parse_qasm(&QasmDocument::new(style, text, 0))?;
            let c = &parsed.circuit;
            let mut counts = std::collections::BTreeMap::new();
            for op in &c.ops {
                *counts.entry(op.kind.mnemonic()).or_insert(0usize) += 1;
            }
            let v = json!({
                "n_qubits": c.n_qubits,
                "iterations": c.iterations,
                "gates": c.ops.len(),
                "gate_counts": counts,
                "meta": parsed.meta,
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
    };
    emit_to(cli, out, &text)
}

fn evaluate(cli: &Cli, a: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.corpus)?;
    require_file(&a.predictions)?;
    let preds_file = File::open(&a.predictions).map_err(|e| Error::io(&a.predictions, e))?;
    let preds = crate::dataset::read_records_as::<PredictionInput, _>(BufReader::new(preds_file));
    let opts = EvalOptions {
        default_train_range: a.train_range.clone(),
    };
    let result = evaluate_bundle(preds, open_records(&a.corpus)?, &opts)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("eval-report"));
    let mut files = write_report(&result, &dir)?;
    files.extend(write_plot_data(&result, &dir)?);
    let summary = json!({
        "records": result.records.len(),
        "failure_rate": result.failure_rate,
        "unmatched_predictions": result.unmatched_predictions.len(),
        "truth_fallbacks": result.truth_fallbacks,
        "files": files,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn query(cli: &Cli, a: &QueryArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => {
            require_file(p)?;
            EndpointConfig::load(p)?
        }
        None => {
            return Err(Error::InvalidArgument(
                "query-model needs --config <endpoint config>".into(),
            ))
        }
    };
    require_file(&a.corpus)?;
    let dest = cli
        .out
        .clone()
        .ok_or_else(|| Error::InvalidArgument("query-model needs --out <predictions.jsonl>".into()))?;
    let client = ChatClient::new(&cfg)?;
    let opts = QueryOptions {
        model_tag: a.model_tag.clone(),
        train_range: a.train_range.clone(),
    };
    let records = open_records(&a.corpus)?.take(a.limit.unwrap_or(usize::MAX));
    let result = query_model(records, &client, &opts, create(&dest)?);
    let log_path = with_suffix(&dest, ".log.jsonl");
    let events = match &result {
        Ok(r) => r.events.clone(),
        Err(_) => client.take_events(),
    };
    let mut log = create(&log_path)?;
    for e in &events {
        writeln!(log, "{}", serde_json::to_string(e)?)?;
    }
    log.flush()?;
    let report = result?;
    let summary = json!({
        "predictions": dest,
        "log": log_path,
        "records": report.records,
        "ok": report.ok,
        "failed": report.failed,
        "requests": report.stats.requests,
        "retries": report.stats.retries,
        "cache_hits": report.stats.cache_hits,
    });
    std::fs::write(with_suffix(&dest, ".report.json"), serde_json::to_vec_pretty(&summary)?)
        .map_err(|e| Error::io(&dest, e))?;
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn plotdata(cli: &Cli, a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.report)?;
    let bytes = std::fs::read(&a.report).map_err(|e| Error::io(&a.report, e))?;
    let result: EvalResult = serde_json::from_slice(&bytes)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("plotdata"));
    let files = write_plot_data(&result, &dir)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&json!({"files": files}))?)?;
    Ok(())
}
