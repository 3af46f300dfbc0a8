//! Command-line front end. Every subcommand prints one JSON document on
//! stdout. Exit codes: 0 success, 1 input or usage error, 2 verification
//! failure (the report is still printed).

mod corpus_cmd;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cayley::{laplacian_spectrum, sparsify_cayley, verify_spectrum};
use crate::code::{verify_sparsifier, CoordinateWeights, Sparsifier, SparsifierJson, VerificationReport};
use crate::counting::{check_counting_bound, contract, DecompositionStep};
use crate::csp::{sparsify_affine_csp, ternary_classify, verify_csp_sparsifier, Predicate, TernaryClassification};
use crate::error::{Error, Result};
use crate::graphs::{graph_sparsify_appendix, sparsify_graph_via_code, verify_cut_sparsifier};
use crate::hypergraphs::{hypergraph_decomposition, sparsify_hypergraph, verify_hypergraph_sparsifier};
use crate::io;
use crate::numeric::{decimal_string, format_rational, parse_rational, Rational};
use crate::sparsify::{final_code_sparsify, SparsifyParams};

pub use corpus_cmd::CorpusArgs;

/// Digits in decimal renderings of rationals.
const DECIMAL_DIGITS: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "codesparse", version, about = "Sparsify linear codes, graphs, hypergraphs, Cayley graphs and affine CSPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sparsify a weighted code.
    SparsifyCode(SparsifyCodeArgs),
    /// Sparsify the cuts of an unweighted graph.
    SparsifyGraph(SparsifyGraphArgs),
    /// Sparsify the cuts of a hypergraph.
    SparsifyHypergraph(SparsifyHypergraphArgs),
    /// Sparsify the generator set of a Cayley graph over F_2^k.
    SparsifyCayley(SparsifyCayleyArgs),
    /// Sparsify an affine CSP instance.
    SparsifyCsp(SparsifyCspArgs),
    /// Classify a ternary predicate given by its truth table.
    ClassifyPredicate(ClassifyArgs),
    /// Check the codeword counting bound.
    CountBound(CountBoundArgs),
    /// Contract random coordinates down to `alpha` columns.
    Contract(ContractArgs),
    /// Split off small cuts of a hypergraph and count the remaining cuts.
    DecomposeHypergraph(DecomposeHypergraphArgs),
    /// Laplacian spectrum of a Cayley graph.
    Spectrum(SpectrumArgs),
    /// Write a deterministic fixture file.
    GenCorpus(CorpusArgs),
    /// Check a sparsifier against a code.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Rational,
    #[arg(long)]
    seed: u64,
    /// Overrides the default sample-budget constant.
    #[arg(long, value_parser = parse_rational_arg)]
    eta: Option<Rational>,
    /// Small demonstration constants that sample desk-scale inputs.
    #[arg(long)]
    aggressive: bool,
    /// Exhaustively verify the output; exit 2 if it fails.
    #[arg(long)]
    verify: bool,
    /// Also write the sparsified instance to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; JSON is the only one.
    #[arg(long, default_value = "json", value_parser = ["json"])]
    format: String,
}

impl Common {
    fn params(&self) -> Result<SparsifyParams> {
        let mut p = if self.aggressive {
            SparsifyParams::aggressive(self.epsilon.clone(), self.seed)?
        } else {
            SparsifyParams::new(self.epsilon.clone(), self.seed)?
        };
        if let Some(eta) = &self.eta {
            p = p.with_eta(eta.clone())?;
        }
        Ok(p)
    }
}

#[derive(Debug, Args)]
struct SparsifyCodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Whitespace-separated weights, optionally after the word `weights`.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SparsifyGraphArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Route through the cut code and the code pipeline.
    #[arg(long)]
    via_code: bool,
    /// Constant `C` in the peeling threshold `C log n n^(1/2^i)`.
    #[arg(long = "c", value_parser = parse_rational_arg)]
    c_override: Option<Rational>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SparsifyHypergraphArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SparsifyCayleyArgs {
    #[arg(long)]
    cayley: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SparsifyCspArgs {
    #[arg(long)]
    csp: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Eight characters, most significant entry first.
    #[arg(long)]
    table: String,
}

#[derive(Debug, Args)]
struct CountBoundArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    d: u64,
}

#[derive(Debug, Args)]
struct ContractArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DecomposeHypergraphArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    #[arg(long)]
    d: u64,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    cayley: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Sparsifier JSON with `coords` and `weights`.
    #[arg(long)]
    sparsifier: PathBuf,
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Rational,
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s)
}

/// Runs the command line `argv` (including the program name) with the
/// process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let start = Instant::now();
    match execute(cli.command, out) {
        Ok(Outcome { report, verified }) => {
            if let Some(mut report) = report {
                report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"));
            }
            if verified == Some(false) {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Outcome {
    report: Option<Value>,
    /// `None` when nothing was verified.
    verified: Option<bool>,
}

/// Fixed fields shared by every report.
struct Report {
    command: &'static str,
    digest: Sha256,
    seed: Option<u64>,
    epsilon: Option<Rational>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Self { command, digest: Sha256::new(), seed: None, epsilon: None }
    }

    /// Reads a file and folds its bytes into the input digest.
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.digest.update(text.as_bytes());
        Ok(text)
    }

    fn finish(self, sizes: Value, verification: Option<&VerificationReport>, result: Value) -> Outcome {
        let report = json!({
            "command": self.command,
            "input_digest": format!("sha256:{}", hex::encode(self.digest.finalize())),
            "seed": self.seed,
            "epsilon": self.epsilon.as_ref().map(format_rational),
            "sizes": sizes,
            "verification": verification.map(verification_json),
            "result": result,
        });
        Outcome { report: Some(report), verified: verification.map(|v| v.pass) }
    }
}

/// Wraps a parse error with the file it came from.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::Parse { line, column, message: format!("{}: {message}", path.display()) }
        }
        other => other,
    })
}

pub fn verification_json(v: &VerificationReport) -> Value {
    json!({
        "pass": v.pass,
        "epsilon": format_rational(&v.epsilon),
        "max_relative_error": format_rational(&v.max_relative_error),
        "max_relative_error_decimal": decimal_string(&v.max_relative_error, DECIMAL_DIGITS),
        "checked": v.checked,
        "witness": v.witness.as_ref().map(|w| json!({
            "message": w.message,
            "exact": format_rational(&w.exact),
            "approx": format_rational(&w.approx),
        })),
    })
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = path {
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn sizes(input: usize, output: usize, unit: &str) -> Value {
    json!({ "input": input, "output": output, "unit": unit })
}

fn parse_weights_file(text: &str, path: &Path) -> Result<CoordinateWeights> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        for (j, tok) in content.split_whitespace().enumerate() {
            if values.is_empty() && j == 0 && tok == "weights" {
                continue;
            }
            let column = content.find(tok).unwrap_or(0) + 1;
            let w = parse_rational(tok).map_err(|message| Error::Parse {
                line: i + 1,
                column,
                message: format!("{}: {message}", path.display()),
            })?;
            values.push(w);
        }
    }
    CoordinateWeights::new(values)
}

fn load_code(report: &mut Report, code: &Path, weights: &Option<PathBuf>) -> Result<(crate::code::GeneratorMatrix, CoordinateWeights)> {
    let text = report.read(code)?;
    let (g, inline) = in_file(code, io::parse_code(&text))?;
    let w = match weights {
        Some(path) => {
            let text = report.read(path)?;
            parse_weights_file(&text, path)?
        }
        None => inline.unwrap_or_else(|| CoordinateWeights::unit(g.n())),
    };
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: w.len() });
    }
    Ok((g, w))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::SparsifyCode(a) => {
            let mut report = Report::new("sparsify-code");
            let (g, w) = load_code(&mut report, &a.code, &a.weights)?;
            report.seed = Some(a.common.seed);
            report.epsilon = Some(a.common.epsilon.clone());
            let sp = final_code_sparsify(&g, &w, &a.common.params()?)?;
            let json = serde_json::to_string(&sp.to_json()).expect("serializable");
            write_output(&a.common.output, &json)?;
            let v = if a.common.verify { Some(verify_sparsifier(&g, &w, &sp, &a.common.epsilon)?) } else { None };
            Ok(report.finish(sizes(g.n(), sp.len(), "coordinates"), v.as_ref(), json!({ "sparsifier": sp.to_json() })))
        }
        Command::SparsifyGraph(a) => {
            let mut report = Report::new("sparsify-graph");
            let text = report.read(&a.graph)?;
            let g = in_file(&a.graph, io::parse_graph(&text))?;
            report.seed = Some(a.common.seed);
            report.epsilon = Some(a.common.epsilon.clone());
            let h = if a.via_code {
                sparsify_graph_via_code(&g, &a.common.params()?)?
            } else {
                graph_sparsify_appendix(&g, &a.common.epsilon, a.common.seed, a.c_override.as_ref())?
            };
            let rendered = io::render_graph(&h);
            write_output(&a.common.output, &rendered)?;
            let v = if a.common.verify { Some(verify_cut_sparsifier(&g, &h, &a.common.epsilon)?) } else { None };
            let method = if a.via_code { "cut-code" } else { "recursive-peeling" };
            Ok(report.finish(sizes(g.m(), h.m(), "edges"), v.as_ref(), json!({ "method": method, "graph": rendered })))
        }
        Command::SparsifyHypergraph(a) => {
            let mut report = Report::new("sparsify-hypergraph");
            let text = report.read(&a.hypergraph)?;
            let h = in_file(&a.hypergraph, io::parse_hypergraph(&text))?;
            report.seed = Some(a.common.seed);
            report.epsilon = Some(a.common.epsilon.clone());
            let s = sparsify_hypergraph(&h, &a.common.params()?)?;
            let rendered = io::render_hypergraph(&s);
            write_output(&a.common.output, &rendered)?;
            let v =
                if a.common.verify { Some(verify_hypergraph_sparsifier(&h, &s, &a.common.epsilon)?) } else { None };
            Ok(report.finish(sizes(h.m(), s.m(), "hyperedges"), v.as_ref(), json!({ "hypergraph": rendered })))
        }
        Command::SparsifyCayley(a) => {
            let mut report = Report::new("sparsify-cayley");
            let text = report.read(&a.cayley)?;
            let spec = in_file(&a.cayley, io::parse_cayley(&text))?;
            report.seed = Some(a.common.seed);
            report.epsilon = Some(a.common.epsilon.clone());
            let s = sparsify_cayley(&spec, &a.common.params()?)?;
            let rendered = io::render_cayley(&s);
            write_output(&a.common.output, &rendered)?;
            let v = if a.common.verify { Some(verify_spectrum(&spec, &s, &a.common.epsilon)?) } else { None };
            Ok(report.finish(sizes(spec.len(), s.len(), "generators"), v.as_ref(), json!({ "cayley": rendered })))
        }
        Command::SparsifyCsp(a) => {
            let mut report = Report::new("sparsify-csp");
            let text = report.read(&a.csp)?;
            let inst = in_file(&a.csp, io::parse_csp(&text))?;
            report.seed = Some(a.common.seed);
            report.epsilon = Some(a.common.epsilon.clone());
            let s = sparsify_affine_csp(&inst, &a.common.params()?)?;
            let rendered = io::render_csp(&s);
            write_output(&a.common.output, &rendered)?;
            let v = if a.common.verify { Some(verify_csp_sparsifier(&inst, &s, &a.common.epsilon)?) } else { None };
            Ok(report.finish(sizes(inst.len(), s.len(), "constraints"), v.as_ref(), json!({ "csp": rendered })))
        }
        Command::ClassifyPredicate(a) => {
            let mut report = Report::new("classify-predicate");
            report.digest.update(a.table.as_bytes());
            let p = Predicate::from_table_str(&a.table)?;
            let result = match ternary_classify(&p)? {
                TernaryClassification::SparsifiableLinear(rep) => json!({
                    "table": p.to_table_str(),
                    "satisfying": p.satisfying_count(),
                    "verdict": "sparsifiable_linear",
                    "p": rep.modulus(),
                    "coefficients": rep.coefficients(),
                }),
                TernaryClassification::RequiresQuadratic(pi) => json!({
                    "table": p.to_table_str(),
                    "satisfying": p.satisfying_count(),
                    "verdict": "requires_quadratic",
                    "projection": pi.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            };
            let mut outcome = report.finish(Value::Null, None, result.clone());
            if let Some(r) = outcome.report.as_mut() {
                r["verdict"] = result["verdict"].clone();
            }
            Ok(outcome)
        }
        Command::CountBound(a) => {
            let mut report = Report::new("count-bound");
            let text = report.read(&a.code)?;
            let (g, _) = in_file(&a.code, io::parse_code(&text))?;
            let r = check_counting_bound(&g, a.d)?;
            let per_alpha: Vec<Value> = r
                .per_alpha
                .iter()
                .map(|x| json!({ "alpha": x.alpha, "count": x.count, "bound": x.bound.to_string(), "pass": x.pass }))
                .collect();
            let result = json!({ "d": a.d, "pass": r.pass(), "per_alpha": per_alpha });
            Ok(report.finish(json!({ "n": g.n(), "k": g.k() }), None, result))
        }
        Command::Contract(a) => {
            let mut report = Report::new("contract");
            let text = report.read(&a.code)?;
            let (g, _) = in_file(&a.code, io::parse_code(&text))?;
            report.seed = Some(a.seed);
            let trace = contract(&g, a.alpha, a.seed);
            let result = json!({
                "chosen_coordinates": trace.chosen_coordinates,
                "final_columns": trace.final_matrix.k(),
                "final_rank": trace.final_matrix.rank(),
                "final_code": io::render_code(&trace.final_matrix, None),
            });
            Ok(report.finish(json!({ "input": g.k(), "output": trace.final_matrix.k(), "unit": "columns" }), None, result))
        }
        Command::DecomposeHypergraph(a) => {
            let mut report = Report::new("decompose-hypergraph");
            let text = report.read(&a.hypergraph)?;
            let h = in_file(&a.hypergraph, io::parse_hypergraph(&text))?;
            let dec = hypergraph_decomposition(&h, a.d)?;
            let per_alpha: Vec<Value> = dec
                .report
                .per_alpha
                .iter()
                .map(|(alpha, count, bound)| json!({ "alpha": alpha, "count": count, "bound": bound.to_string() }))
                .collect();
            let steps: Vec<Value> = dec.steps.iter().map(step_json).collect();
            let result = json!({
                "d": a.d,
                "removed": dec.removed,
                "removed_bound": h.n() as u64 * a.d,
                "pass": dec.report.pass(),
                "per_alpha": per_alpha,
                "steps": steps,
                "residual": io::render_hypergraph(&dec.residual),
            });
            Ok(report.finish(sizes(h.m(), dec.residual.m(), "hyperedges"), None, result))
        }
        Command::Spectrum(a) => {
            let mut report = Report::new("spectrum");
            let text = report.read(&a.cayley)?;
            let spec = in_file(&a.cayley, io::parse_cayley(&text))?;
            let spectrum = laplacian_spectrum(&spec)?;
            let eigenvalues: Vec<String> = spectrum.iter().map(format_rational).collect();
            let result = json!({ "k": spec.k(), "eigenvalues": eigenvalues });
            Ok(report.finish(json!({ "generators": spec.len(), "characters": spectrum.len() }), None, result))
        }
        Command::GenCorpus(a) => corpus_cmd::generate(&a, out).map(|report| Outcome { report, verified: None }),
        Command::Verify(a) => {
            let mut report = Report::new("verify");
            let (g, w) = load_code(&mut report, &a.code, &a.weights)?;
            let text = report.read(&a.sparsifier)?;
            let json: SparsifierJson = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: format!("{}: {e}", a.sparsifier.display()) })?;
            let sp = Sparsifier::from_json(&json)?;
            report.epsilon = Some(a.epsilon.clone());
            let v = verify_sparsifier(&g, &w, &sp, &a.epsilon)?;
            Ok(report.finish(sizes(g.n(), sp.len(), "coordinates"), Some(&v), Value::Null))
        }
    }
}

fn step_json(step: &DecompositionStep) -> Value {
    match step {
        DecompositionStep::Peel { support, weight } => json!({ "kind": "peel", "support": support, "weight": weight }),
        DecompositionStep::DenseSubcode { support, dim, density } => {
            json!({ "kind": "dense_subcode", "support": support, "dim": dim, "density": format_rational(density) })
        }
        DecompositionStep::Escalation { support, weight } => {
            json!({ "kind": "escalation", "support": support, "weight": weight })
        }
    }
}
