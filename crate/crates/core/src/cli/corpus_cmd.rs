//! `gen-corpus`: deterministic fixture files.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cayley::CayleySpec;
use crate::code::GeneratorMatrix;
use crate::corpus;
use crate::csp::CspInstance;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graphs::Graph;
use crate::io;
use crate::numeric::{parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Code,
    Redundancy,
    Hamming,
    Repetition,
    Identity,
    Simplex,
    Graph,
    Hypergraph,
    Cayley,
    Csp,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(value_enum)]
    kind: CorpusKind,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Edge probability for `gnp`.
    #[arg(long, value_parser = parse_rational)]
    p: Option<Rational>,
    /// Graph model (`gnp`, `complete`, `cycle`) or Cayley model (`simplex`, `random`).
    #[arg(long)]
    model: Option<String>,
    /// CSP family: `xor2-complete` or `random-xor`.
    #[arg(long = "kind")]
    family: Option<String>,
    #[arg(long)]
    arity: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    max_weight: Option<u64>,
    /// Attach weights spanning six decades to a random code.
    #[arg(long)]
    spanning_weights: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the fixture here and print a JSON summary; otherwise print the fixture.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this corpus kind")))
}

fn seed(a: &CorpusArgs) -> Result<u64> {
    need(a.seed, "seed")
}

fn render(a: &CorpusArgs) -> Result<String> {
    let field = |q| PrimeField::new(q);
    Ok(match a.kind {
        CorpusKind::Code => {
            let (q, k, n) = (need(a.q, "q")?, need(a.k, "k")?, need(a.n, "n")?);
            let s = seed(a)?;
            let g = corpus::random_code(q, k, n, s)?;
            let w = a.spanning_weights.then(|| corpus::spanning_weights(n, crate::rng::derive_seed(s, 1)));
            io::render_code(&g, w.as_ref())
        }
        CorpusKind::Redundancy => {
            let g = corpus::redundancy_code(a.q.unwrap_or(2), need(a.k, "k")?, need(a.n, "n")?, seed(a)?)?;
            io::render_code(&g, None)
        }
        CorpusKind::Hamming => io::render_code(&GeneratorMatrix::hamming74(), None),
        CorpusKind::Repetition => io::render_code(&GeneratorMatrix::repetition(field(a.q.unwrap_or(2))?, need(a.n, "n")?), None),
        CorpusKind::Identity => io::render_code(&GeneratorMatrix::identity(field(a.q.unwrap_or(2))?, need(a.k, "k")?), None),
        CorpusKind::Simplex => io::render_code(&GeneratorMatrix::simplex(need(a.k, "k")?), None),
        CorpusKind::Graph => {
            let n = need(a.n, "n")?;
            let g = match a.model.as_deref().unwrap_or("gnp") {
                "gnp" => {
                    let p = a.p.clone().ok_or_else(|| Error::InvalidParameter("--p is required for gnp".into()))?;
                    corpus::gnp(n, &p, seed(a)?)?
                }
                "complete" => Graph::complete(n),
                "cycle" => Graph::cycle(n),
                other => return Err(Error::InvalidParameter(format!("unknown graph model {other:?}"))),
            };
            io::render_graph(&g)
        }
        CorpusKind::Hypergraph => {
            let h = corpus::random_hypergraph(need(a.n, "n")?, need(a.m, "m")?, a.max_size.unwrap_or(4), seed(a)?)?;
            io::render_hypergraph(&h)
        }
        CorpusKind::Cayley => {
            let k = need(a.k, "k")?;
            let spec = match a.model.as_deref().unwrap_or("random") {
                "simplex" => CayleySpec::complete(k)?,
                "random" => corpus::random_cayley(k, need(a.m, "m")?, a.max_weight.unwrap_or(1), seed(a)?)?,
                other => return Err(Error::InvalidParameter(format!("unknown cayley model {other:?}"))),
            };
            io::render_cayley(&spec)
        }
        CorpusKind::Csp => {
            let k = need(a.k, "k")?;
            let inst = match a.family.as_deref().unwrap_or("xor2-complete") {
                "xor2-complete" => CspInstance::xor2_complete(k),
                "random-xor" => corpus::random_xor_csp(k, need(a.m, "m")?, a.arity.unwrap_or(3), seed(a)?)?,
                other => return Err(Error::InvalidParameter(format!("unknown csp family {other:?}"))),
            };
            io::render_csp(&inst)
        }
    })
}

/// The JSON summary, or `None` when the fixture itself went to `out`.
pub(super) fn generate(a: &CorpusArgs, out: &mut dyn Write) -> Result<Option<Value>> {
    let text = render(a)?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())));
    match &a.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(json!({
                "command": "gen-corpus",
                "kind": format!("{:?}", a.kind).to_lowercase(),
                "seed": a.seed,
                "output": path.display().to_string(),
                "output_digest": digest,
                "bytes": text.len(),
            })))
        }
        None => {
            out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
            Ok(None)
        }
    }
}
