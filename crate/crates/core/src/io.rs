//! Plain-text file formats for codes, graphs, hypergraphs, Cayley specs and
//! CSP instances. Blank lines and `#` comments are ignored. Every parse
//! error carries a 1-based line and column.

use std::fmt::Write as _;

use num_traits::One;

use crate::cayley::{CayleySpec, Generator, MAX_DIMENSION};
use crate::code::{CoordinateWeights, GeneratorMatrix};
use crate::csp::{AffinePredicate, Constraint, ConstraintPredicate, CspInstance, Predicate};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graphs::{Edge, Graph};
use crate::hypergraphs::{Hyperedge, Hypergraph};
use crate::numeric::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Token<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn number<T: std::str::FromStr>(&self, what: &str) -> Result<T> {
        self.text.parse().map_err(|_| self.error(format!("expected {what}, found {:?}", self.text)))
    }

    fn rational(&self) -> Result<Rational> {
        parse_rational(self.text).map_err(|m| self.error(m))
    }

    fn keyword(&self, word: &str) -> Result<()> {
        if self.text == word {
            Ok(())
        } else {
            Err(self.error(format!("expected {word:?}, found {:?}", self.text)))
        }
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last character, for "missing token" errors.
    end: usize,
}

impl<'a> Line<'a> {
    fn get(&self, i: usize, what: &str) -> Result<Token<'a>> {
        self.tokens.get(i).copied().ok_or_else(|| Error::Parse {
            line: self.number,
            column: self.end,
            message: format!("missing {what}"),
        })
    }

    fn expect_len(&self, len: usize) -> Result<()> {
        match self.tokens.get(len) {
            Some(extra) => Err(extra.error(format!("unexpected token {:?}", extra.text))),
            None if self.tokens.len() < len => {
                Err(Error::Parse { line: self.number, column: self.end, message: format!("expected {len} fields") })
            }
            None => Ok(()),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.number, column: 1, message: message.into() }
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..pos], line: i + 1, column: s + 1 });
                    start = None;
                }
                (false, None) => start = Some(pos),
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens, end: content.trim_end().len() + 1 });
        }
    }
    out
}

fn end_of_input(lines: &[Line<'_>], what: &str) -> Error {
    let line = lines.last().map_or(1, |l| l.number + 1);
    Error::Parse { line, column: 1, message: format!("unexpected end of input: missing {what}") }
}

/// Lines after the header, checked to be exactly `count` long (plus `extra`
/// optional trailing lines).
fn body<'a, 'b>(all: &'b [Line<'a>], count: usize, extra: usize, what: &str) -> Result<&'b [Line<'a>]> {
    let rest = &all[1..];
    if rest.len() < count {
        return Err(end_of_input(all, what));
    }
    if rest.len() > count + extra {
        let line = &rest[count + extra];
        return Err(line.error("unexpected trailing line"));
    }
    Ok(rest)
}

fn header<'a, 'b>(all: &'b [Line<'a>], keyword: &str) -> Result<&'b Line<'a>> {
    let first = all.first().ok_or_else(|| Error::Parse { line: 1, column: 1, message: format!("empty input, expected {keyword:?} header") })?;
    first.get(0, "header")?.keyword(keyword)?;
    Ok(first)
}

fn weight_suffix(token: &Token<'_>) -> Option<Result<Rational>> {
    token.text.strip_prefix("w=").map(|w| parse_rational(w).map_err(|m| token.error(m)))
}

fn positive(token: &Token<'_>, value: Rational) -> Result<Rational> {
    if value > Rational::from_integer(0.into()) {
        Ok(value)
    } else {
        Err(token.error("weights must be positive"))
    }
}

/// `code <p> <n> <k>`, `n` rows of `k` entries, optional `weights ...` line.
pub fn parse_code(text: &str) -> Result<(GeneratorMatrix, Option<CoordinateWeights>)> {
    let all = lines(text);
    let head = header(&all, "code")?;
    head.expect_len(4)?;
    let p_tok = head.get(1, "modulus")?;
    let p: u64 = p_tok.number("a prime")?;
    let field = PrimeField::new(p).map_err(|e| p_tok.error(e.to_string()))?;
    let n: usize = head.get(2, "row count")?.number("a row count")?;
    let k: usize = head.get(3, "column count")?.number("a column count")?;
    let rows = body(&all, n, 1, "matrix rows")?;
    let mut entries = Vec::with_capacity(n * k);
    for line in &rows[..n] {
        line.expect_len(k)?;
        for tok in &line.tokens {
            let v: u64 = tok.number("a field element")?;
            if v >= p {
                return Err(tok.error(format!("entry {v} not in [0, {p})")));
            }
            entries.push(v as u32);
        }
    }
    let weights = match rows.get(n) {
        None => None,
        Some(line) => {
            line.get(0, "weights")?.keyword("weights")?;
            line.expect_len(n + 1)?;
            let values = line.tokens[1..]
                .iter()
                .map(|t| t.rational().and_then(|w| positive(t, w)))
                .collect::<Result<Vec<_>>>()?;
            Some(CoordinateWeights::new(values).map_err(|e| line.error(e.to_string()))?)
        }
    };
    let g = GeneratorMatrix::new(field, n, k, entries).map_err(|e| head.error(e.to_string()))?;
    Ok((g, weights))
}

pub fn render_code(g: &GeneratorMatrix, weights: Option<&CoordinateWeights>) -> String {
    let mut out = format!("code {} {} {}\n", g.field().modulus(), g.n(), g.k());
    for i in 0..g.n() {
        let row: Vec<String> = g.row(i).iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if let Some(w) = weights {
        out.push_str("weights");
        for v in w.values() {
            let _ = write!(out, " {}", format_rational(v));
        }
        out.push('\n');
    }
    out
}

/// `graph <n> <m>`, then `m` lines `u v [weight]`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let all = lines(text);
    let head = header(&all, "graph")?;
    head.expect_len(3)?;
    let n: usize = head.get(1, "vertex count")?.number("a vertex count")?;
    let m: usize = head.get(2, "edge count")?.number("an edge count")?;
    let rows = body(&all, m, 0, "edges")?;
    let mut edges = Vec::with_capacity(m);
    for line in rows {
        if line.tokens.len() != 2 {
            line.expect_len(3)?;
        }
        let vertex = |i: usize| -> Result<usize> {
            let tok = line.get(i, "vertex")?;
            let v: usize = tok.number("a vertex index")?;
            if v >= n {
                return Err(tok.error(format!("vertex {v} out of range (n = {n})")));
            }
            Ok(v)
        };
        let (u, v) = (vertex(0)?, vertex(1)?);
        if u == v {
            return Err(line.tokens[1].error("self-loop"));
        }
        let weight = match line.tokens.get(2) {
            Some(t) => positive(t, t.rational()?)?,
            None => Rational::one(),
        };
        edges.push(Edge { u, v, weight });
    }
    Graph::new(n, edges).map_err(|e| head.error(e.to_string()))
}

pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.m());
    for e in g.edges() {
        if e.weight.is_one() {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        } else {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, format_rational(&e.weight));
        }
    }
    out
}

/// `hypergraph <n> <m>`, then `m` lines of vertices with optional `w=...`.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let all = lines(text);
    let head = header(&all, "hypergraph")?;
    head.expect_len(3)?;
    let n: usize = head.get(1, "vertex count")?.number("a vertex count")?;
    let m: usize = head.get(2, "hyperedge count")?.number("a hyperedge count")?;
    let rows = body(&all, m, 0, "hyperedges")?;
    let mut edges = Vec::with_capacity(m);
    for line in rows {
        let mut vertices = Vec::new();
        let mut weight = Rational::one();
        for (i, tok) in line.tokens.iter().enumerate() {
            if let Some(w) = weight_suffix(tok) {
                if i + 1 != line.tokens.len() {
                    return Err(tok.error("the weight must come last"));
                }
                weight = positive(tok, w?)?;
                continue;
            }
            let v: usize = tok.number("a vertex index")?;
            if v >= n {
                return Err(tok.error(format!("vertex {v} out of range (n = {n})")));
            }
            if vertices.contains(&v) {
                return Err(tok.error(format!("vertex {v} repeated")));
            }
            vertices.push(v);
        }
        if vertices.len() < 2 {
            return Err(line.error("a hyperedge needs at least two vertices"));
        }
        edges.push(Hyperedge { vertices, weight });
    }
    Hypergraph::new(n, edges).map_err(|e| head.error(e.to_string()))
}

pub fn render_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("hypergraph {} {}\n", h.n(), h.m());
    for e in h.edges() {
        let vs: Vec<String> = e.vertices.iter().map(usize::to_string).collect();
        out.push_str(&vs.join(" "));
        if !e.weight.is_one() {
            let _ = write!(out, " w={}", format_rational(&e.weight));
        }
        out.push('\n');
    }
    out
}

/// `cayley <k> <m>`, then `m` lines of a `k`-bit string (character `j` is
/// coordinate `j`) and an optional weight.
pub fn parse_cayley(text: &str) -> Result<CayleySpec> {
    let all = lines(text);
    let head = header(&all, "cayley")?;
    head.expect_len(3)?;
    let k_tok = head.get(1, "dimension")?;
    let k: usize = k_tok.number("a dimension")?;
    if k == 0 || k > MAX_DIMENSION {
        return Err(k_tok.error(format!("dimension must lie in 1..={MAX_DIMENSION}")));
    }
    let m: usize = head.get(2, "generator count")?.number("a generator count")?;
    let rows = body(&all, m, 0, "generators")?;
    let mut generators: Vec<Generator> = Vec::with_capacity(m);
    for line in rows {
        if line.tokens.len() != 1 {
            line.expect_len(2)?;
        }
        let bits = line.get(0, "bit string")?;
        if bits.text.len() != k || !bits.text.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(bits.error(format!("expected a {k}-bit string, found {:?}", bits.text)));
        }
        let vector = bits.text.bytes().enumerate().fold(0u64, |acc, (j, b)| acc | (((b - b'0') as u64) << j));
        if vector == 0 {
            return Err(bits.error("generators must be nonzero"));
        }
        if generators.iter().any(|g| g.vector == vector) {
            return Err(bits.error("generator repeated"));
        }
        let weight = match line.tokens.get(1) {
            Some(t) => positive(t, t.rational()?)?,
            None => Rational::one(),
        };
        generators.push(Generator { vector, weight });
    }
    CayleySpec::new(k, generators).map_err(|e| head.error(e.to_string()))
}

pub fn render_cayley(spec: &CayleySpec) -> String {
    let mut out = format!("cayley {} {}\n", spec.k(), spec.len());
    for g in spec.generators() {
        let bits: String = (0..spec.k()).map(|j| if (g.vector >> j) & 1 == 1 { '1' } else { '0' }).collect();
        out.push_str(&bits);
        if !g.weight.is_one() {
            let _ = write!(out, " {}", format_rational(&g.weight));
        }
        out.push('\n');
    }
    out
}

/// `csp <p|-> <k> <m>`, then `m` constraint lines, either
/// `affine p a0 .. ar : i1 .. ir [w=...]` or `table r BITS : i1 .. ir [w=...]`.
/// A numeric header prime must match every affine constraint.
pub fn parse_csp(text: &str) -> Result<CspInstance> {
    let all = lines(text);
    let head = header(&all, "csp")?;
    head.expect_len(4)?;
    let p_tok = head.get(1, "prime or '-'")?;
    let header_p: Option<u64> = if p_tok.text == "-" { None } else { Some(p_tok.number("a prime or '-'")?) };
    let k: usize = head.get(2, "variable count")?.number("a variable count")?;
    let m: usize = head.get(3, "constraint count")?.number("a constraint count")?;
    let rows = body(&all, m, 0, "constraints")?;
    let mut constraints = Vec::with_capacity(m);
    for line in rows {
        let colon = line
            .tokens
            .iter()
            .position(|t| t.text == ":")
            .ok_or_else(|| Error::Parse { line: line.number, column: line.end, message: "missing ':'".into() })?;
        let kind = line.get(0, "constraint kind")?;
        let predicate = match kind.text {
            "affine" => {
                let p_tok = line.get(1, "prime")?;
                let p: u64 = p_tok.number("a prime")?;
                if let Some(hp) = header_p {
                    if hp != p {
                        return Err(p_tok.error(format!("prime {p} differs from header prime {hp}")));
                    }
                }
                if colon < 3 {
                    return Err(line.tokens[colon].error("missing constant coefficient"));
                }
                let coeffs = line.tokens[2..colon]
                    .iter()
                    .map(|t| t.number::<u64>("a coefficient"))
                    .collect::<Result<Vec<_>>>()?;
                let a = AffinePredicate::new(p, &coeffs).map_err(|e| p_tok.error(e.to_string()))?;
                ConstraintPredicate::Affine(a)
            }
            "table" => {
                let r_tok = line.get(1, "arity")?;
                let r: usize = r_tok.number("an arity")?;
                let bits = line.get(2, "truth table")?;
                if colon != 3 {
                    return Err(line.tokens[colon.min(3)].error("expected ':' after the truth table"));
                }
                let table = Predicate::from_table_str(bits.text).map_err(|e| bits.error(e.to_string()))?;
                if table.arity() != r {
                    return Err(bits.error(format!("table has arity {}, header says {r}", table.arity())));
                }
                ConstraintPredicate::Table(table)
            }
            other => return Err(kind.error(format!("expected \"affine\" or \"table\", found {other:?}"))),
        };
        let mut variables = Vec::new();
        let mut weight = Rational::one();
        let rest = &line.tokens[colon + 1..];
        for (i, tok) in rest.iter().enumerate() {
            if let Some(w) = weight_suffix(tok) {
                if i + 1 != rest.len() {
                    return Err(tok.error("the weight must come last"));
                }
                weight = positive(tok, w?)?;
                continue;
            }
            let v: usize = tok.number("a variable index")?;
            if v >= k {
                return Err(tok.error(format!("variable {v} out of range (k = {k})")));
            }
            variables.push(v);
        }
        if variables.len() != predicate.arity() {
            return Err(Error::Parse {
                line: line.number,
                column: line.tokens[colon].column,
                message: format!("expected {} variables, found {}", predicate.arity(), variables.len()),
            });
        }
        constraints.push(Constraint { predicate, variables, weight });
    }
    CspInstance::new(k, constraints).map_err(|e| head.error(e.to_string()))
}

pub fn render_csp(instance: &CspInstance) -> String {
    let p = instance.affine_modulus().ok().flatten().map_or("-".to_string(), |p| p.to_string());
    let mut out = format!("csp {} {} {}\n", p, instance.k(), instance.len());
    for c in instance.constraints() {
        match &c.predicate {
            ConstraintPredicate::Affine(a) => {
                let _ = write!(out, "affine {}", a.modulus());
                for x in a.coefficients() {
                    let _ = write!(out, " {x}");
                }
            }
            ConstraintPredicate::Table(t) => {
                let _ = write!(out, "table {} {}", t.arity(), t.to_table_str());
            }
        }
        out.push_str(" :");
        for v in &c.variables {
            let _ = write!(out, " {v}");
        }
        if !c.weight.is_one() {
            let _ = write!(out, " w={}", format_rational(&c.weight));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn position(err: Error) -> (usize, usize) {
        match err {
            Error::Parse { line, column, .. } => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn code_round_trip() {
        let g = GeneratorMatrix::hamming74();
        let w = CoordinateWeights::new((1..=7).map(|i| rat(i, 3)).collect()).unwrap();
        let text = render_code(&g, Some(&w));
        assert_eq!(parse_code(&text).unwrap(), (g.clone(), Some(w)));
        assert_eq!(parse_code(&render_code(&g, None)).unwrap(), (g, None));
    }

    #[test]
    fn code_diagnostics() {
        assert_eq!(position(parse_code("code 2 2 2\n1 0\n0 2\n").unwrap_err()), (3, 3));
        assert_eq!(position(parse_code("code 4 1 1\n1\n").unwrap_err()), (1, 6));
        assert_eq!(position(parse_code("code 2 2 2\n1 0\n").unwrap_err()), (3, 1));
        assert_eq!(position(parse_code("code 2 1 2\n1 0 1\n").unwrap_err()), (2, 5));
        assert_eq!(position(parse_code("# comment\n\ncode 3 1 1\nx\n").unwrap_err()), (4, 1));
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::new(
            3,
            vec![Edge { u: 0, v: 1, weight: rat(1, 1) }, Edge { u: 1, v: 2, weight: rat(5, 2) }],
        )
        .unwrap();
        assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g);
        assert_eq!(position(parse_graph("graph 3 1\n0 3\n").unwrap_err()), (2, 3));
    }

    #[test]
    fn hypergraph_round_trip() {
        let h = Hypergraph::new(
            5,
            vec![
                Hyperedge { vertices: vec![0, 2, 4], weight: rat(1, 1) },
                Hyperedge { vertices: vec![1, 3], weight: rat(7, 3) },
            ],
        )
        .unwrap();
        assert_eq!(parse_hypergraph(&render_hypergraph(&h)).unwrap(), h);
        assert_eq!(position(parse_hypergraph("hypergraph 3 1\n0 w=2 1\n").unwrap_err()), (2, 3));
    }

    #[test]
    fn cayley_round_trip() {
        let spec = CayleySpec::new(
            3,
            vec![Generator { vector: 0b001, weight: rat(1, 1) }, Generator { vector: 0b110, weight: rat(3, 4) }],
        )
        .unwrap();
        let text = render_cayley(&spec);
        assert!(text.contains("100\n"));
        assert_eq!(parse_cayley(&text).unwrap(), spec);
        assert_eq!(position(parse_cayley("cayley 3 1\n10\n").unwrap_err()), (2, 1));
    }

    #[test]
    fn csp_round_trip() {
        let text = "csp - 4 2\naffine 3 1 2 1 : 0 3 w=5/2\ntable 3 11111110 : 1 2 3\n";
        let inst = parse_csp(text).unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(render_csp(&inst), text);
        assert_eq!(parse_csp(&render_csp(&inst)).unwrap(), inst);
        let affine = CspInstance::xor2_complete(4);
        assert!(render_csp(&affine).starts_with("csp 2 4 6\n"));
        assert_eq!(parse_csp(&render_csp(&affine)).unwrap(), affine);
        assert_eq!(position(parse_csp("csp 2 3 1\naffine 3 0 1 : 0\n").unwrap_err()), (2, 8));
        assert_eq!(position(parse_csp("csp - 3 1\naffine 2 0 1 1 : 0\n").unwrap_err()), (2, 16));
    }
}
