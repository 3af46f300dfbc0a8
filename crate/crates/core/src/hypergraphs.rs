//! Hypergraph cuts as codewords over a prime field of size at least the
//! vertex count, with sparsification, decomposition and cut counting.

use std::collections::HashSet;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::code::{compare_weightings, for_each_codeword, CoordinateWeights, Enumeration, GeneratorMatrix, VerificationReport};
use crate::counting::{code_decomposition_with, DecompositionOptions, DecompositionStep};
use crate::error::{Error, Result};
use crate::field::{smallest_prime_at_least, PrimeField};
use crate::numeric::Rational;
use crate::sparsify::{final_code_sparsify, SparsifyParams};

/// A weighted hyperedge; `vertices` is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Vertex lists are sorted and deduplicated; each needs two distinct members.
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let mut clean = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.vertices.sort_unstable();
            e.vertices.dedup();
            if let Some(&v) = e.vertices.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, bound: n });
            }
            if e.vertices.len() < 2 {
                return Err(Error::InvalidParameter("hyperedges need at least two vertices".into()));
            }
            if !e.weight.is_positive() {
                return Err(Error::InvalidParameter("hyperedge weights must be positive".into()));
            }
            clean.push(e);
        }
        Ok(Self { n, edges: clean })
    }

    pub fn unweighted(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        Self::new(n, sets.iter().map(|s| Hyperedge { vertices: s.clone(), weight: Rational::one() }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Total weight of hyperedges with members on both sides.
    pub fn cut_value(&self, side: &[bool]) -> Rational {
        self.edges
            .iter()
            .filter(|e| is_cut(e, side))
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// Field size used by [`hypergraph_code`].
    pub fn modulus(&self) -> u32 {
        smallest_prime_at_least(self.n.max(2) as u64) as u32
    }

    fn select(&self, ids: &[usize]) -> Self {
        Self { n: self.n, edges: ids.iter().map(|&i| self.edges[i].clone()).collect() }
    }
}

fn is_cut(e: &Hyperedge, side: &[bool]) -> bool {
    let first = side[e.vertices[0]];
    e.vertices.iter().any(|&v| side[v] != first)
}

/// Row for one hyperedge: 1 on every member but the largest, which gets
/// `q - |e| + 1`, so the row sums to zero mod `q`.
pub fn hyperedge_row(vertices: &[usize], n: usize, q: u32) -> Result<Vec<u32>> {
    let size = vertices.len();
    if size as u64 > q as u64 {
        return Err(Error::HyperedgeTooLarge { size, q });
    }
    let mut row = vec![0u32; n];
    let (&last, rest) = vertices.split_last().ok_or(Error::EmptyCode)?;
    for &v in rest {
        row[v] = 1;
    }
    row[last] = (q as u64 - size as u64 + 1) as u32 % q;
    Ok(row)
}

/// Code over F_q, `q` the smallest prime at least the vertex count, whose
/// codeword at `1_S` has support exactly the hyperedges cut by `S`.
pub fn hypergraph_code(h: &Hypergraph) -> Result<(GeneratorMatrix, u32)> {
    let q = h.modulus();
    let field = PrimeField::new(q as u64)?;
    let mut entries = Vec::with_capacity(h.m() * h.n());
    for e in &h.edges {
        entries.extend(hyperedge_row(&e.vertices, h.n(), q)?);
    }
    Ok((GeneratorMatrix::new(field, h.m(), h.n(), entries)?, q))
}

fn weights_of(h: &Hypergraph) -> CoordinateWeights {
    CoordinateWeights::new(h.edges.iter().map(|e| e.weight.clone()).collect()).expect("positive")
}

/// Full message space when it fits the budget, otherwise 0/1 vertex indicators.
fn scope_for(code: &GeneratorMatrix) -> Enumeration {
    let full = Enumeration::default();
    if full.message_count(code).is_ok() {
        full
    } else {
        Enumeration::boolean()
    }
}

/// Weighted sub-hypergraph preserving every cut within `1 +- eps`.
pub fn sparsify_hypergraph(h: &Hypergraph, params: &SparsifyParams) -> Result<Hypergraph> {
    if h.n() < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    if h.m() == 0 {
        return Ok(h.clone());
    }
    let (code, _) = hypergraph_code(h)?;
    let params = params.clone().with_scope(scope_for(&code));
    let sp = final_code_sparsify(&code, &weights_of(h), &params)?;
    let edges = sp
        .coords()
        .iter()
        .zip(sp.weights())
        .map(|(&i, w)| Hyperedge { vertices: h.edges[i].vertices.clone(), weight: w.clone() })
        .collect();
    Ok(Hypergraph { n: h.n(), edges })
}

/// Exhaustive cut check over vertex subsets avoiding the last vertex.
pub fn verify_hypergraph_sparsifier(h: &Hypergraph, sparse: &Hypergraph, epsilon: &Rational) -> Result<VerificationReport> {
    if h.n() != sparse.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: sparse.n() });
    }
    if h.n() < 2 {
        return Err(Error::InvalidParameter("cut verification needs two vertices".into()));
    }
    let both = Hypergraph { n: h.n(), edges: h.edges.iter().chain(&sparse.edges).cloned().collect() };
    let (code, _) = hypergraph_code(&both)?;
    let free: Vec<usize> = (0..h.n() - 1).collect();
    let code = code.select_columns(&free);
    let zeros = |g: &Hypergraph| g.edges.iter().map(|_| Rational::zero()).collect::<Vec<_>>();
    let weights = |g: &Hypergraph| g.edges.iter().map(|e| e.weight.clone()).collect::<Vec<_>>();
    let exact: Vec<Rational> = weights(h).into_iter().chain(zeros(sparse)).collect();
    let approx: Vec<Rational> = zeros(h).into_iter().chain(weights(sparse)).collect();
    let mut report = compare_weightings(&code, &exact, &approx, epsilon, &Enumeration::boolean())?;
    if let Some(w) = report.witness.as_mut() {
        w.message.push(0);
    }
    Ok(report)
}

/// Distinct cut edge-sets of size at most `alpha * d` against `(2n)^(2 alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCountReport {
    pub d: u64,
    /// `(alpha, count, bound)` for `alpha = 1..=n`.
    pub per_alpha: Vec<(usize, u64, BigUint)>,
}

impl CutCountReport {
    pub fn pass(&self) -> bool {
        self.per_alpha.iter().all(|(_, count, bound)| BigUint::from(*count) <= *bound)
    }
}

/// Sizes of the distinct nonempty cut edge-sets of `h` (unit weights).
pub fn distinct_cut_sizes(h: &Hypergraph) -> Result<Vec<u64>> {
    if h.n() < 2 {
        return Ok(Vec::new());
    }
    let (code, _) = hypergraph_code(h)?;
    let free: Vec<usize> = (0..h.n() - 1).collect();
    let code = code.select_columns(&free);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for_each_codeword(&code, &Enumeration::boolean(), |_, cw| {
        let support: Vec<usize> = (0..cw.len()).filter(|&i| cw[i] != 0).collect();
        if !support.is_empty() {
            seen.insert(support);
        }
        ControlFlow::Continue(())
    })?;
    let mut sizes: Vec<u64> = seen.into_iter().map(|s| s.len() as u64).collect();
    sizes.sort_unstable();
    Ok(sizes)
}

pub fn cut_count_report(h: &Hypergraph, d: u64) -> Result<CutCountReport> {
    let sizes = distinct_cut_sizes(h)?;
    let two_n = BigUint::from(2 * h.n() as u64);
    let per_alpha = (1..=h.n().max(1))
        .map(|alpha| {
            let limit = alpha as u64 * d;
            let count = sizes.partition_point(|&s| s <= limit) as u64;
            (alpha, count, two_n.pow(2 * alpha as u32))
        })
        .collect();
    Ok(CutCountReport { d, per_alpha })
}

/// Removed hyperedges, the residual hypergraph, and its cut counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphDecomposition {
    /// Indices into the input's hyperedge list.
    pub removed: Vec<usize>,
    pub residual: Hypergraph,
    pub report: CutCountReport,
    pub steps: Vec<DecompositionStep>,
}

/// Code decomposition of the hypergraph code over cut indicators.
/// Hyperedge weights are ignored.
pub fn hypergraph_decomposition(h: &Hypergraph, d: u64) -> Result<HypergraphDecomposition> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let (code, _) = hypergraph_code(h)?;
    let options = DecompositionOptions { scope: Enumeration::boolean(), ..DecompositionOptions::default() };
    let dec = code_decomposition_with(&code, d, &options)?;
    let kept: Vec<usize> = (0..h.m()).filter(|i| dec.removed.binary_search(i).is_err()).collect();
    let residual = h.select(&kept);
    let report = cut_count_report(&residual, d)?;
    Ok(HypergraphDecomposition { removed: dec.removed, residual, report, steps: dec.steps })
}
