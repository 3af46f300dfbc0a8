//! Graph cuts as codewords of the binary cut code, Stoer–Wagner peeling,
//! a standalone recursive cut sparsifier, and exhaustive cut verification.

mod mincut;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};
use rand::Rng as _;

use crate::code::{compare_weightings, for_each_codeword, CoordinateWeights, Enumeration, GeneratorMatrix, VerificationReport};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::numeric::{int, log2_clamped, loglog2_clamped, sqrt_dyadic, to_f64, Rational};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sparsify::{final_code_sparsify, SparsifyParams};

pub use mincut::stoer_wagner;

/// An undirected edge with a positive weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Undirected graph, possibly with parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::IndexOutOfRange { index: e.u.max(e.v), bound: n });
            }
            if e.u == e.v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {}", e.u)));
            }
            if !e.weight.is_positive() {
                return Err(Error::InvalidParameter("edge weights must be positive".into()));
            }
        }
        Ok(Self { n, edges })
    }

    /// Unit-weight graph from endpoint pairs.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(u, v)| Edge { u, v, weight: Rational::one() }).collect())
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::unweighted(n, &pairs).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::unweighted(n, &pairs).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).map(|u| (u - 1, u)).collect();
        Self::unweighted(n, &pairs).expect("valid")
    }

    /// The `k`-dimensional hypercube graph.
    pub fn hypercube(k: usize) -> Self {
        let n = 1 << k;
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..k).map(move |b| (u, u ^ (1 << b))).filter(|(u, v)| u < v)).collect();
        Self::unweighted(n, &pairs).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_one())
    }

    /// No parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    /// Total weight of edges with exactly one endpoint in `side`.
    pub fn cut_value(&self, side: &[bool]) -> Rational {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// Parallel edges merged by adding weights, sorted by endpoints.
    pub fn merged(&self) -> Self {
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for e in &self.edges {
            *acc.entry((e.u.min(e.v), e.u.max(e.v))).or_insert_with(Rational::zero) += &e.weight;
        }
        let edges = acc.into_iter().map(|((u, v), weight)| Edge { u, v, weight }).collect();
        Self { n: self.n, edges }
    }

    fn subgraph(&self, edge_ids: &[usize]) -> Self {
        Self { n: self.n, edges: edge_ids.iter().map(|&i| self.edges[i].clone()).collect() }
    }

    /// Minimum cut of a connected graph with at least two vertices, as
    /// (value, one side). Edge weights must be integers.
    pub fn min_cut(&self) -> Option<(u64, Vec<bool>)> {
        let weights: Vec<u64> = self.edges.iter().map(|e| integer_weight(&e.weight)).collect::<Option<_>>()?;
        let mut adj = vec![vec![0u64; self.n]; self.n];
        for (e, w) in self.edges.iter().zip(weights) {
            adj[e.u][e.v] += w;
            adj[e.v][e.u] += w;
        }
        stoer_wagner(&adj)
    }

    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }
}

fn integer_weight(w: &Rational) -> Option<u64> {
    if w.is_integer() {
        num_traits::ToPrimitive::to_u64(w.numer())
    } else {
        None
    }
}

/// Binary code with one row per edge and ones at both endpoints;
/// `wt(G 1_S)` is the cut size of `S`.
pub fn cut_code(g: &Graph) -> (GeneratorMatrix, CoordinateWeights) {
    let field = PrimeField::new(2).expect("2 is prime");
    let mut entries = vec![0u32; g.m() * g.n()];
    for (i, e) in g.edges.iter().enumerate() {
        entries[i * g.n() + e.u] = 1;
        entries[i * g.n() + e.v] = 1;
    }
    let matrix = GeneratorMatrix::new(field, g.m(), g.n(), entries).expect("sizes agree");
    let weights = CoordinateWeights::new(g.edges.iter().map(|e| e.weight.clone()).collect()).expect("positive");
    (matrix, weights)
}

/// Edges removed by [`peel_small_cuts`] and what remains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelResult {
    /// Indices into the input's edge list.
    pub removed: Vec<usize>,
    pub residual: Graph,
    /// Indices into the input's edge list of the residual edges.
    pub residual_edges: Vec<usize>,
}

/// Repeatedly removes a minimum cut of some component while its size is at
/// most `threshold`. Edges count with multiplicity; weights are ignored.
pub fn peel_small_cuts(g: &Graph, threshold: &Rational) -> PeelResult {
    let mut alive = vec![true; g.m()];
    loop {
        let live: Vec<usize> = (0..g.m()).filter(|&i| alive[i]).collect();
        let current = g.subgraph(&live);
        let mut changed = false;
        for comp in current.components().into_iter().filter(|c| c.len() >= 2) {
            let mut local = vec![usize::MAX; g.n()];
            for (j, &v) in comp.iter().enumerate() {
                local[v] = j;
            }
            let mut adj = vec![vec![0u64; comp.len()]; comp.len()];
            for &i in &live {
                let e = &g.edges[i];
                if local[e.u] != usize::MAX {
                    adj[local[e.u]][local[e.v]] += 1;
                    adj[local[e.v]][local[e.u]] += 1;
                }
            }
            let Some((value, side)) = stoer_wagner(&adj) else {
                continue;
            };
            if int(value) > *threshold {
                continue;
            }
            for &i in &live {
                let e = &g.edges[i];
                if local[e.u] != usize::MAX && side[local[e.u]] != side[local[e.v]] {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let removed: Vec<usize> = (0..g.m()).filter(|&i| !alive[i]).collect();
    let residual_edges: Vec<usize> = (0..g.m()).filter(|&i| alive[i]).collect();
    PeelResult { removed, residual: g.subgraph(&residual_edges), residual_edges }
}

/// Recursive cut sparsifier for unweighted graphs.
///
/// At level `i` (from 1) the graph is returned as is once `i >= loglog n` or
/// it has at most `n log n / eps^2` edges. Otherwise edges in cuts of size at
/// most `C log n * n^(1/2^i)` are peeled and kept, the rest are sampled with
/// probability `n^(-1/2^i)`, both parts recurse, and the sampled part is
/// scaled by `n^(1/2^i)`. `C` defaults to `100 / eps^2`.
pub fn graph_sparsify_appendix(
    g: &Graph,
    epsilon: &Rational,
    seed: u64,
    c_override: Option<&Rational>,
) -> Result<Graph> {
    if !g.is_unweighted() {
        return Err(Error::InvalidParameter("the recursive graph sparsifier takes unweighted graphs".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let n = int(g.n().max(2) as u64);
    let log_n = log2_clamped(&n)?;
    let c = match c_override {
        Some(c) => c.clone(),
        None => int(100) / (epsilon * epsilon),
    };
    let ctx = PeelSample {
        g,
        levels: loglog2_clamped(&n)?,
        edge_guard: &n * &log_n / (epsilon * epsilon),
        gamma: c * log_n,
        n,
    };
    let mut weights = vec![Rational::zero(); g.m()];
    let all: Vec<usize> = (0..g.m()).collect();
    ctx.recurse(&all, 1, seed, &Rational::one(), &mut weights);
    let edges = g
        .edges
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive())
        .map(|(e, weight)| Edge { u: e.u, v: e.v, weight })
        .collect();
    Ok(Graph { n: g.n(), edges }.merged())
}

struct PeelSample<'a> {
    g: &'a Graph,
    levels: Rational,
    edge_guard: Rational,
    gamma: Rational,
    n: Rational,
}

impl PeelSample<'_> {
    fn recurse(&self, ids: &[usize], level: u32, seed: u64, scale: &Rational, out: &mut [Rational]) {
        if ids.is_empty() {
            return;
        }
        if int(level as u64) >= self.levels || int(ids.len() as u64) <= self.edge_guard {
            for &i in ids {
                out[i] += scale;
            }
            return;
        }
        // n^(1/2^level) by repeated dyadic square roots
        let mut root = self.n.clone();
        for _ in 0..level {
            root = sqrt_dyadic(&root);
        }
        let sub = self.g.subgraph(ids);
        let peel = peel_small_cuts(&sub, &(&self.gamma * &root));
        let kept: Vec<usize> = peel.removed.iter().map(|&j| ids[j]).collect();
        self.recurse(&kept, level + 1, derive_seed(seed, 1), scale, out);
        let mut rng = rng_from_seed(derive_seed(seed, 3));
        let rate = to_f64(&(Rational::one() / &root));
        let sampled: Vec<usize> = peel
            .residual_edges
            .iter()
            .map(|&j| ids[j])
            .filter(|_| rng.random::<f64>() < rate)
            .collect();
        self.recurse(&sampled, level + 1, derive_seed(seed, 2), &(scale * root), out);
    }
}

/// Exhaustive check of `(1-eps) cut_G(S) <= cut_H(S) <= (1+eps) cut_G(S)`
/// over all vertex subsets `S` avoiding the last vertex.
pub fn verify_cut_sparsifier(g: &Graph, h: &Graph, epsilon: &Rational) -> Result<VerificationReport> {
    if g.n() != h.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: h.n() });
    }
    if g.n() < 2 {
        return Err(Error::InvalidParameter("cut verification needs two vertices".into()));
    }
    let both = Graph { n: g.n(), edges: g.edges.iter().chain(&h.edges).cloned().collect() };
    let (code, _) = cut_code(&both);
    let free: Vec<usize> = (0..g.n() - 1).collect();
    let code = code.select_columns(&free);
    let exact: Vec<Rational> = g.edges.iter().map(|e| e.weight.clone()).chain(h.edges.iter().map(|_| Rational::zero())).collect();
    let approx: Vec<Rational> = g.edges.iter().map(|_| Rational::zero()).chain(h.edges.iter().map(|e| e.weight.clone())).collect();
    let mut report = compare_weightings(&code, &exact, &approx, epsilon, &Enumeration::boolean())?;
    if let Some(w) = report.witness.as_mut() {
        w.message.push(0);
    }
    Ok(report)
}

/// Number of distinct nonzero cut edge-sets of size at most `limit`.
pub fn count_cuts_at_most(g: &Graph, limit: u64) -> Result<u64> {
    let (code, _) = cut_code(g);
    let mut count = 0;
    for_each_codeword(&code, &Enumeration::default(), |_, cw| {
        let w = cw.iter().filter(|&&x| x != 0).count() as u64;
        if w > 0 && w <= limit {
            count += 1;
        }
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// Sparsifies through the cut code and the full code pipeline.
pub fn sparsify_graph_via_code(g: &Graph, params: &SparsifyParams) -> Result<Graph> {
    let (code, weights) = cut_code(g);
    let sp = final_code_sparsify(&code, &weights, params)?;
    let edges = sp
        .coords()
        .iter()
        .zip(sp.weights())
        .map(|(&i, w)| Edge { u: g.edges[i].u, v: g.edges[i].v, weight: w.clone() })
        .collect();
    Ok(Graph { n: g.n(), edges })
}
