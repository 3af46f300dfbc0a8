//! Random contraction, the light-codeword counting bound, exact dense-subcode
//! search, and the vertical decomposition that makes the bound hold.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng as _;

use crate::code::linalg::RowBasis;
use crate::code::{for_each_codeword, Enumeration, GeneratorMatrix, MessageDomain, MultiCode};
use crate::error::{Error, Result};
use crate::numeric::{floor_to_biguint, int, Rational};
use crate::rng::{derive_seed, rng_from_seed};

pub const DEFAULT_NODE_BUDGET: u64 = 200_000;

/// Zeroes row `j` by eliminating against the first column nonzero at `j`,
/// then drops that column. The new span is `{c in span(G) : c_j = 0}`.
pub fn contract_step(g: &GeneratorMatrix, j: usize) -> Result<GeneratorMatrix> {
    if j >= g.n() {
        return Err(Error::IndexOutOfRange { index: j, bound: g.n() });
    }
    let field = g.field();
    let Some(a) = (0..g.k()).find(|&c| g.get(j, c) != 0) else {
        return Err(Error::ZeroCoordinate(j));
    };
    let pivot_inv = field.inv(g.get(j, a))?;
    let mut m = g.clone();
    for b in 0..g.k() {
        if b != a && g.get(j, b) != 0 {
            let factor = field.neg(field.mul(pivot_inv, g.get(j, b)));
            m.add_column_multiple(a, b, factor);
        }
    }
    Ok(m.remove_column(a))
}

/// Sequence of contracted coordinates and the resulting matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionTrace {
    pub chosen_coordinates: Vec<usize>,
    pub final_matrix: GeneratorMatrix,
    pub seed: u64,
}

/// Contracts uniformly random nonzero coordinates until at most `alpha`
/// columns remain or every row is zero.
pub fn contract(g: &GeneratorMatrix, alpha: usize, seed: u64) -> ContractionTrace {
    let mut rng = rng_from_seed(seed);
    let mut m = g.clone();
    let mut chosen = Vec::new();
    while m.k() > alpha {
        let support = m.support();
        if support.is_empty() {
            break;
        }
        let j = support[rng.random_range(0..support.len())];
        m = contract_step(&m, j).expect("row is nonzero");
        chosen.push(j);
    }
    ContractionTrace { chosen_coordinates: chosen, final_matrix: m, seed }
}

/// Survival counts of a fixed codeword under repeated contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalEstimate {
    pub survived: u64,
    pub trials: u64,
}

impl SurvivalEstimate {
    pub fn fraction(&self) -> Rational {
        Rational::new((self.survived as i64).into(), (self.trials as i64).into())
    }
}

/// Runs `trials` independent contractions down to `alpha` columns and counts
/// how often the final span still contains `c`.
pub fn survival_experiment(
    g: &GeneratorMatrix,
    c: &[u32],
    alpha: usize,
    trials: u64,
    seed: u64,
) -> Result<SurvivalEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !g.contains(c)? {
        return Err(Error::NotACodeword);
    }
    let mut survived = 0;
    for t in 0..trials {
        let trace = contract(g, alpha, derive_seed(seed, t));
        if trace.final_matrix.contains(c)? {
            survived += 1;
        }
    }
    Ok(SurvivalEstimate { survived, trials })
}

/// One row of a [`CountingBoundReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaCount {
    pub alpha: usize,
    pub count: u64,
    pub bound: BigUint,
    pub pass: bool,
}

/// Counts of distinct nonzero codewords of weight at most `alpha * d`
/// against `q^alpha * C(k, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingBoundReport {
    pub d: Rational,
    pub per_alpha: Vec<AlphaCount>,
}

impl CountingBoundReport {
    pub fn pass(&self) -> bool {
        self.per_alpha.iter().all(|a| a.pass)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.per_alpha.iter().find(|a| !a.pass).map(|a| a.alpha)
    }
}

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exhaustive check of the counting bound for `alpha = 1..=k` with `k` the
/// column count.
pub fn check_counting_bound(g: &GeneratorMatrix, d: u64) -> Result<CountingBoundReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    counting_bound_multi(&MultiCode::simple(g.clone()), &int(d), &Enumeration::default())
}

/// Counting bound on a code with row multiplicities and a rational threshold.
pub(crate) fn counting_bound_multi(
    code: &MultiCode,
    d: &Rational,
    scope: &Enumeration,
) -> Result<CountingBoundReport> {
    let k = code.matrix.k();
    let q = BigUint::from(code.matrix.field().modulus());
    // limits[a - 1] = floor(a * d)
    let limits: Vec<u64> = (1..=k as u64)
        .map(|a| u64::try_from(floor_to_biguint(&(d * int(a)))).unwrap_or(u64::MAX))
        .collect();
    let mut counts = vec![0u64; k + 1];
    let mut record = |weight: u64| {
        let slot = limits.partition_point(|&l| l < weight);
        if weight > 0 && slot < k {
            counts[slot + 1] += 1;
        }
    };
    visit_weights(code, scope, |w, _| {
        record(w);
        ControlFlow::Continue(())
    })?;
    let mut per_alpha = Vec::with_capacity(k);
    let mut cumulative = 0;
    for alpha in 1..=k {
        cumulative += counts[alpha];
        let bound = q.pow(alpha as u32) * binomial(k, alpha);
        per_alpha.push(AlphaCount { alpha, count: cumulative, pass: BigUint::from(cumulative) <= bound, bound });
    }
    Ok(CountingBoundReport { d: d.clone(), per_alpha })
}

/// Visits each distinct nonzero codeword with its multiplicity weight.
/// Non-full domains are deduplicated by codeword value.
fn visit_weights<F>(code: &MultiCode, scope: &Enumeration, mut f: F) -> Result<()>
where
    F: FnMut(u64, &[u32]) -> ControlFlow<()>,
{
    let mult = &code.multiplicity;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let dedup = scope.domain != MessageDomain::Full;
    for_each_codeword(&code.matrix, scope, |_, cw| {
        let w: u64 = cw.iter().zip(mult).filter(|(&x, _)| x != 0).map(|(_, &m)| m).sum();
        if w == 0 || (dedup && !seen.insert(cw.to_vec())) {
            return ControlFlow::Continue(());
        }
        f(w, cw)
    })?;
    Ok(())
}

/// `C_T = {c in span(G) : supp(c) ⊆ T}` as a generator matrix.
pub fn subcode_within(g: &GeneratorMatrix, t: &[usize]) -> Result<GeneratorMatrix> {
    let mut inside = vec![false; g.n()];
    for &i in t {
        if i >= g.n() {
            return Err(Error::IndexOutOfRange { index: i, bound: g.n() });
        }
        inside[i] = true;
    }
    let outside: Vec<usize> = (0..g.n()).filter(|&i| !inside[i]).collect();
    let kernel = g.puncture(&outside)?.kernel_basis();
    let columns: Vec<Vec<u32>> = kernel.iter().map(|x| g.encode(x).expect("length k")).collect();
    let sub = GeneratorMatrix::from_columns(g.field(), g.n(), &columns);
    let independent = sub.independent_columns();
    Ok(sub.select_columns(&independent))
}

/// A densest subcode: its support, dimension and `dim / |support|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSubcode {
    pub support: Vec<usize>,
    pub dim: usize,
    pub density: Rational,
}

/// Exact maximum density over all subcodes.
///
/// Enumerates the flats of the row matroid: for `T` with complement closing
/// to a flat `F`, `dim C_T = rank(G) - rank(F)`, so the optimum is attained at
/// `T = [n] \ F` for some flat `F`.
pub fn densest_subcode_exact(g: &GeneratorMatrix, node_budget: u64) -> Result<DenseSubcode> {
    let mult = vec![1; g.n()];
    let allowed = vec![true; g.n()];
    densest_multi(g, &mult, &allowed, node_budget)
}

/// Densest subcode whose support lies inside `allowed`, with supports
/// measured by row multiplicity.
pub(crate) fn densest_multi(
    g: &GeneratorMatrix,
    mult: &[u64],
    allowed: &[bool],
    node_budget: u64,
) -> Result<DenseSubcode> {
    let field = g.field();
    let r = g.rank();
    let empty = DenseSubcode { support: Vec::new(), dim: 0, density: Rational::zero() };
    if r == 0 {
        return Ok(empty);
    }
    // Parallel rows share a projective point and therefore every flat.
    let mut class_of: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut classes: Vec<(Vec<u32>, u64, Vec<usize>)> = Vec::new();
    for i in 0..g.n() {
        let row = g.row(i);
        let Some(lead) = row.iter().find(|&&x| x != 0) else {
            continue;
        };
        let inv = field.inv(*lead).expect("nonzero");
        let normal: Vec<u32> = row.iter().map(|&x| field.mul(x, inv)).collect();
        let id = *class_of.entry(normal.clone()).or_insert_with(|| {
            classes.push((normal, 0, Vec::new()));
            classes.len() - 1
        });
        classes[id].1 += mult[i];
        classes[id].2.push(i);
    }
    let mut start = RowBasis::new(field);
    for i in (0..g.n()).filter(|&i| !allowed[i]) {
        start.insert(g.row(i));
    }
    let key = |b: &RowBasis| b.canonical_key();
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    visited.insert(key(&start));
    let mut queue = VecDeque::from([start]);
    let mut best: Option<(Rational, Vec<bool>)> = None;
    let mut nodes = 0u64;
    while let Some(flat) = queue.pop_front() {
        nodes += 1;
        if nodes > node_budget {
            return Err(Error::BudgetExceeded { required: format!("more than {node_budget} flats"), budget: node_budget });
        }
        let members: Vec<bool> = classes.iter().map(|(v, _, _)| flat.contains(v)).collect();
        let outside: u64 = classes.iter().zip(&members).filter(|(_, &m)| !m).map(|(c, _)| c.1).sum();
        if outside > 0 && flat.dim() < r {
            let ratio = Rational::new(((r - flat.dim()) as i64).into(), (outside as i64).into());
            if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                best = Some((ratio, members.clone()));
            }
        }
        for (c, member) in classes.iter().zip(&members) {
            if *member {
                continue;
            }
            let mut child = flat.clone();
            child.insert(&c.0);
            if visited.insert(key(&child)) {
                queue.push_back(child);
            }
        }
    }
    let Some((_, members)) = best else {
        return Ok(empty);
    };
    let t: Vec<usize> = classes
        .iter()
        .zip(&members)
        .filter(|(_, &m)| !m)
        .flat_map(|(c, _)| c.2.iter().copied())
        .collect();
    let sub = subcode_within(g, &t)?;
    let support = sub.support();
    let size: u64 = support.iter().map(|&i| mult[i]).sum();
    let dim = sub.rank();
    Ok(DenseSubcode {
        density: Rational::new((dim as i64).into(), (size as i64).into()),
        support,
        dim,
    })
}

/// How a group of coordinates was moved out of the residual code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionStep {
    /// Support of a nonzero codeword of weight at most the threshold.
    Peel { support: Vec<usize>, weight: u64 },
    /// Support of a subcode denser than `1 / threshold`.
    DenseSubcode { support: Vec<usize>, dim: usize, density: Rational },
    /// Support of a light codeword removed because the exact search could not
    /// produce a dense subcode.
    Escalation { support: Vec<usize>, weight: u64 },
}

/// Result of [`code_decomposition`]: `removed` and the residual form a
/// vertical decomposition of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub removed: Vec<usize>,
    pub residual: GeneratorMatrix,
    pub report: CountingBoundReport,
    pub steps: Vec<DecompositionStep>,
}

impl Decomposition {
    pub fn peeling_only(&self) -> bool {
        self.steps.iter().all(|s| matches!(s, DecompositionStep::Peel { .. }))
    }

    pub fn escalations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, DecompositionStep::Escalation { .. })).count()
    }
}

/// Options for the decomposition search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionOptions {
    pub scope: Enumeration,
    pub node_budget: u64,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self { scope: Enumeration::default(), node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Splits off at most about `k d` coordinates so that the rest has no nonzero
/// codeword of weight at most `d` and satisfies the counting bound.
pub fn code_decomposition(g: &GeneratorMatrix, d: u64) -> Result<Decomposition> {
    code_decomposition_with(g, d, &DecompositionOptions::default())
}

pub fn code_decomposition_with(g: &GeneratorMatrix, d: u64, options: &DecompositionOptions) -> Result<Decomposition> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let code = MultiCode::simple(g.clone());
    let out = decompose_multi(&code, &int(d), options)?;
    let removed: Vec<usize> = (0..g.n()).filter(|&i| out.removed[i]).collect();
    let kept: Vec<usize> = (0..g.n()).filter(|&i| !out.removed[i]).collect();
    Ok(Decomposition { removed, residual: g.puncture(&kept)?, report: out.report, steps: out.steps })
}

pub(crate) struct MultiDecomposition {
    pub removed: Vec<bool>,
    pub report: CountingBoundReport,
    pub steps: Vec<DecompositionStep>,
}

/// Residual code on the rows not yet removed, with the index map back.
fn residual_of(code: &MultiCode, removed: &[bool]) -> (MultiCode, Vec<usize>) {
    let kept: Vec<usize> = (0..code.matrix.n()).filter(|&i| !removed[i]).collect();
    let matrix = code.matrix.puncture(&kept).expect("in range");
    let multiplicity = kept.iter().map(|&i| code.multiplicity[i]).collect();
    (MultiCode { matrix, multiplicity }, kept)
}

/// Lightest nonzero codeword with weight at most `limit`: (weight, support).
fn lightest(code: &MultiCode, limit: u64, scope: &Enumeration) -> Result<Option<(u64, Vec<usize>)>> {
    let mut best: Option<(u64, Vec<u32>)> = None;
    visit_weights(code, scope, |w, cw| {
        if w <= limit && best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, cw.to_vec()));
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.map(|(w, cw)| (w, (0..cw.len()).filter(|&i| cw[i] != 0).collect())))
}

pub(crate) fn decompose_multi(
    code: &MultiCode,
    threshold: &Rational,
    options: &DecompositionOptions,
) -> Result<MultiDecomposition> {
    let n = code.matrix.n();
    let scope = &options.scope;
    let limit = u64::try_from(floor_to_biguint(threshold)).unwrap_or(u64::MAX);
    let mut removed = vec![false; n];
    let mut steps = Vec::new();
    loop {
        loop {
            let (residual, kept) = residual_of(code, &removed);
            match lightest(&residual, limit, scope)? {
                Some((weight, support)) => {
                    let support: Vec<usize> = support.iter().map(|&i| kept[i]).collect();
                    for &i in &support {
                        removed[i] = true;
                    }
                    steps.push(DecompositionStep::Peel { support, weight });
                }
                None => break,
            }
        }
        let (residual, kept) = residual_of(code, &removed);
        let report = counting_bound_multi(&residual, threshold, scope)?;
        let Some(alpha) = report.first_failure() else {
            return Ok(MultiDecomposition { removed, report, steps });
        };
        let violation = u64::try_from(floor_to_biguint(&(threshold * int(alpha as u64)))).unwrap_or(u64::MAX);
        let mut allowed = vec![false; residual.matrix.n()];
        visit_weights(&residual, scope, |w, cw| {
            if w <= violation {
                for (a, &x) in allowed.iter_mut().zip(cw) {
                    *a |= x != 0;
                }
            }
            ControlFlow::Continue(())
        })?;
        let dense = densest_multi(&residual.matrix, &residual.multiplicity, &allowed, options.node_budget);
        let one_over = Rational::one() / threshold;
        match dense {
            Ok(found) if found.density > one_over => {
                let support: Vec<usize> = found.support.iter().map(|&i| kept[i]).collect();
                for &i in &support {
                    removed[i] = true;
                }
                steps.push(DecompositionStep::DenseSubcode { support, dim: found.dim, density: found.density });
            }
            Ok(_) | Err(Error::BudgetExceeded { .. }) => {
                let (weight, support) = lightest(&residual, violation, scope)?
                    .ok_or_else(|| Error::InternalInconsistency("violating codeword vanished".into()))?;
                let support: Vec<usize> = support.iter().map(|&i| kept[i]).collect();
                for &i in &support {
                    removed[i] = true;
                }
                steps.push(DecompositionStep::Escalation { support, weight });
            }
            Err(e) => return Err(e),
        }
    }
}
