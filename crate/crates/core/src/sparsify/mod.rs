//! The sparsification pipeline: recursive decomposition-and-sampling,
//! importance sampling by per-coordinate minimum weights, weight classes,
//! span decomposition, unweighting, and their composition.

mod classes;
mod quadratic;
mod recursive;

use num_traits::{One, Signed, Zero};

use crate::code::{CoordinateWeights, Enumeration, GeneratorMatrix, MessageDomain, MultiCode, Sparsifier};
use crate::counting::{DecompositionOptions, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::{ceil_to_biguint, from_biguint, int, log2_clamped, loglog2_clamped, Rational};
use crate::rng::derive_seed;

pub use classes::{
    make_unweighted, partition_by_weight, span_decomposition, weight_class_decomposition, SpanBlock,
    WeightClassDecomposition, WeightClassPartition,
};
pub use quadratic::{min_weights_through_coordinates, quadratic_sparsify, quadratic_sparsify_weighted};
pub use recursive::code_sparsify;
pub(crate) use recursive::sparsify_multi;

/// Expected number of samples that aggressive mode places on the lightest
/// surviving codeword is this constant divided by `eps^2`.
pub const AGGRESSIVE_SAMPLES: i64 = 24;

/// Parameters shared by every sparsifier in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifyParams {
    pub epsilon: Rational,
    /// Overrides the default `100 (log(k/eps) loglog q)^2`.
    pub eta: Option<Rational>,
    pub seed: u64,
    /// Base case when `n <= base_case_multiplier * k * lambda`.
    pub base_case_multiplier: Rational,
    /// Replaces the theoretical sample budget by [`AGGRESSIVE_SAMPLES`]`/eps^2`
    /// so that desk-scale inputs are genuinely sampled.
    pub aggressive: bool,
    pub scope: Enumeration,
    pub node_budget: u64,
}

impl SparsifyParams {
    pub fn new(epsilon: Rational, seed: u64) -> Result<Self> {
        if epsilon <= Rational::zero() || epsilon >= Rational::one() {
            return Err(Error::InvalidParameter("epsilon must lie in (0, 1)".into()));
        }
        Ok(Self {
            epsilon,
            eta: None,
            seed,
            base_case_multiplier: int(100),
            aggressive: false,
            scope: Enumeration::default(),
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    /// Demonstration constants: aggressive sample budget and base multiplier 1.
    pub fn aggressive(epsilon: Rational, seed: u64) -> Result<Self> {
        let mut p = Self::new(epsilon, seed)?;
        p.aggressive = true;
        p.base_case_multiplier = Rational::one();
        Ok(p)
    }

    pub fn with_eta(mut self, eta: Rational) -> Result<Self> {
        if eta <= Rational::zero() {
            return Err(Error::InvalidParameter("eta must be positive".into()));
        }
        self.eta = Some(eta);
        Ok(self)
    }

    pub fn with_scope(mut self, scope: Enumeration) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn decomposition(&self) -> DecompositionOptions {
        DecompositionOptions { scope: self.scope, node_budget: self.node_budget }
    }
}

/// `100 (log(k/eps) loglog q)^2`.
pub fn default_eta(k: usize, epsilon: &Rational, q: u32) -> Result<Rational> {
    let a = log2_clamped(&(int(k.max(1) as u64) / epsilon))?;
    let b = loglog2_clamped(&int(q as u64))?;
    let t = a * b;
    Ok(int(100) * &t * &t)
}

/// Expected samples on the lightest codeword, `eta log k log q / eps^2`.
pub(crate) fn sample_budget(
    params: &SparsifyParams,
    k_block: usize,
    k_total: usize,
    q: u32,
    eps_inner: &Rational,
) -> Result<Rational> {
    if params.eta.is_none() && params.aggressive {
        return Ok(int(AGGRESSIVE_SAMPLES as u64) / (&params.epsilon * &params.epsilon));
    }
    let eta = match &params.eta {
        Some(eta) => eta.clone(),
        None => default_eta(k_total, &params.epsilon, q)?,
    };
    let lk = log2_clamped(&int(k_block.max(1) as u64))?;
    let lq = log2_clamped(&int(q as u64))?;
    Ok(eta * lk * lq / (eps_inner * eps_inner))
}

/// One block processed by [`final_code_sparsify_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTrace {
    pub odd: bool,
    pub class: u32,
    pub rows: usize,
    pub rank: usize,
    pub duplicated_length: u64,
    pub retained_rows: usize,
}

/// The sparsifier with per-stage sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineTrace {
    pub sparsifier: Sparsifier,
    pub quadratic_retained: usize,
    pub alpha: Rational,
    pub blocks: Vec<BlockTrace>,
}

/// Full weighted pipeline: importance sampling, weight classes, span
/// decomposition per parity, unweighting and recursive sparsification of
/// every block. Duplicate coordinates merge by adding weights.
pub fn final_code_sparsify(g: &GeneratorMatrix, w: &CoordinateWeights, params: &SparsifyParams) -> Result<Sparsifier> {
    Ok(final_code_sparsify_traced(g, w, params)?.sparsifier)
}

pub fn final_code_sparsify_traced(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    params: &SparsifyParams,
) -> Result<PipelineTrace> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: w.len() });
    }
    let empty = |alpha| PipelineTrace {
        sparsifier: Sparsifier::from_pairs(std::iter::empty()),
        quadratic_retained: 0,
        alpha,
        blocks: Vec::new(),
    };
    let r = g.rank();
    if g.n() == 0 || r == 0 {
        return Ok(empty(Rational::zero()));
    }
    let eps = &params.epsilon;
    let q = g.field().modulus();
    let s = w.min().expect("nonempty").clone();
    let normalized = CoordinateWeights::new(w.values().iter().map(|x| x / &s).collect())?;

    let quad = quadratic_sparsify_weighted(g, &normalized, &(eps / int(4)), derive_seed(params.seed, 1), &params.scope)?;
    let quad_weights = quad.weights().to_vec();
    let alpha = if params.scope.domain == MessageDomain::Full {
        let half = eps / int(2);
        let raw = int((r as u64).pow(3)) * log2_clamped(&int(q as u64))? / (&half * &half * &half);
        from_biguint(&ceil_to_biguint(&raw))
    } else {
        // Column operations do not preserve restricted message domains, so
        // every weight goes into one band.
        let top = quad_weights.iter().max().cloned().unwrap_or_else(Rational::one);
        from_biguint(&ceil_to_biguint(&top)).max(int(2))
    };
    let partition = partition_by_weight(quad.coords(), &quad_weights, &alpha)?;
    let weight_of: std::collections::HashMap<usize, Rational> =
        quad.coords().iter().copied().zip(quad_weights.iter().cloned()).collect();

    let eps_unweight = eps / int(8);
    let eps_inner = eps / int(80);
    let mut pairs: Vec<(usize, Rational)> = Vec::new();
    let mut blocks_trace = Vec::new();
    for (odd, rows) in [(true, &partition.odd_union), (false, &partition.even_union)] {
        if rows.is_empty() {
            continue;
        }
        let d = g.puncture(rows)?;
        let labels: Vec<u32> = rows.iter().map(|i| partition.class_of(*i).expect("classified")).collect();
        for block in span_decomposition(&d, &labels)? {
            let nonzero: Vec<usize> = (0..block.h.n()).filter(|&j| !block.h.is_zero_row(j)).collect();
            if nonzero.is_empty() {
                continue;
            }
            let h = block.h.puncture(&nonzero)?;
            let original: Vec<usize> = nonzero.iter().map(|&j| rows[block.rows[j]]).collect();
            let hw = CoordinateWeights::new(original.iter().map(|i| weight_of[i].clone()).collect())?;
            let (multi, scale) = make_unweighted(&h, &hw, &alpha, block.class, &eps_unweight)?;
            let k_block = h.k();
            let lambda = sample_budget(params, k_block, r, q, &eps_inner)?;
            let seed = derive_seed(derive_seed(params.seed, 2 + u64::from(odd)), block.class as u64);
            let kept = sparsify_multi(&multi, k_block, &lambda, params, seed)?;
            let mut retained = 0;
            for (j, weight) in kept.iter().enumerate() {
                if weight.is_positive() {
                    retained += 1;
                    pairs.push((original[j], &s * &scale * weight));
                }
            }
            blocks_trace.push(BlockTrace {
                odd,
                class: block.class,
                rows: h.n(),
                rank: k_block,
                duplicated_length: multi.total_len(),
                retained_rows: retained,
            });
        }
    }
    Ok(PipelineTrace {
        sparsifier: Sparsifier::from_pairs(pairs),
        quadratic_retained: quad.len(),
        alpha,
        blocks: blocks_trace,
    })
}

/// Sparsifies a multiplicity-coded unweighted code; returns one weight per
/// row, zero for dropped rows.
pub fn sparsify_unweighted_multicode(code: &MultiCode, params: &SparsifyParams) -> Result<Vec<Rational>> {
    let k = code.matrix.rank();
    let lambda = sample_budget(params, k, k, code.matrix.field().modulus(), &params.epsilon)?;
    sparsify_multi(code, k, &lambda, params, params.seed)
}
