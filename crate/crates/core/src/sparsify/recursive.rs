//! Recursive decomposition and sampling on unweighted codes.

use num_traits::ToPrimitive;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution};

use super::{sample_budget, SparsifyParams};
use crate::code::{GeneratorMatrix, MultiCode, Sparsifier};
use crate::counting::decompose_multi;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{floor_sqrt, floor_to_biguint, int, loglog2_clamped, Rational};
use crate::rng::{derive_seed, rng_from_seed};

/// Copies at or below this count are sampled one by one.
const EXACT_SAMPLING_LIMIT: u64 = 64;

/// The sampling factor `sqrt(d)` is rounded down to multiples of
/// `1 / FACTOR_GRID`, keeping weights exact with small denominators.
const FACTOR_GRID: u64 = 8;

/// Recursive sparsifier for an unweighted code.
///
/// Below `B k lambda` coordinates the code is returned as is. Otherwise,
/// with `d = n / (k lambda)` and `m` the grid value just below `sqrt d`,
/// light codewords and dense subcodes are split off at threshold `m lambda`,
/// the rest is sampled at rate `1/m`, both parts recurse, and sampled weights
/// are multiplied by `m`.
pub fn code_sparsify(g: &GeneratorMatrix, params: &SparsifyParams) -> Result<Sparsifier> {
    let k = g.rank().max(1);
    let lambda = sample_budget(params, k, k, g.field().modulus(), &params.epsilon)?;
    let weights = sparsify_multi(&MultiCode::simple(g.clone()), k, &lambda, params, params.seed)?;
    Ok(Sparsifier::from_pairs(weights.into_iter().enumerate()))
}

/// `2 loglog(max(n, 4)) + 2`, rounded down.
pub(crate) fn depth_cap(n: u64) -> u32 {
    let ll = loglog2_clamped(&int(n.max(4))).expect("positive");
    let twice = floor_to_biguint(&(ll * int(2)));
    twice.to_u32().unwrap_or(u32::MAX - 2) + 2
}

/// Weight per row of `code`: retained copies times the product of sampling
/// factors along the recursion. Zero for dropped rows.
pub(crate) fn sparsify_multi(
    code: &MultiCode,
    k: usize,
    lambda: &Rational,
    params: &SparsifyParams,
    seed: u64,
) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); code.matrix.n()];
    let index: Vec<usize> = (0..code.matrix.n()).collect();
    let node = Node { k, lambda, params, cap: depth_cap(code.total_len()) };
    node.recurse(code, &index, seed, 0, &Rational::one(), &mut out)?;
    Ok(out)
}

struct Node<'a> {
    k: usize,
    lambda: &'a Rational,
    params: &'a SparsifyParams,
    cap: u32,
}

impl Node<'_> {
    fn recurse(
        &self,
        code: &MultiCode,
        index: &[usize],
        seed: u64,
        depth: u32,
        scale: &Rational,
        out: &mut [Rational],
    ) -> Result<()> {
        let n = code.total_len();
        if n == 0 {
            return Ok(());
        }
        let verbatim = |out: &mut [Rational]| -> Result<()> {
            for (j, &m) in code.multiplicity.iter().enumerate() {
                out[index[j]] += scale * int(m);
            }
            Ok(())
        };
        let n_rat = int(n);
        let k_lambda = int(self.k as u64) * self.lambda;
        if n_rat <= &self.params.base_case_multiplier * &k_lambda || depth >= self.cap {
            return verbatim(out);
        }
        // m = a / FACTOR_GRID with a = floor(sqrt(d * FACTOR_GRID^2))
        let grid_sq = int(FACTOR_GRID * FACTOR_GRID);
        let a = floor_sqrt(&(n_rat / &k_lambda * grid_sq)).to_u64().unwrap_or(u64::MAX);
        if a <= FACTOR_GRID {
            return verbatim(out);
        }
        let m = Rational::new(a.into(), FACTOR_GRID.into());
        let threshold = self.lambda * &m;
        let split = decompose_multi(code, &threshold, &self.params.decomposition())?;
        if split.removed.iter().all(|&r| r) {
            return verbatim(out);
        }
        let part = |pick: &dyn Fn(usize) -> Option<u64>| -> Result<(MultiCode, Vec<usize>)> {
            let mut rows = Vec::new();
            let mut mult = Vec::new();
            for j in 0..code.matrix.n() {
                if let Some(c) = pick(j).filter(|&c| c > 0) {
                    rows.push(j);
                    mult.push(c);
                }
            }
            let matrix = code.matrix.puncture(&rows)?;
            let idx = rows.iter().map(|&j| index[j]).collect();
            Ok((MultiCode { matrix, multiplicity: mult }, idx))
        };
        let (light, light_index) = part(&|j| split.removed[j].then_some(code.multiplicity[j]))?;
        self.recurse(&light, &light_index, derive_seed(seed, 1), depth + 1, scale, out)?;

        let mut rng = rng_from_seed(derive_seed(seed, 3));
        let mut sampled = vec![0u64; code.matrix.n()];
        for j in (0..code.matrix.n()).filter(|&j| !split.removed[j]) {
            let copies = code.multiplicity[j];
            sampled[j] = if copies <= EXACT_SAMPLING_LIMIT {
                (0..copies).filter(|_| rng.random_range(0..a) < FACTOR_GRID).count() as u64
            } else {
                Binomial::new(copies, FACTOR_GRID as f64 / a as f64)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?
                    .sample(&mut rng)
            };
        }
        let (heavy, heavy_index) = part(&|j| (!split.removed[j]).then_some(sampled[j]))?;
        self.recurse(&heavy, &heavy_index, derive_seed(seed, 2), depth + 1, &(scale * m), out)
    }
}
