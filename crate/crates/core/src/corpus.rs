//! Deterministic instance generators. Every generator draws from a ChaCha
//! stream seeded by its `seed` argument and uses integer sampling only, so
//! outputs are identical across platforms.

use num_traits::One;
use rand::Rng as _;

use crate::cayley::{CayleySpec, Generator};
use crate::code::{CoordinateWeights, GeneratorMatrix};
use crate::csp::{AffinePredicate, Constraint, ConstraintPredicate, CspInstance};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graphs::Graph;
use crate::hypergraphs::Hypergraph;
use crate::numeric::{int, Rational};
use crate::rng::{rng_from_seed, Rng};

/// Uniform `n x k` matrix over F_q with no zero rows.
pub fn random_code(q: u64, k: usize, n: usize, seed: u64) -> Result<GeneratorMatrix> {
    let field = PrimeField::new(q)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut entries = Vec::with_capacity(n * k);
    for _ in 0..n {
        loop {
            let row: Vec<u32> = (0..k).map(|_| rng.random_range(0..q) as u32).collect();
            if row.iter().any(|&x| x != 0) {
                entries.extend(row);
                break;
            }
        }
    }
    GeneratorMatrix::new(field, n, k, entries)
}

/// Integer weights in `[1, 10^6]` with a uniformly random decade; the first
/// two weights are pinned to `1` and `10^6` so the spread is exact.
pub fn spanning_weights(n: usize, seed: u64) -> CoordinateWeights {
    let mut rng = rng_from_seed(seed);
    let mut w: Vec<Rational> = (0..n)
        .map(|_| {
            let decade = 10u64.pow(rng.random_range(0..6u32));
            int(rng.random_range(decade..=decade * 10).min(1_000_000))
        })
        .collect();
    if n >= 2 {
        w[0] = int(1);
        w[1] = int(1_000_000);
    }
    CoordinateWeights::new(w).expect("positive")
}

/// Identity rows followed by rows that are, with equal probability, copies
/// of a random identity row or uniformly random combinations.
pub fn redundancy_code(q: u64, k: usize, n: usize, seed: u64) -> Result<GeneratorMatrix> {
    let field = PrimeField::new(q)?;
    if n < k {
        return Err(Error::InvalidParameter("need n >= k".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut entries = vec![0u32; n * k];
    for i in 0..k {
        entries[i * k + i] = 1;
    }
    for i in k..n {
        let row = &mut entries[i * k..(i + 1) * k];
        if rng.random_bool(0.5) {
            row[rng.random_range(0..k)] = 1;
        } else {
            for x in row.iter_mut() {
                *x = rng.random_range(0..q) as u32;
            }
        }
    }
    GeneratorMatrix::new(field, n, k, entries)
}

/// Bernoulli trial with exact rational probability in `[0, 1]`.
fn bernoulli(rng: &mut Rng, p: &Rational) -> bool {
    use num_traits::ToPrimitive;
    let num = p.numer().to_u64().unwrap_or(0);
    let den = p.denom().to_u64().unwrap_or(1);
    rng.random_range(0..den) < num
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn gnp(n: usize, p: &Rational, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(&mut rng, p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::unweighted(n, &pairs)
}

/// First connected sample of `G(n, p)` along a derived seed sequence.
pub fn connected_gnp(n: usize, p: &Rational, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    if p.numer() == &0.into() && n > 1 {
        return Err(Error::InvalidParameter("G(n, 0) is disconnected".into()));
    }
    (0u64..)
        .map(|attempt| gnp(n, p, crate::rng::derive_seed(seed, attempt)))
        .find(|g| g.as_ref().map_or(true, |g| g.components().len() <= 1))
        .expect("an infinite search ends on success or error")
}

fn check_probability(p: &Rational) -> Result<()> {
    if *p < int(0) || *p > Rational::one() {
        return Err(Error::InvalidParameter("probability must lie in [0, 1]".into()));
    }
    Ok(())
}

/// `m` unit-weight hyperedges with sizes uniform in `2..=max_size`.
pub fn random_hypergraph(n: usize, m: usize, max_size: usize, seed: u64) -> Result<Hypergraph> {
    if n < 2 || max_size < 2 {
        return Err(Error::InvalidParameter("need n >= 2 and max_size >= 2".into()));
    }
    let mut rng = rng_from_seed(seed);
    let sets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.random_range(2..=max_size.min(n));
            rand::seq::index::sample(&mut rng, n, size).into_vec()
        })
        .collect();
    Hypergraph::unweighted(n, &sets)
}

/// `m` distinct nonzero generators of F_2^k with integer weights in `1..=max_weight`.
pub fn random_cayley(k: usize, m: usize, max_weight: u64, seed: u64) -> Result<CayleySpec> {
    if k == 0 || k > 20 || m as u64 >= 1u64 << k {
        return Err(Error::InvalidParameter("need 1 <= k <= 20 and m < 2^k".into()));
    }
    let mut rng = rng_from_seed(seed);
    let vectors = rand::seq::index::sample(&mut rng, (1usize << k) - 1, m);
    let generators = vectors
        .into_iter()
        .map(|v| Generator { vector: v as u64 + 1, weight: int(rng.random_range(1..=max_weight.max(1))) })
        .collect();
    CayleySpec::new(k, generators)
}

/// `m` XOR constraints of the given arity on distinct variables, each with a
/// random constant term.
pub fn random_xor_csp(k: usize, m: usize, arity: usize, seed: u64) -> Result<CspInstance> {
    if arity == 0 || arity > k {
        return Err(Error::InvalidParameter("need 1 <= arity <= k".into()));
    }
    let mut rng = rng_from_seed(seed);
    let constraints = (0..m)
        .map(|_| {
            let mut coeffs = vec![rng.random_range(0..2u64)];
            coeffs.extend(std::iter::repeat_n(1, arity));
            Constraint {
                predicate: ConstraintPredicate::Affine(AffinePredicate::new(2, &coeffs).expect("valid")),
                variables: rand::seq::index::sample(&mut rng, k, arity).into_vec(),
                weight: Rational::one(),
            }
        })
        .collect();
    CspInstance::new(k, constraints)
}
