//! Importance sampling by per-coordinate minimum codeword weight.

use std::ops::ControlFlow;

use num_traits::{One, Zero};
use rand::Rng as _;

use crate::code::{for_each_codeword, CoordinateWeights, Enumeration, GeneratorMatrix, Sparsifier};
use crate::error::{Error, Result};
use crate::numeric::{int, log2_clamped, to_f64, Rational};
use crate::rng::rng_from_seed;

/// Oversampling constant of the importance sampler.
const OVERSAMPLING: u64 = 10;

/// For each coordinate, the least weighted weight of a codeword nonzero
/// there; `None` for coordinates no codeword touches.
pub fn min_weights_through_coordinates(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    scope: &Enumeration,
) -> Result<Vec<Option<Rational>>> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: w.len() });
    }
    let den = crate::numeric::lcm_of_denominators(w.values());
    let scaled: Vec<u128> = w
        .values()
        .iter()
        .map(|x| {
            num_traits::ToPrimitive::to_u128(&(x * Rational::from_integer(den.clone())).to_integer())
                .ok_or_else(|| Error::InvalidParameter("weights too large".into()))
        })
        .collect::<Result<_>>()?;
    let mut best: Vec<Option<u128>> = vec![None; g.n()];
    for_each_codeword(g, scope, |_, cw| {
        let total: u128 = cw.iter().zip(&scaled).filter(|(&x, _)| x != 0).map(|(_, &s)| s).sum();
        if total > 0 {
            for (b, &x) in best.iter_mut().zip(cw) {
                if x != 0 && b.is_none_or(|v| total < v) {
                    *b = Some(total);
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(best
        .into_iter()
        .map(|b| b.map(|v| Rational::new(v.into(), den.clone())))
        .collect())
}

/// Unweighted importance sampling: coordinate `i` survives with
/// `p_i = min(1, 10 k log q / (eps^2 w_i))` and gets weight `1 / p_i`.
pub fn quadratic_sparsify(g: &GeneratorMatrix, epsilon: &Rational, seed: u64) -> Result<Sparsifier> {
    quadratic_sparsify_weighted(g, &CoordinateWeights::unit(g.n()), epsilon, seed, &Enumeration::default())
}

/// Weighted importance sampling: `p_i = min(1, 10 k log q c_i / (eps^2 W_i))`
/// with `W_i` the weighted minimum through `i`; survivors get `c_i / p_i`.
pub fn quadratic_sparsify_weighted(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    epsilon: &Rational,
    seed: u64,
    scope: &Enumeration,
) -> Result<Sparsifier> {
    let k = g.rank();
    if k == 0 {
        return Err(Error::ZeroCode);
    }
    let minima = min_weights_through_coordinates(g, w, scope)?;
    let factor = int(OVERSAMPLING * k as u64) * log2_clamped(&int(g.field().modulus() as u64))?
        / (epsilon * epsilon);
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::new();
    for (i, (c, min)) in w.values().iter().zip(&minima).enumerate() {
        let Some(min) = min else {
            continue;
        };
        let p = &factor * c / min;
        if p >= Rational::one() {
            pairs.push((i, c.clone()));
        } else if p > Rational::zero() && rng.random::<f64>() < to_f64(&p) {
            pairs.push((i, c / p));
        }
    }
    Ok(Sparsifier::from_pairs(pairs))
}
