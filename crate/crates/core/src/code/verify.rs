//! Exhaustive, exact comparison of two weightings of one code.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{for_each_codeword, CoordinateWeights, Enumeration, GeneratorMatrix, Sparsifier};
use crate::error::{Error, Result};
use crate::numeric::{lcm_of_denominators, Rational};

/// Outcome of an exhaustive `(1 +- eps)` check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub pass: bool,
    pub epsilon: Rational,
    /// Largest `|approx - exact| / exact` over messages with nonzero exact weight.
    pub max_relative_error: Rational,
    /// Number of messages examined.
    pub checked: u64,
    pub witness: Option<Witness>,
}

/// First message whose weights violate the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub message: Vec<u32>,
    pub exact: Rational,
    pub approx: Rational,
}

/// Checks `(1-eps) wt_base(v) <= wt_sp(v|S) <= (1+eps) wt_base(v)` for every
/// distinct codeword `v`.
pub fn verify_sparsifier(
    g: &GeneratorMatrix,
    base: &CoordinateWeights,
    sp: &Sparsifier,
    epsilon: &Rational,
) -> Result<VerificationReport> {
    verify_sparsifier_with(g, base, sp, epsilon, &Enumeration::default())
}

pub fn verify_sparsifier_with(
    g: &GeneratorMatrix,
    base: &CoordinateWeights,
    sp: &Sparsifier,
    epsilon: &Rational,
    scope: &Enumeration,
) -> Result<VerificationReport> {
    if base.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: base.len() });
    }
    let approx = sp.dense_weights(g.n())?;
    compare_weightings(g, base.values(), &approx, epsilon, scope)
}

/// Both weightings scaled to integers over one common denominator.
pub(crate) enum ExactPair {
    Small { exact: Vec<u128>, approx: Vec<u128>, den: BigInt },
    Large { exact: Vec<BigUint>, approx: Vec<BigUint>, den: BigInt },
}

impl ExactPair {
    pub(crate) fn new(exact: &[Rational], approx: &[Rational]) -> Self {
        let den = lcm_of_denominators(exact.iter().chain(approx));
        let scale = |v: &[Rational]| -> Vec<BigUint> {
            v.iter()
                .map(|x| (x * Rational::from_integer(den.clone())).to_integer().magnitude().clone())
                .collect()
        };
        let (exact, approx) = (scale(exact), scale(approx));
        let small = |v: &[BigUint]| -> Option<Vec<u128>> {
            v.iter().map(|x| x.to_u64().map(u128::from)).collect()
        };
        match (small(&exact), small(&approx)) {
            (Some(e), Some(a)) if exact.len() + approx.len() < 1 << 32 => {
                ExactPair::Small { exact: e, approx: a, den }
            }
            _ => ExactPair::Large { exact, approx, den },
        }
    }
}

trait Magnitude: Clone + Ord {
    fn zero() -> Self;
    fn add_assign(&mut self, other: &Self);
    fn abs_diff(&self, other: &Self) -> Self;
    /// Compares `a*b` with `c*d` exactly.
    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering;
    fn to_big(&self) -> BigUint;
    fn from_big(value: &BigUint) -> Option<Self>;
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl Magnitude for u128 {
    fn zero() -> Self {
        0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn abs_diff(&self, other: &Self) -> Self {
        u128::abs_diff(*self, *other)
    }
    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        mul_wide(*a, *b).cmp(&mul_wide(*c, *d))
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn from_big(value: &BigUint) -> Option<Self> {
        value.to_u128()
    }
}

impl Magnitude for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other { self - other } else { other - self }
    }
    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        (a * b).cmp(&(c * d))
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn from_big(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }
}

fn to_rational(num: &BigUint, den: &BigInt) -> Rational {
    Rational::new(BigInt::from_biguint(Sign::Plus, num.clone()), den.clone())
}

/// Exhaustively compares `sum exact_i` and `sum approx_i` over the nonzero
/// coordinates of every codeword in `scope`. Weights must be non-negative.
pub(crate) fn compare_weightings(
    g: &GeneratorMatrix,
    exact: &[Rational],
    approx: &[Rational],
    epsilon: &Rational,
    scope: &Enumeration,
) -> Result<VerificationReport> {
    if exact.len() != g.n() || approx.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: exact.len().min(approx.len()) });
    }
    if epsilon.is_negative() || exact.iter().chain(approx).any(|w| w.is_negative()) {
        return Err(Error::InvalidParameter("weights and epsilon must be non-negative".into()));
    }
    let e = epsilon.numer().magnitude().clone();
    let f = epsilon.denom().magnitude().clone();
    match ExactPair::new(exact, approx) {
        ExactPair::Small { exact, approx, den } => {
            match (u128::from_big(&e), u128::from_big(&f)) {
                (Some(es), Some(fs)) => run(g, &exact, &approx, &den, es, fs, epsilon, scope),
                _ => {
                    let big = |v: Vec<u128>| v.into_iter().map(BigUint::from).collect::<Vec<_>>();
                    run(g, &big(exact), &big(approx), &den, e, f, epsilon, scope)
                }
            }
        }
        ExactPair::Large { exact, approx, den } => run(g, &exact, &approx, &den, e, f, epsilon, scope),
    }
}

#[allow(clippy::too_many_arguments)]
fn run<M: Magnitude>(
    g: &GeneratorMatrix,
    exact: &[M],
    approx: &[M],
    den: &BigInt,
    e: M,
    f: M,
    epsilon: &Rational,
    scope: &Enumeration,
) -> Result<VerificationReport> {
    let mut best_num = M::zero();
    let mut best_den: Option<M> = None;
    let mut witness: Option<(Vec<u32>, M, M)> = None;
    let mut checked = 0u64;
    for_each_codeword(g, scope, |msg, cw| {
        checked += 1;
        let mut a = M::zero();
        let mut b = M::zero();
        for (i, &x) in cw.iter().enumerate() {
            if x != 0 {
                a.add_assign(&exact[i]);
                b.add_assign(&approx[i]);
            }
        }
        let diff = a.abs_diff(&b);
        if witness.is_none() && M::cmp_products(&f, &diff, &e, &a) == Ordering::Greater {
            witness = Some((msg.to_vec(), a.clone(), b.clone()));
        }
        if a > M::zero() {
            let better = match &best_den {
                None => true,
                Some(bd) => M::cmp_products(&diff, bd, &best_num, &a) == Ordering::Greater,
            };
            if better {
                best_num = diff;
                best_den = Some(a);
            }
        }
        ControlFlow::Continue(())
    })?;
    let max_relative_error = match best_den {
        None => Rational::zero(),
        Some(bd) => Rational::new(
            BigInt::from_biguint(Sign::Plus, best_num.to_big()),
            BigInt::from_biguint(Sign::Plus, bd.to_big()),
        ),
    };
    Ok(VerificationReport {
        pass: witness.is_none(),
        epsilon: epsilon.clone(),
        max_relative_error,
        checked,
        witness: witness.map(|(message, a, b)| Witness {
            message,
            exact: to_rational(&a.to_big(), den),
            approx: to_rational(&b.to_big(), den),
        }),
    })
}
