//! Affine projections to AND and linear representations of predicates.

use std::fmt;

use super::{assignment_bits, AffinePredicate, Predicate};
use crate::error::{Error, Result};

/// Largest arity searched for projections (`6^r` candidates).
pub const MAX_PROJECTION_ARITY: usize = 8;

/// Primes scanned for linear representations, in order.
pub const LINEAR_SEARCH_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Substitution for one predicate input in terms of fresh variables `x, y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Zero,
    One,
    X,
    NotX,
    Y,
    NotY,
}

impl Literal {
    pub const ALL: [Literal; 6] = [Literal::Zero, Literal::One, Literal::X, Literal::NotX, Literal::Y, Literal::NotY];

    pub fn eval(self, x: bool, y: bool) -> bool {
        match self {
            Literal::Zero => false,
            Literal::One => true,
            Literal::X => x,
            Literal::NotX => !x,
            Literal::Y => y,
            Literal::NotY => !y,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Literal::Zero => "0",
            Literal::One => "1",
            Literal::X => "x",
            Literal::NotX => "!x",
            Literal::Y => "y",
            Literal::NotY => "!y",
        })
    }
}

/// First substitution, in lexicographic order over [`Literal::ALL`], under
/// which `P` equals `x AND y` on all four inputs.
pub fn has_affine_projection_to_and(p: &Predicate) -> Result<Option<Vec<Literal>>> {
    let r = p.arity();
    if r > MAX_PROJECTION_ARITY {
        return Err(Error::ArityTooLarge(r));
    }
    let mut digits = vec![0usize; r];
    let mut inputs = vec![false; r];
    loop {
        let matches = [(false, false), (false, true), (true, false), (true, true)].iter().all(|&(x, y)| {
            for (slot, &d) in inputs.iter_mut().zip(&digits) {
                *slot = Literal::ALL[d].eval(x, y);
            }
            p.eval(&inputs) == (x && y)
        });
        if matches {
            return Ok(Some(digits.iter().map(|&d| Literal::ALL[d]).collect()));
        }
        // odometer, last position fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < Literal::ALL.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// First `(p, a_0, ..., a_r)` with `p` in [`LINEAR_SEARCH_PRIMES`] and
/// coefficients in lexicographic order whose zeros on `{0,1}^r` are exactly
/// the unsatisfying assignments of `P`.
pub fn find_linear_representation(pred: &Predicate) -> Option<AffinePredicate> {
    let r = pred.arity();
    if r > MAX_PROJECTION_ARITY {
        return None;
    }
    let assignments: Vec<Vec<bool>> = (0..1usize << r).map(|i| assignment_bits(i, r)).collect();
    for &p in &LINEAR_SEARCH_PRIMES {
        let mut coeffs = vec![0u64; r + 1];
        loop {
            let candidate = AffinePredicate::new(p, &coeffs).expect("valid prime");
            if assignments.iter().all(|a| candidate.eval(a) == pred.eval(a)) {
                return Some(candidate);
            }
            let mut pos = r + 1;
            let exhausted = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                coeffs[pos] += 1;
                if coeffs[pos] < p {
                    break false;
                }
                coeffs[pos] = 0;
            };
            if exhausted {
                break;
            }
        }
    }
    None
}

/// Verdict for a ternary predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TernaryClassification {
    SparsifiableLinear(AffinePredicate),
    RequiresQuadratic(Vec<Literal>),
}

/// Exactly one of a linear representation and a projection to AND exists
/// for every ternary predicate; anything else is reported as an error.
pub fn ternary_classify(p: &Predicate) -> Result<TernaryClassification> {
    if p.arity() != 3 {
        return Err(Error::InvalidParameter(format!("expected a ternary predicate, got arity {}", p.arity())));
    }
    let projection = has_affine_projection_to_and(p)?;
    let linear = find_linear_representation(p);
    match (projection, linear) {
        (Some(pi), None) => Ok(TernaryClassification::RequiresQuadratic(pi)),
        (None, Some(a)) => Ok(TernaryClassification::SparsifiableLinear(a)),
        (Some(_), Some(_)) => {
            Err(Error::InternalInconsistency(format!("{p} has both a projection to AND and a linear form")))
        }
        (None, None) => Err(Error::InternalInconsistency(format!("{p} has neither a projection to AND nor a linear form"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_projects_to_itself() {
        let and2 = Predicate::from_table_str("1000").unwrap();
        assert_eq!(has_affine_projection_to_and(&and2).unwrap(), Some(vec![Literal::X, Literal::Y]));
    }

    #[test]
    fn or3_has_no_projection() {
        let or3 = Predicate::from_table_str("11111110").unwrap();
        assert_eq!(has_affine_projection_to_and(&or3).unwrap(), None);
    }

    #[test]
    fn two_satisfying_assignments_project() {
        let p = Predicate::from_fn(3, |b| !b[0] && !b[1]).unwrap();
        let pi = has_affine_projection_to_and(&p).unwrap().unwrap();
        assert_eq!(&pi[..2], &[Literal::NotX, Literal::NotY]);
    }

    #[test]
    fn linear_representations() {
        let p = Predicate::from_unsatisfying(3, &["000", "011"]).unwrap();
        let a = find_linear_representation(&p).unwrap();
        assert_eq!((a.modulus(), a.coefficients()), (5, &[0, 1, 2, 3][..]));
        let p = Predicate::from_unsatisfying(3, &["000", "111"]).unwrap();
        let a = find_linear_representation(&p).unwrap();
        assert_eq!((a.modulus(), a.coefficients()), (3, &[0, 1, 1, 1][..]));
        let p = Predicate::from_unsatisfying(3, &["000", "011", "101", "110"]).unwrap();
        let a = find_linear_representation(&p).unwrap();
        assert_eq!((a.modulus(), a.coefficients()), (2, &[0, 1, 1, 1][..]));
    }

    #[test]
    fn classification_examples() {
        let p = Predicate::from_unsatisfying(3, &["000", "001", "111"]).unwrap();
        assert!(matches!(ternary_classify(&p).unwrap(), TernaryClassification::RequiresQuadratic(_)));
        let p = Predicate::from_unsatisfying(3, &["000", "011"]).unwrap();
        match ternary_classify(&p).unwrap() {
            TernaryClassification::SparsifiableLinear(a) => assert_eq!(a.modulus(), 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arity_limit() {
        let p = Predicate::new(9, vec![false; 512]).unwrap();
        assert!(matches!(has_affine_projection_to_and(&p), Err(Error::ArityTooLarge(9))));
    }
}
