//! Exhaustive codeword enumeration.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::GeneratorMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Which messages generate the codewords being enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MessageDomain {
    /// All of F_p^k, each distinct codeword visited once.
    Full,
    /// Messages in {0,1}^k. Codewords may repeat.
    Boolean,
    /// Messages `(1, x)` with `x` in {0,1}^(k-1). Codewords may repeat.
    BooleanAffine,
}

/// Message domain plus the largest number of messages allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Enumeration {
    pub domain: MessageDomain,
    pub budget: u64,
}

impl Default for Enumeration {
    fn default() -> Self {
        Self { domain: MessageDomain::Full, budget: DEFAULT_BUDGET }
    }
}

impl Enumeration {
    pub fn boolean() -> Self {
        Self { domain: MessageDomain::Boolean, ..Self::default() }
    }

    pub fn boolean_affine() -> Self {
        Self { domain: MessageDomain::BooleanAffine, ..Self::default() }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Self { budget, ..self }
    }

    /// Number of messages the domain visits for `g`.
    pub fn message_count(&self, g: &GeneratorMatrix) -> Result<u64> {
        let exceeded = |required: String| Error::BudgetExceeded { required, budget: self.budget };
        let count = match self.domain {
            MessageDomain::Full => {
                let p = g.field().modulus() as u128;
                let r = g.rank() as u32;
                p.checked_pow(r)
                    .filter(|&c| c <= self.budget as u128)
                    .ok_or_else(|| exceeded(format!("{p}^{r}")))? as u64
            }
            MessageDomain::Boolean | MessageDomain::BooleanAffine => {
                let free = if self.domain == MessageDomain::Boolean {
                    g.k()
                } else {
                    g.k().saturating_sub(1)
                };
                if free >= 64 || (1u64 << free) > self.budget {
                    return Err(exceeded(format!("2^{free}")));
                }
                1u64 << free
            }
        };
        Ok(count)
    }
}

/// Calls `visit(message, codeword)` for every message of the domain.
/// Returns `Ok(false)` when the visitor stopped early.
pub fn for_each_codeword<F>(g: &GeneratorMatrix, scope: &Enumeration, mut visit: F) -> Result<bool>
where
    F: FnMut(&[u32], &[u32]) -> ControlFlow<()>,
{
    scope.message_count(g)?;
    let field = g.field();
    let n = g.n();
    let k = g.k();
    let mut msg = vec![0u32; k];
    let mut cw = vec![0u32; n];
    let add = |cw: &mut [u32], col: &[u32]| {
        for (x, &c) in cw.iter_mut().zip(col) {
            *x = field.add(*x, c);
        }
    };
    let sub = |cw: &mut [u32], col: &[u32]| {
        for (x, &c) in cw.iter_mut().zip(col) {
            *x = field.sub(*x, c);
        }
    };
    match scope.domain {
        MessageDomain::Full => {
            let basis = g.independent_columns();
            let columns: Vec<Vec<u32>> = basis.iter().map(|&j| g.column(j)).collect();
            let p = field.modulus();
            let mut digits = vec![0u32; basis.len()];
            if visit(&msg, &cw).is_break() {
                return Ok(false);
            }
            loop {
                let mut t = 0;
                loop {
                    if t == basis.len() {
                        return Ok(true);
                    }
                    digits[t] += 1;
                    add(&mut cw, &columns[t]);
                    if digits[t] == p {
                        digits[t] = 0;
                        msg[basis[t]] = 0;
                        t += 1;
                        continue;
                    }
                    msg[basis[t]] = digits[t];
                    break;
                }
                if visit(&msg, &cw).is_break() {
                    return Ok(false);
                }
            }
        }
        MessageDomain::Boolean | MessageDomain::BooleanAffine => {
            let offset = usize::from(scope.domain == MessageDomain::BooleanAffine);
            if offset == 1 && k > 0 {
                msg[0] = 1;
                add(&mut cw, &g.column(0));
            }
            let columns: Vec<Vec<u32>> = (offset..k).map(|j| g.column(j)).collect();
            if visit(&msg, &cw).is_break() {
                return Ok(false);
            }
            let free = columns.len();
            for step in 1u64..(1u64 << free) {
                let t = step.trailing_zeros() as usize;
                if msg[t + offset] == 0 {
                    msg[t + offset] = 1;
                    add(&mut cw, &columns[t]);
                } else {
                    msg[t + offset] = 0;
                    sub(&mut cw, &columns[t]);
                }
                if visit(&msg, &cw).is_break() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn full_domain_visits_each_codeword_once_with_matching_message() {
        let f3 = PrimeField::new(3).unwrap();
        let g = GeneratorMatrix::from_rows(f3, 3, &[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 2]]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for_each_codeword(&g, &Enumeration::default(), |m, c| {
            assert_eq!(g.encode(m).unwrap(), c);
            assert!(seen.insert(c.to_vec()));
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen.len(), 3usize.pow(g.rank() as u32));
    }

    #[test]
    fn boolean_domains_visit_every_binary_message() {
        let f5 = PrimeField::new(5).unwrap();
        let g = GeneratorMatrix::from_rows(f5, 3, &[vec![1, 1, 3], vec![4, 0, 1]]).unwrap();
        let mut messages = Vec::new();
        for_each_codeword(&g, &Enumeration::boolean(), |m, c| {
            assert_eq!(g.encode(m).unwrap(), c);
            messages.push(m.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        messages.sort();
        messages.dedup();
        assert_eq!(messages.len(), 8);
        let mut affine = 0;
        for_each_codeword(&g, &Enumeration::boolean_affine(), |m, c| {
            assert_eq!(m[0], 1);
            assert_eq!(g.encode(m).unwrap(), c);
            affine += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(affine, 4);
    }

    #[test]
    fn budget_is_enforced() {
        let g = GeneratorMatrix::identity(PrimeField::new(2).unwrap(), 10);
        let scope = Enumeration::default().with_budget(512);
        assert!(matches!(
            for_each_codeword(&g, &scope, |_, _| ControlFlow::Continue(())),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn early_stop() {
        let g = GeneratorMatrix::identity(PrimeField::new(2).unwrap(), 4);
        let mut count = 0;
        let done = for_each_codeword(&g, &Enumeration::default(), |_, _| {
            count += 1;
            if count == 3 { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
        })
        .unwrap();
        assert!(!done);
        assert_eq!(count, 3);
    }
}
