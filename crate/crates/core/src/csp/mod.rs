//! Constraint satisfaction: affine predicates reduce to codes, and ternary
//! Boolean predicates split into linearly sparsifiable ones and ones with an
//! affine projection to AND.

mod classify;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::code::{CoordinateWeights, Witness, Enumeration, GeneratorMatrix, VerificationReport};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::numeric::Rational;
use crate::sparsify::{final_code_sparsify, SparsifyParams};

pub use classify::{
    find_linear_representation, has_affine_projection_to_and, ternary_classify, Literal, TernaryClassification,
    LINEAR_SEARCH_PRIMES, MAX_PROJECTION_ARITY,
};

/// Largest arity accepted by [`Predicate`].
pub const MAX_ARITY: usize = 16;

/// Boolean predicate given by its truth table. Entry `i` is the value on the
/// assignment whose bits, read with the first input most significant, spell `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    arity: usize,
    table: Vec<bool>,
}

impl Predicate {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if table.len() != 1 << arity {
            return Err(Error::DimensionMismatch { expected: 1 << arity, found: table.len() });
        }
        Ok(Self { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let table = (0..1usize << arity).map(|i| f(&assignment_bits(i, arity))).collect();
        Self::new(arity, table)
    }

    /// Predicate whose unsatisfying assignments are exactly `unsat`, given as
    /// bit strings such as `"011"`.
    pub fn from_unsatisfying(arity: usize, unsat: &[&str]) -> Result<Self> {
        let mut table = vec![true; 1 << arity];
        for s in unsat {
            if s.len() != arity || !s.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidParameter(format!("bad assignment {s:?}")));
            }
            table[usize::from_str_radix(s, 2).expect("binary")] = false;
        }
        Self::new(arity, table)
    }

    /// Parses a table written most significant entry first, so `"11111110"`
    /// is the three-input OR.
    pub fn from_table_str(bits: &str) -> Result<Self> {
        let len = bits.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("table length {len} is not a power of two")));
        }
        let arity = len.trailing_zeros() as usize;
        let mut table = vec![false; len];
        for (j, b) in bits.bytes().enumerate() {
            table[len - 1 - j] = match b {
                b'0' => false,
                b'1' => true,
                _ => return Err(Error::InvalidParameter(format!("table character {:?} at {j}", b as char))),
            };
        }
        Self::new(arity, table)
    }

    pub fn to_table_str(&self) -> String {
        self.table.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        self.table[assignment_index(inputs)]
    }

    pub fn satisfying_count(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    /// Inputs reordered: input `i` of the result is input `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.arity, |b| {
            let mut orig = vec![false; self.arity];
            for (i, &pi) in perm.iter().enumerate() {
                orig[pi] = b[i];
            }
            self.eval(&orig)
        })
        .expect("same arity")
    }

    /// Inputs flipped where `mask` is set.
    pub fn negated_inputs(&self, mask: &[bool]) -> Self {
        Self::from_fn(self.arity, |b| {
            let flipped: Vec<bool> = b.iter().zip(mask).map(|(&x, &m)| x ^ m).collect();
            self.eval(&flipped)
        })
        .expect("same arity")
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table_str())
    }
}

pub(crate) fn assignment_bits(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| (index >> (arity - 1 - i)) & 1 == 1).collect()
}

pub(crate) fn assignment_index(inputs: &[bool]) -> usize {
    inputs.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Satisfied unless `a_0 + sum a_i b_i = 0` over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePredicate {
    field: PrimeField,
    coefficients: Vec<u32>,
}

impl AffinePredicate {
    /// `coefficients = [a_0, a_1, ..., a_r]`, reduced mod `p`.
    pub fn new(p: u64, coefficients: &[u64]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("an affine predicate needs a constant term".into()));
        }
        if coefficients.len() - 1 > MAX_ARITY {
            return Err(Error::ArityTooLarge(coefficients.len() - 1));
        }
        let coefficients = coefficients.iter().map(|&a| (a % p) as u32).collect();
        Ok(Self { field, coefficients })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u32 {
        self.field.modulus()
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `a_0 + sum a_i b_i` over F_p.
    pub fn form(&self, inputs: &[bool]) -> u32 {
        inputs
            .iter()
            .zip(&self.coefficients[1..])
            .filter(|(&b, _)| b)
            .fold(self.coefficients[0], |acc, (_, &a)| self.field.add(acc, a))
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        self.form(inputs) != 0
    }

    pub fn to_predicate(&self) -> Predicate {
        Predicate::from_fn(self.arity(), |b| self.eval(b)).expect("arity checked")
    }
}

/// Predicate attached to a constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintPredicate {
    Affine(AffinePredicate),
    Table(Predicate),
}

impl ConstraintPredicate {
    pub fn arity(&self) -> usize {
        match self {
            Self::Affine(a) => a.arity(),
            Self::Table(t) => t.arity(),
        }
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        match self {
            Self::Affine(a) => a.eval(inputs),
            Self::Table(t) => t.eval(inputs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub predicate: ConstraintPredicate,
    pub variables: Vec<usize>,
    pub weight: Rational,
}

/// Weighted constraints over `k` Boolean variables. A constraint may repeat
/// a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CspInstance {
    k: usize,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(k: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            if c.variables.len() != c.predicate.arity() {
                return Err(Error::DimensionMismatch { expected: c.predicate.arity(), found: c.variables.len() });
            }
            if let Some(&v) = c.variables.iter().find(|&&v| v >= k) {
                return Err(Error::IndexOutOfRange { index: v, bound: k });
            }
            if !c.weight.is_positive() {
                return Err(Error::InvalidParameter("constraint weights must be positive".into()));
            }
        }
        Ok(Self { k, constraints })
    }

    /// XOR of every pair of variables: satisfied weight is the cut size of
    /// the complete graph.
    pub fn xor2_complete(k: usize) -> Self {
        let xor = AffinePredicate::new(2, &[0, 1, 1]).expect("valid");
        let constraints = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| Constraint {
                predicate: ConstraintPredicate::Affine(xor.clone()),
                variables: vec![i, j],
                weight: Rational::one(),
            })
            .collect();
        Self { k, constraints }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn satisfied_weight(&self, assignment: &[bool]) -> Rational {
        self.constraints
            .iter()
            .filter(|c| {
                let inputs: Vec<bool> = c.variables.iter().map(|&v| assignment[v]).collect();
                c.predicate.eval(&inputs)
            })
            .fold(Rational::zero(), |acc, c| acc + &c.weight)
    }

    /// Common prime of all constraints, which must all be affine.
    pub fn affine_modulus(&self) -> Result<Option<u32>> {
        let mut p = None;
        for (i, c) in self.constraints.iter().enumerate() {
            let ConstraintPredicate::Affine(a) = &c.predicate else {
                return Err(Error::NonAffinePredicate(i));
            };
            match p {
                None => p = Some(a.modulus()),
                Some(q) if q != a.modulus() => return Err(Error::MixedPrimes(q, a.modulus())),
                Some(_) => {}
            }
        }
        Ok(p)
    }
}

/// Code over F_p with column 0 for the homogenizing variable `x_0` and
/// column `i + 1` for variable `i`; the satisfied weight at `x` equals
/// `wt_w(G (1, x))`.
pub fn affine_csp_to_code(instance: &CspInstance) -> Result<(GeneratorMatrix, CoordinateWeights)> {
    let p = instance.affine_modulus()?.ok_or(Error::EmptyCode)?;
    let field = PrimeField::new(p as u64)?;
    let cols = instance.k + 1;
    let mut entries = vec![0u32; instance.len() * cols];
    for (i, c) in instance.constraints.iter().enumerate() {
        let ConstraintPredicate::Affine(a) = &c.predicate else { unreachable!("checked affine") };
        let row = &mut entries[i * cols..(i + 1) * cols];
        row[0] = a.coefficients()[0];
        for (&v, &coef) in c.variables.iter().zip(&a.coefficients()[1..]) {
            row[v + 1] = field.add(row[v + 1], coef);
        }
    }
    let matrix = GeneratorMatrix::new(field, instance.len(), cols, entries)?;
    let weights = CoordinateWeights::new(instance.constraints.iter().map(|c| c.weight.clone()).collect())?;
    Ok((matrix, weights))
}

/// Weighted sub-instance whose satisfied weight is within `1 +- eps` on
/// every Boolean assignment.
pub fn sparsify_affine_csp(instance: &CspInstance, params: &SparsifyParams) -> Result<CspInstance> {
    if instance.is_empty() {
        return Ok(instance.clone());
    }
    let (code, weights) = affine_csp_to_code(instance)?;
    let full = Enumeration::default();
    let scope = if full.message_count(&code).is_ok() { full } else { Enumeration::boolean_affine() };
    let sp = final_code_sparsify(&code, &weights, &params.clone().with_scope(scope))?;
    let constraints = sp
        .coords()
        .iter()
        .zip(sp.weights())
        .map(|(&i, w)| Constraint { weight: w.clone(), ..instance.constraints[i].clone() })
        .collect();
    CspInstance::new(instance.k, constraints)
}

/// Largest `k` accepted by [`verify_csp_sparsifier`].
pub const MAX_VERIFY_VARIABLES: usize = 24;

/// Exhaustive comparison of satisfied weights over all `2^k` assignments by
/// direct evaluation of the predicates.
pub fn verify_csp_sparsifier(instance: &CspInstance, sparse: &CspInstance, epsilon: &Rational) -> Result<VerificationReport> {
    if instance.k != sparse.k {
        return Err(Error::DimensionMismatch { expected: instance.k, found: sparse.k });
    }
    if instance.k > MAX_VERIFY_VARIABLES {
        return Err(Error::BudgetExceeded { required: format!("2^{}", instance.k), budget: 1 << MAX_VERIFY_VARIABLES });
    }
    let mut max_err = Rational::zero();
    let mut witness = None;
    let mut checked = 0;
    for x in 0..(1usize << instance.k) {
        let assignment: Vec<bool> = (0..instance.k).map(|i| (x >> i) & 1 == 1).collect();
        let exact = instance.satisfied_weight(&assignment);
        let approx = sparse.satisfied_weight(&assignment);
        checked += 1;
        let violated = if exact.is_zero() {
            !approx.is_zero()
        } else {
            let err = (&approx - &exact).abs() / &exact;
            let bad = err > *epsilon;
            if err > max_err {
                max_err = err;
            }
            bad
        };
        if violated && witness.is_none() {
            witness = Some(Witness { message: assignment.iter().map(|&b| b as u32).collect(), exact, approx });
        }
    }
    Ok(VerificationReport { pass: witness.is_none(), epsilon: epsilon.clone(), max_relative_error: max_err, checked, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn affine(p: u64, a: &[u64], vars: &[usize]) -> Constraint {
        Constraint {
            predicate: ConstraintPredicate::Affine(AffinePredicate::new(p, a).unwrap()),
            variables: vars.to_vec(),
            weight: int(1),
        }
    }

    #[test]
    fn table_strings_are_msb_first() {
        let or3 = Predicate::from_table_str("11111110").unwrap();
        assert!(!or3.eval(&[false, false, false]));
        assert!(or3.eval(&[false, false, true]));
        assert_eq!(or3.to_table_str(), "11111110");
        assert_eq!(Predicate::from_unsatisfying(3, &["000"]).unwrap(), or3);
    }

    #[test]
    fn three_xor_row() {
        let inst = CspInstance::new(4, vec![affine(2, &[0, 1, 1, 1], &[0, 1, 2])]).unwrap();
        let (code, _) = affine_csp_to_code(&inst).unwrap();
        assert_eq!(code.row(0), &[0, 1, 1, 1, 0]);
    }

    #[test]
    fn repeated_inequality() {
        let inst = CspInstance::new(2, vec![affine(2, &[0, 1, 1], &[0, 1]), affine(2, &[0, 1, 1], &[0, 1])]).unwrap();
        let (code, w) = affine_csp_to_code(&inst).unwrap();
        assert_eq!(code.row(0), code.row(1));
        for x in 0..4u32 {
            let msg = [1, x & 1, x >> 1];
            let a = [x & 1 == 1, x >> 1 == 1];
            let expected = if a[0] != a[1] { int(2) } else { int(0) };
            assert_eq!(inst.satisfied_weight(&a), expected);
            assert_eq!(crate::code::weight(&code.encode(&msg).unwrap(), Some(&w)).unwrap(), expected);
        }
    }

    #[test]
    fn repeated_variable_coefficients_add() {
        let inst = CspInstance::new(2, vec![affine(3, &[1, 1, 1], &[1, 1])]).unwrap();
        let (code, _) = affine_csp_to_code(&inst).unwrap();
        assert_eq!(code.row(0), &[1, 0, 2]);
    }

    #[test]
    fn mixed_and_table_errors() {
        let inst = CspInstance::new(2, vec![affine(2, &[0, 1, 1], &[0, 1]), affine(3, &[0, 1, 1], &[0, 1])]).unwrap();
        assert!(matches!(affine_csp_to_code(&inst), Err(Error::MixedPrimes(2, 3))));
        let table = Constraint {
            predicate: ConstraintPredicate::Table(Predicate::from_table_str("0110").unwrap()),
            variables: vec![0, 1],
            weight: int(1),
        };
        let inst = CspInstance::new(2, vec![table]).unwrap();
        assert!(matches!(affine_csp_to_code(&inst), Err(Error::NonAffinePredicate(0))));
    }

    #[test]
    fn single_constraint_kept() {
        let inst = CspInstance::new(3, vec![affine(2, &[1, 1, 1], &[0, 2])]).unwrap();
        let sp = sparsify_affine_csp(&inst, &SparsifyParams::new(rat(1, 2), 9).unwrap()).unwrap();
        assert_eq!(sp, inst);
        assert!(verify_csp_sparsifier(&inst, &sp, &rat(0, 1)).unwrap().pass);
    }

    #[test]
    fn xor2_complete_counts() {
        assert_eq!(CspInstance::xor2_complete(8).len(), 28);
    }
}
