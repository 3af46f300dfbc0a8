//! Cayley graphs over F_2^k: Laplacian eigenvalues are twice the weighted
//! weights of generator-code codewords, so sparsifying the generator code
//! sparsifies the spectrum.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::code::{compare_weightings, CoordinateWeights, Enumeration, GeneratorMatrix, VerificationReport};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::numeric::{int, Rational};
use crate::sparsify::{final_code_sparsify, SparsifyParams};

/// Largest supported dimension; vectors are stored as bitmasks.
pub const MAX_DIMENSION: usize = 63;

/// A generator of F_2^k with a positive weight. Bit `j` of `vector` is
/// coordinate `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub vector: u64,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleySpec {
    k: usize,
    generators: Vec<Generator>,
}

impl CayleySpec {
    /// Generators must be nonzero, distinct, and fit in `k` bits.
    pub fn new(k: usize, generators: Vec<Generator>) -> Result<Self> {
        if k == 0 || k > MAX_DIMENSION {
            return Err(Error::InvalidParameter(format!("dimension must lie in 1..={MAX_DIMENSION}")));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.vector == 0 || g.vector >> k != 0 {
                return Err(Error::InvalidParameter(format!("generator {:#b} is zero or exceeds {k} bits", g.vector)));
            }
            if !seen.insert(g.vector) {
                return Err(Error::InvalidParameter(format!("generator {:#b} repeated", g.vector)));
            }
            if !g.weight.is_positive() {
                return Err(Error::InvalidParameter("generator weights must be positive".into()));
            }
        }
        Ok(Self { k, generators })
    }

    pub fn unweighted(k: usize, vectors: &[u64]) -> Result<Self> {
        Self::new(k, vectors.iter().map(|&vector| Generator { vector, weight: Rational::one() }).collect())
    }

    /// `F_2^k` minus zero: the complete graph on `2^k` vertices.
    pub fn complete(k: usize) -> Result<Self> {
        Self::unweighted(k, &(1..(1u64 << k)).collect::<Vec<_>>())
    }

    /// Standard basis: the hypercube graph.
    pub fn hypercube(k: usize) -> Result<Self> {
        Self::unweighted(k, &(0..k).map(|j| 1u64 << j).collect::<Vec<_>>())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// One row per generator, weights carried over.
pub fn generator_code(spec: &CayleySpec) -> (GeneratorMatrix, CoordinateWeights) {
    let field = PrimeField::new(2).expect("2 is prime");
    let entries = spec
        .generators
        .iter()
        .flat_map(|g| (0..spec.k).map(move |j| ((g.vector >> j) & 1) as u32))
        .collect();
    let matrix = GeneratorMatrix::new(field, spec.len(), spec.k, entries).expect("sizes agree");
    let weights = CoordinateWeights::new(spec.generators.iter().map(|g| g.weight.clone()).collect()).expect("positive");
    (matrix, weights)
}

/// Eigenvalue for every character `x` (index = bitmask of `x`), computed as
/// `2 wt_w(G x)` and as `sum_r w_r (1 - (-1)^<x, r>)`; the two must agree.
pub fn laplacian_spectrum(spec: &CayleySpec) -> Result<Vec<Rational>> {
    let budget = Enumeration::default().budget;
    if spec.k >= 64 || (1u64 << spec.k) > budget {
        return Err(Error::BudgetExceeded { required: format!("2^{}", spec.k), budget });
    }
    let (code, weights) = generator_code(spec);
    let mut spectrum = Vec::with_capacity(1 << spec.k);
    let mut message = vec![0u32; spec.k];
    for x in 0..(1u64 << spec.k) {
        for (j, m) in message.iter_mut().enumerate() {
            *m = ((x >> j) & 1) as u32;
        }
        let codeword = code.encode(&message)?;
        let via_code = int(2) * crate::code::weight(&codeword, Some(&weights))?;
        let via_characters = spec.generators.iter().fold(Rational::zero(), |acc, g| {
            let chi = if (x & g.vector).count_ones() % 2 == 0 { Rational::one() } else { -Rational::one() };
            acc + &g.weight * (Rational::one() - chi)
        });
        if via_code != via_characters {
            return Err(Error::InternalInconsistency(format!("eigenvalue formulas disagree at x = {x:#b}")));
        }
        spectrum.push(via_code);
    }
    Ok(spectrum)
}

/// Dense Laplacian `D - A` indexed by vertex bitmask.
pub fn laplacian_matrix(spec: &CayleySpec) -> Result<Vec<Vec<Rational>>> {
    if spec.k > 12 {
        return Err(Error::BudgetExceeded { required: format!("4^{}", spec.k), budget: 1 << 24 });
    }
    let size = 1usize << spec.k;
    let mut l = vec![vec![Rational::zero(); size]; size];
    for v in 0..size {
        for g in &spec.generators {
            let u = v ^ g.vector as usize;
            l[v][v] += &g.weight;
            l[v][u] -= &g.weight;
        }
    }
    Ok(l)
}

/// Weighted generator subset whose eigenvalues are all within `1 +- eps`.
pub fn sparsify_cayley(spec: &CayleySpec, params: &SparsifyParams) -> Result<CayleySpec> {
    if spec.is_empty() {
        return Ok(spec.clone());
    }
    let (code, weights) = generator_code(spec);
    let sp = final_code_sparsify(&code, &weights, params)?;
    let generators = sp
        .coords()
        .iter()
        .zip(sp.weights())
        .map(|(&i, w)| Generator { vector: spec.generators[i].vector, weight: w.clone() })
        .collect();
    CayleySpec::new(spec.k, generators)
}

/// Exhaustive eigenvalue comparison over all characters.
pub fn verify_spectrum(spec: &CayleySpec, sparse: &CayleySpec, epsilon: &Rational) -> Result<VerificationReport> {
    if spec.k != sparse.k {
        return Err(Error::DimensionMismatch { expected: spec.k, found: sparse.k });
    }
    let field = PrimeField::new(2).expect("2 is prime");
    let both: Vec<&Generator> = spec.generators.iter().chain(&sparse.generators).collect();
    let entries = both.iter().flat_map(|g| (0..spec.k).map(move |j| ((g.vector >> j) & 1) as u32)).collect();
    let code = GeneratorMatrix::new(field, both.len(), spec.k, entries)?;
    let exact: Vec<Rational> = spec
        .generators
        .iter()
        .map(|g| g.weight.clone())
        .chain(sparse.generators.iter().map(|_| Rational::zero()))
        .collect();
    let approx: Vec<Rational> = spec
        .generators
        .iter()
        .map(|_| Rational::zero())
        .chain(sparse.generators.iter().map(|g| g.weight.clone()))
        .collect();
    compare_weightings(&code, &exact, &approx, epsilon, &Enumeration::boolean())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn k4_spectrum() {
        let spec = CayleySpec::unweighted(2, &[0b01, 0b10, 0b11]).unwrap();
        assert_eq!(laplacian_spectrum(&spec).unwrap(), vec![int(0), int(4), int(4), int(4)]);
    }

    #[test]
    fn matching_spectrum() {
        // generator 10: bit 0 set
        let spec = CayleySpec::unweighted(2, &[0b01]).unwrap();
        let mut s = laplacian_spectrum(&spec).unwrap();
        s.sort();
        assert_eq!(s, vec![int(0), int(0), int(2), int(2)]);
    }

    #[test]
    fn hypercube_code_is_identity() {
        let (code, _) = generator_code(&CayleySpec::hypercube(4).unwrap());
        assert_eq!(code, GeneratorMatrix::identity(PrimeField::new(2).unwrap(), 4));
    }

    #[test]
    fn characters_are_eigenvectors() {
        let spec = CayleySpec::new(
            3,
            vec![
                Generator { vector: 0b011, weight: rat(3, 2) },
                Generator { vector: 0b100, weight: int(2) },
                Generator { vector: 0b111, weight: rat(1, 3) },
            ],
        )
        .unwrap();
        let l = laplacian_matrix(&spec).unwrap();
        let spectrum = laplacian_spectrum(&spec).unwrap();
        for x in 0..8usize {
            let chi: Vec<Rational> =
                (0..8usize).map(|v| if (x & v).count_ones() % 2 == 0 { int(1) } else { -int(1) }).collect();
            for v in 0..8 {
                let lv = (0..8).fold(Rational::zero(), |acc, u| acc + &l[v][u] * &chi[u]);
                assert_eq!(lv, &spectrum[x] * &chi[v]);
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(CayleySpec::unweighted(2, &[0]).is_err());
        assert!(CayleySpec::unweighted(2, &[1, 1]).is_err());
        assert!(CayleySpec::unweighted(2, &[4]).is_err());
    }

    #[test]
    fn single_generator_kept() {
        let spec = CayleySpec::unweighted(3, &[0b101]).unwrap();
        let sp = sparsify_cayley(&spec, &SparsifyParams::new(rat(1, 2), 1).unwrap()).unwrap();
        assert_eq!(sp, spec);
        assert!(verify_spectrum(&spec, &sp, &rat(0, 1)).unwrap().pass);
    }
}
