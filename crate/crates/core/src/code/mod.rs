//! Linear codes given by generator matrices. Codewords are the column span:
//! `Gx` for messages `x` in F_p^k.

mod enumerate;
pub(crate) mod linalg;
mod verify;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::numeric::{floor_to_biguint, int, Rational};

pub use enumerate::{for_each_codeword, Enumeration, MessageDomain, DEFAULT_BUDGET};
pub use verify::{verify_sparsifier, verify_sparsifier_with, VerificationReport, Witness};
pub(crate) use verify::compare_weightings;

/// An `n x k` matrix over a prime field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorMatrix {
    field: PrimeField,
    n: usize,
    k: usize,
    entries: Vec<u32>,
}

impl GeneratorMatrix {
    pub fn new(field: PrimeField, n: usize, k: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * k {
            return Err(Error::DimensionMismatch { expected: n * k, found: entries.len() });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= field.modulus()) {
            return Err(Error::InvalidParameter(format!(
                "entry {bad} is not reduced modulo {}",
                field.modulus()
            )));
        }
        Ok(Self { field, n, k, entries })
    }

    /// Builds from rows, reducing each entry modulo p.
    pub fn from_rows(field: PrimeField, k: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: row.len() });
            }
            entries.extend(row.iter().map(|&v| (v % field.modulus() as u64) as u32));
        }
        Ok(Self { field, n: rows.len(), k, entries })
    }

    pub fn zero(field: PrimeField, n: usize, k: usize) -> Self {
        Self { field, n, k, entries: vec![0; n * k] }
    }

    pub fn identity(field: PrimeField, k: usize) -> Self {
        let mut m = Self::zero(field, k, k);
        for i in 0..k {
            m.entries[i * k + i] = 1;
        }
        m
    }

    /// The length-`n` repetition code: a single all-ones column.
    pub fn repetition(field: PrimeField, n: usize) -> Self {
        Self { field, n, k: 1, entries: vec![1; n] }
    }

    /// Systematic generator of the binary [7,4] Hamming code.
    pub fn hamming74() -> Self {
        let rows: Vec<Vec<u64>> = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 0, 1],
            vec![1, 0, 1, 1],
            vec![0, 1, 1, 1],
        ];
        Self::from_rows(PrimeField::new(2).expect("2 is prime"), 4, &rows).expect("well formed")
    }

    /// Binary simplex code of dimension `k`: one row per nonzero vector of F_2^k.
    pub fn simplex(k: usize) -> Self {
        let field = PrimeField::new(2).expect("2 is prime");
        let mut entries = Vec::new();
        for v in 1u64..(1 << k) {
            entries.extend((0..k).map(|j| ((v >> j) & 1) as u32));
        }
        Self { field, n: (1 << k) - 1, k, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.k + col]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|&x| x == 0)
    }

    /// Builds a matrix from columns of equal length.
    pub fn from_columns(field: PrimeField, n: usize, columns: &[Vec<u32>]) -> Self {
        let k = columns.len();
        let mut entries = vec![0; n * k];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * k + j] = v;
            }
        }
        Self { field, n, k, entries }
    }

    pub fn encode(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: x.len() });
        }
        let p = self.field.modulus() as u64;
        Ok((0..self.n)
            .map(|i| {
                let s = self.row(i).iter().zip(x).fold(0u64, |acc, (&g, &xi)| {
                    (acc + g as u64 * (xi as u64 % p)) % p
                });
                s as u32
            })
            .collect())
    }

    /// Rows in `coords`, in the given order.
    pub fn puncture(&self, coords: &[usize]) -> Result<Self> {
        let mut entries = Vec::with_capacity(coords.len() * self.k);
        for &i in coords {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, bound: self.n });
            }
            entries.extend_from_slice(self.row(i));
        }
        Ok(Self { field: self.field, n: coords.len(), k: self.k, entries })
    }

    /// Columns in `cols`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let columns: Vec<Vec<u32>> = cols.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.field, self.n, &columns)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.field, self.n, self.k, &self.entries)
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        linalg::kernel_basis(self.field, self.n, self.k, &self.entries)
    }

    /// Lexicographically first maximal set of independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        linalg::rref(self.field, self.n, self.k, &self.entries).1
    }

    /// Whether `c` lies in the column span.
    pub fn contains(&self, c: &[u32]) -> Result<bool> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: c.len() });
        }
        let mut columns: Vec<Vec<u32>> = (0..self.k).map(|j| self.column(j)).collect();
        columns.push(c.to_vec());
        let extended = Self::from_columns(self.field, self.n, &columns);
        Ok(extended.rank() == self.rank())
    }

    /// Indices of rows that are not identically zero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_zero_row(i)).collect()
    }

    /// `rank / |support|`, and 0 for the empty code.
    pub fn density(&self) -> Rational {
        let support = self.support().len();
        if support == 0 {
            return Rational::zero();
        }
        Rational::new((self.rank() as i64).into(), (support as i64).into())
    }

    /// Every distinct codeword, materialized.
    pub fn enumerate_codewords(&self) -> Result<Vec<Vec<u32>>> {
        self.enumerate_codewords_with(&Enumeration::default())
    }

    pub fn enumerate_codewords_with(&self, scope: &Enumeration) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for_each_codeword(self, scope, |_, c| {
            out.push(c.to_vec());
            std::ops::ControlFlow::Continue(())
        })?;
        if scope.domain != MessageDomain::Full {
            out.sort();
            out.dedup();
        }
        Ok(out)
    }

    /// Minimum Hamming weight over nonzero codewords.
    pub fn min_distance(&self) -> Result<usize> {
        if self.rank() == 0 {
            return Err(Error::ZeroCode);
        }
        let mut best = usize::MAX;
        for_each_codeword(self, &Enumeration::default(), |_, c| {
            let w = hamming_weight(c);
            if w > 0 && w < best {
                best = w;
            }
            std::ops::ControlFlow::Continue(())
        })?;
        Ok(best)
    }

    /// Applies `col_b += factor * col_a` in place.
    pub(crate) fn add_column_multiple(&mut self, a: usize, b: usize, factor: u32) {
        if factor == 0 {
            return;
        }
        for i in 0..self.n {
            let v = self.field.mul(factor, self.entries[i * self.k + a]);
            self.entries[i * self.k + b] = self.field.add(self.entries[i * self.k + b], v);
        }
    }

    pub(crate) fn remove_column(&self, a: usize) -> Self {
        let cols: Vec<usize> = (0..self.k).filter(|&j| j != a).collect();
        self.select_columns(&cols)
    }
}

pub fn hamming_weight(c: &[u32]) -> usize {
    c.iter().filter(|&&x| x != 0).count()
}

/// Weighted Hamming weight; unit weights when `w` is `None`.
pub fn weight(c: &[u32], w: Option<&CoordinateWeights>) -> Result<Rational> {
    match w {
        None => Ok(int(hamming_weight(c) as u64)),
        Some(w) => {
            if w.len() != c.len() {
                return Err(Error::DimensionMismatch { expected: c.len(), found: w.len() });
            }
            Ok(c.iter()
                .zip(w.values())
                .filter(|(&x, _)| x != 0)
                .fold(Rational::zero(), |acc, (_, wi)| acc + wi))
        }
    }
}

/// Strictly positive per-coordinate weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordinateWeights {
    w: Vec<Rational>,
}

impl CoordinateWeights {
    pub fn new(w: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = w.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidParameter(format!("weight {bad} is not positive")));
        }
        Ok(Self { w })
    }

    pub fn unit(n: usize) -> Self {
        Self { w: vec![Rational::one(); n] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.w.iter().min()
    }

    pub fn subset(&self, coords: &[usize]) -> Self {
        Self { w: coords.iter().map(|&i| self.w[i].clone()).collect() }
    }
}

/// A weighted coordinate subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sparsifier {
    coords: Vec<usize>,
    weights: Vec<Rational>,
}

impl Sparsifier {
    pub fn new(coords: Vec<usize>, weights: Vec<Rational>) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: coords.len(), found: weights.len() });
        }
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("coordinates must be strictly increasing".into()));
        }
        if let Some(bad) = weights.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidParameter(format!("weight {bad} is not positive")));
        }
        Ok(Self { coords, weights })
    }

    /// All `n` coordinates with unit weight.
    pub fn identity(n: usize) -> Self {
        Self { coords: (0..n).collect(), weights: vec![Rational::one(); n] }
    }

    /// Collects `(coordinate, weight)` pairs, adding weights of repeated coordinates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (i, w) in pairs {
            if w.is_positive() {
                *merged.entry(i).or_insert_with(Rational::zero) += w;
            }
        }
        let (coords, weights) = merged.into_iter().unzip();
        Self { coords, weights }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Weight vector of length `n`, zero outside the retained set.
    pub fn dense_weights(&self, n: usize) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); n];
        for (&i, w) in self.coords.iter().zip(&self.weights) {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, bound: n });
            }
            out[i] = w.clone();
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SparsifierJson {
        SparsifierJson {
            coords: self.coords.clone(),
            weights: self.weights.iter().map(crate::numeric::format_rational).collect(),
        }
    }

    pub fn from_json(json: &SparsifierJson) -> Result<Self> {
        let weights = json
            .weights
            .iter()
            .map(|w| crate::numeric::parse_rational(w).map_err(Error::InvalidParameter))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.coords.clone(), weights)
    }
}

/// Serialized form of a [`Sparsifier`]: weights as `num/den` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsifierJson {
    pub coords: Vec<usize>,
    pub weights: Vec<String>,
}

/// A code whose row `i` stands for `multiplicity[i]` identical coordinates.
/// Equivalent to the expanded matrix with every row repeated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiCode {
    pub matrix: GeneratorMatrix,
    pub multiplicity: Vec<u64>,
}

impl MultiCode {
    pub fn simple(matrix: GeneratorMatrix) -> Self {
        let n = matrix.n();
        Self { matrix, multiplicity: vec![1; n] }
    }

    /// Total number of coordinates of the expanded code.
    pub fn total_len(&self) -> u64 {
        self.multiplicity.iter().sum()
    }

    /// The expanded matrix, with row `i` repeated `multiplicity[i]` times.
    pub fn expand(&self) -> GeneratorMatrix {
        let mut rows = Vec::new();
        for (i, &m) in self.multiplicity.iter().enumerate() {
            for _ in 0..m {
                rows.push(i);
            }
        }
        self.matrix.puncture(&rows).expect("indices in range")
    }
}

/// Duplicates coordinate `i` `floor(100 w_i / (eps w_min))` times; returns the
/// duplicated code and the scale `w_min eps / 100`.
pub fn weighted_to_unweighted(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    epsilon: &Rational,
) -> Result<(GeneratorMatrix, Rational)> {
    let (multi, scale) = weighted_to_multicode(g, w, epsilon)?;
    Ok((multi.expand(), scale))
}

/// [`weighted_to_unweighted`] in multiplicity form.
pub fn weighted_to_multicode(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    epsilon: &Rational,
) -> Result<(MultiCode, Rational)> {
    if g.n() == 0 || w.is_empty() {
        return Err(Error::EmptyCode);
    }
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: w.len() });
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let w_min = w.min().expect("nonempty").clone();
    let hundred = int(100);
    let multiplicity = w
        .values()
        .iter()
        .map(|wi| {
            let copies = floor_to_biguint(&(&hundred * wi / (epsilon * &w_min)));
            u64::try_from(copies).map_err(|_| Error::InvalidParameter("duplication count overflows".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = w_min * epsilon / hundred;
    Ok((MultiCode { matrix: g.clone(), multiplicity }, scale))
}
