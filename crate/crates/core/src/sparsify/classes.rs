//! Weight bands, span decomposition across bands, and unweighting.

use std::collections::BTreeMap;

use num_traits::{One, Pow};

use super::quadratic::quadratic_sparsify_weighted;
use crate::code::linalg::rref;
use crate::code::{CoordinateWeights, Enumeration, GeneratorMatrix, MultiCode, Sparsifier};
use crate::error::{Error, Result};
use crate::numeric::{ceil_to_biguint, floor_to_biguint, format_rational, from_biguint, int, log2_clamped, Rational};

/// Coordinates grouped into bands `E_i = [alpha^(i-1), alpha^i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClassPartition {
    pub alpha: Rational,
    pub classes: BTreeMap<u32, Vec<usize>>,
    pub odd_union: Vec<usize>,
    pub even_union: Vec<usize>,
}

impl WeightClassPartition {
    pub fn class_of(&self, coord: usize) -> Option<u32> {
        self.classes.iter().find(|(_, v)| v.binary_search(&coord).is_ok()).map(|(&i, _)| i)
    }
}

/// Bands the given weights, all of which must be at least 1.
pub fn partition_by_weight(coords: &[usize], weights: &[Rational], alpha: &Rational) -> Result<WeightClassPartition> {
    if coords.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: coords.len(), found: weights.len() });
    }
    if *alpha <= Rational::one() {
        return Err(Error::InvalidParameter("alpha must exceed 1".into()));
    }
    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (&i, w) in coords.iter().zip(weights) {
        if *w < Rational::one() {
            return Err(Error::WeightOutOfBand {
                weight: format_rational(w),
                low: "1".into(),
                high: "infinity".into(),
            });
        }
        let mut class = 1u32;
        let mut upper = alpha.clone();
        while *w >= upper {
            upper *= alpha;
            class += 1;
        }
        classes.entry(class).or_default().push(i);
    }
    let mut odd_union = Vec::new();
    let mut even_union = Vec::new();
    for (class, members) in classes.iter_mut() {
        members.sort_unstable();
        if class % 2 == 1 {
            odd_union.extend_from_slice(members);
        } else {
            even_union.extend_from_slice(members);
        }
    }
    odd_union.sort_unstable();
    even_union.sort_unstable();
    Ok(WeightClassPartition { alpha: alpha.clone(), classes, odd_union, even_union })
}

/// Importance-sampled code split into weight bands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClassDecomposition {
    /// Output of the importance sampler, in the input's weight units.
    pub quadratic: Sparsifier,
    /// Input weights are divided by this (their minimum) before banding.
    pub scale: Rational,
    pub partition: WeightClassPartition,
}

/// Importance sampling at `eps/4`, then banding with
/// `alpha = ceil(k^3 log q / eps^3)`.
pub fn weight_class_decomposition(
    g: &GeneratorMatrix,
    w: &CoordinateWeights,
    epsilon: &Rational,
    k: usize,
    seed: u64,
) -> Result<WeightClassDecomposition> {
    let scale = w.min().ok_or(Error::EmptyCode)?.clone();
    let normalized = CoordinateWeights::new(w.values().iter().map(|x| x / &scale).collect())?;
    let quad = quadratic_sparsify_weighted(g, &normalized, &(epsilon / int(4)), seed, &Enumeration::default())?;
    let raw = int((k as u64).pow(3)) * log2_clamped(&int(g.field().modulus() as u64))?
        / (epsilon * epsilon * epsilon);
    let alpha = from_biguint(&ceil_to_biguint(&raw));
    let partition = partition_by_weight(quad.coords(), quad.weights(), &alpha)?;
    let quadratic = Sparsifier::from_pairs(
        quad.coords().iter().copied().zip(quad.weights().iter().map(|x| x * &scale)),
    );
    Ok(WeightClassDecomposition { quadratic, scale, partition })
}

/// One band's block: rows of `D` in the band and the independent columns
/// found on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBlock {
    pub class: u32,
    /// Row indices into `D` of every coordinate in the band.
    pub rows: Vec<usize>,
    /// `|rows| x k'` generator with independent columns.
    pub h: GeneratorMatrix,
}

/// From the heaviest band downward: pick independent columns on the band,
/// cancel the band out of every other column, and continue with those.
/// The block ranks sum to `rank(D)`.
pub fn span_decomposition(d: &GeneratorMatrix, labels: &[u32]) -> Result<Vec<SpanBlock>> {
    if labels.len() != d.n() {
        return Err(Error::DimensionMismatch { expected: d.n(), found: labels.len() });
    }
    let field = d.field();
    let mut g = d.clone();
    let mut blocks = Vec::new();
    loop {
        let Some(class) = (0..g.n()).filter(|&i| !g.is_zero_row(i)).map(|i| labels[i]).max() else {
            break;
        };
        let rows: Vec<usize> = (0..g.n()).filter(|&i| labels[i] == class).collect();
        let ge = g.puncture(&rows)?;
        let (reduced, pivots) = rref(field, ge.n(), ge.k(), ge.entries());
        let mut is_pivot = vec![false; g.k()];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for c in (0..g.k()).filter(|&c| !is_pivot[c]) {
            for (r, &pc) in pivots.iter().enumerate() {
                let coeff = reduced[r * ge.k() + c];
                if coeff != 0 {
                    g.add_column_multiple(pc, c, field.neg(coeff));
                }
            }
        }
        let h = ge.select_columns(&pivots);
        let rest: Vec<usize> = (0..g.k()).filter(|&c| !is_pivot[c]).collect();
        g = g.select_columns(&rest);
        blocks.push(SpanBlock { class, rows, h });
    }
    Ok(blocks)
}

/// Divides weights by `alpha^(i-1)` and duplicates each coordinate
/// `floor(10 w / eps)` times. Returns the duplicated code and the scale
/// `alpha^(i-1) eps / 10`.
pub fn make_unweighted(
    h: &GeneratorMatrix,
    w: &CoordinateWeights,
    alpha: &Rational,
    i: u32,
    epsilon: &Rational,
) -> Result<(MultiCode, Rational)> {
    if w.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: w.len() });
    }
    if i == 0 {
        return Err(Error::InvalidParameter("band index starts at 1".into()));
    }
    let low: Rational = Pow::pow(alpha, i - 1);
    let high = &low * alpha;
    let ten = int(10);
    let multiplicity = w
        .values()
        .iter()
        .map(|x| {
            if *x < low || *x > high {
                return Err(Error::WeightOutOfBand {
                    weight: format_rational(x),
                    low: format_rational(&low),
                    high: format_rational(&high),
                });
            }
            let copies = floor_to_biguint(&(&ten * x / (&low * epsilon)));
            u64::try_from(copies).map_err(|_| Error::InvalidParameter("duplication count overflows".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = low * epsilon / ten;
    Ok((MultiCode { matrix: h.clone(), multiplicity }, scale))
}
