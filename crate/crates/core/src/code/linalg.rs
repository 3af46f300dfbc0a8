//! Gaussian elimination over F_p on dense row-major matrices.

use crate::field::PrimeField;

/// Reduced row echelon form of an `n x k` row-major matrix together with its
/// pivot columns. Pivot columns are the lexicographically first maximal set
/// of independent columns.
pub(crate) fn rref(field: PrimeField, n: usize, k: usize, entries: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut m = entries.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        if row == n {
            break;
        }
        let Some(found) = (row..n).find(|&r| m[r * k + col] != 0) else {
            continue;
        };
        if found != row {
            for c in 0..k {
                m.swap(found * k + c, row * k + c);
            }
        }
        let inv = field.inv(m[row * k + col]).expect("pivot is nonzero");
        for c in col..k {
            m[row * k + c] = field.mul(m[row * k + c], inv);
        }
        for r in 0..n {
            if r == row || m[r * k + col] == 0 {
                continue;
            }
            let factor = m[r * k + col];
            for c in col..k {
                let sub = field.mul(factor, m[row * k + c]);
                m[r * k + c] = field.sub(m[r * k + c], sub);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub(crate) fn rank(field: PrimeField, n: usize, k: usize, entries: &[u32]) -> usize {
    rref(field, n, k, entries).1.len()
}

/// Basis of `{x : Mx = 0}` read off the reduced form.
pub(crate) fn kernel_basis(field: PrimeField, n: usize, k: usize, entries: &[u32]) -> Vec<Vec<u32>> {
    let (m, pivots) = rref(field, n, k, entries);
    let mut is_pivot = vec![None; k];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..k)
        .filter(|&free| is_pivot[free].is_none())
        .map(|free| {
            let mut x = vec![0u32; k];
            x[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = field.neg(m[r * k + free]);
            }
            x
        })
        .collect()
}

/// Incrementally maintained echelon basis of a subspace of F_p^k.
#[derive(Debug, Clone)]
pub(crate) struct RowBasis {
    field: PrimeField,
    rows: Vec<(usize, Vec<u32>)>,
}

impl RowBasis {
    pub(crate) fn new(field: PrimeField) -> Self {
        Self { field, rows: Vec::new() }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let factor = v[*pivot];
            if factor != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = self.field.sub(*x, self.field.mul(factor, y));
                }
            }
        }
        v
    }

    pub(crate) fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(r[pivot]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let factor = row[pivot];
            if factor != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = self.field.sub(*x, self.field.mul(factor, y));
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

impl RowBasis {
    /// Identical for equal subspaces.
    pub(crate) fn canonical_key(&self) -> Vec<u32> {
        let mut rows: Vec<&(usize, Vec<u32>)> = self.rows.iter().collect();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().flat_map(|(_, r)| r.iter().copied()).collect()
    }
}
