//! Incremental exact Gauss–Jordan elimination over sparse rows.
//!
//! Every dense routine in this crate funnels through [`RowReducer`]; the
//! large coefficient-matching systems of the Killing solver are sparse, so
//! rows are kept as ordered maps and only nonzero entries are touched.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use super::rational::{Rational, Vector};

pub type SparseRow = BTreeMap<usize, Rational>;

/// Builds a sparse row from `(column, value)` pairs, summing duplicates and
/// dropping zeros.
pub fn sparse_row<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> SparseRow {
    let mut row = SparseRow::new();
    for (c, v) in entries {
        if v.is_zero() {
            continue;
        }
        let slot = row.entry(c).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            row.remove(&c);
        }
    }
    row
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Row echelon form maintained under insertion. Pivot rows are normalized
/// so that the leading entry is one; `finish` completes the back
/// substitution.
#[derive(Debug, Clone)]
pub struct RowReducer {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
    reduced: bool,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: BTreeMap::new(),
            reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots. Returns the remainder,
    /// which is empty iff `row` lies in the current row space.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let Some((&c, lead)) = row.range(cursor..).next() else {
                return row;
            };
            match self.pivots.get(&c) {
                Some(p) => {
                    let f = lead.clone();
                    for (&j, v) in p {
                        let slot = row.entry(j).or_insert_with(Rational::zero);
                        *slot -= &f * v;
                        if slot.is_zero() {
                            row.remove(&j);
                        }
                    }
                    cursor = c + 1;
                }
                None => cursor = c + 1,
            }
        }
    }

    /// Inserts a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        let mut row = self.reduce(row);
        let Some((&lead_col, lead)) = row.iter().next() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
        }
        self.pivots.insert(lead_col, row);
        self.reduced = false;
        true
    }

    pub fn insert_dense(&mut self, row: &[Rational]) -> bool {
        self.insert(dense_to_sparse(row))
    }

    /// Back substitution to reduced row echelon form.
    pub fn finish(&mut self) {
        if self.reduced {
            return;
        }
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let prow = self.pivots[&c].clone();
            for (_, row) in self.pivots.range_mut(..c) {
                if let Some(f) = row.get(&c).cloned() {
                    for (&j, v) in &prow {
                        let slot = row.entry(j).or_insert_with(Rational::zero);
                        *slot -= &f * v;
                        if slot.is_zero() {
                            row.remove(&j);
                        }
                    }
                }
            }
        }
        self.reduced = true;
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.pivots.iter().map(|(c, r)| (*c, r))
    }

    /// Basis of the null space of the inserted rows: one vector per free
    /// column, with that column set to one.
    pub fn null_space(&mut self) -> Vec<Vector> {
        self.finish();
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (&p, row) in &self.pivots {
                if let Some(x) = row.get(&free) {
                    v[p] = -x.clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn rank_and_null_space() {
        let mut r = RowReducer::new(3);
        assert!(r.insert_dense(&[int(1), int(2), int(3)]));
        assert!(!r.insert_dense(&[int(2), int(4), int(6)]));
        assert!(r.insert_dense(&[int(0), int(1), int(1)]));
        assert_eq!(r.rank(), 2);
        let ns = r.null_space();
        assert_eq!(ns.len(), 1);
        // y + z = 0, x + 2y + 3z = 0  =>  v = (-1, -1, 1)
        assert_eq!(ns[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn sparse_row_cancels() {
        let row = sparse_row([(1, int(2)), (1, int(-2)), (0, int(5))]);
        assert_eq!(row.len(), 1);
        assert_eq!(row[&0], int(5));
    }
}
