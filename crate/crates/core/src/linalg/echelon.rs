//! Sparse Gaussian elimination: rank, reduced row-echelon form, and an
//! incremental (streaming) echelon basis.
//!
//! The batch eliminator works left to right. Rows are bucketed by their
//! leading column; in each column the pivot is the shortest candidate row
//! (Markowitz least-fill restricted to the leftmost eligible column), and
//! every other candidate is reduced by it and re-bucketed.

use crate::error::{Error, Result};
use crate::linalg::field::{Field, FieldSpec};
use crate::linalg::sparse::{make_monic, sub_scaled, SparseMatrix, SparseRow};

/// Resource guards for elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Rational elimination is refused above this many columns.
    pub max_rational_cols: usize,
    /// Upper bound on simultaneously stored nonzeros during elimination.
    pub max_nonzeros: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rational_cols: 10_000,
            max_nonzeros: 400_000_000,
        }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits {
            max_rational_cols: usize::MAX,
            max_nonzeros: usize::MAX,
        }
    }

    pub(crate) fn admit<F: Field>(&self, field: &F, n_cols: usize) -> Result<()> {
        if field.spec() == FieldSpec::Rational && n_cols > self.max_rational_cols {
            return Err(Error::ResourceLimit(format!(
                "rational elimination on {n_cols} columns exceeds the limit of {}; use prime fields",
                self.max_rational_cols
            )));
        }
        Ok(())
    }
}

/// Reduced row-echelon data of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EchelonForm<F: Field> {
    pub n_cols: usize,
    pub rank: usize,
    /// Strictly increasing pivot columns, one per reduced row.
    pub pivot_cols: Vec<usize>,
    /// Each row has a 1 in its pivot column and zeros in every other pivot column.
    pub reduced_rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> EchelonForm<F> {
    /// Columns without a pivot, in increasing order.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n_cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.n_cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Normal form of a vector modulo the row space: the remainder after
    /// clearing every pivot column. Supported on free columns only.
    pub fn reduce(&self, field: &F, v: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let mut acc = v.to_vec();
        acc.sort_by_key(|(c, _)| *c);
        for (row, &pc) in self.reduced_rows.iter().zip(&self.pivot_cols) {
            if let Ok(pos) = acc.binary_search_by_key(&pc, |(c, _)| *c) {
                let coeff = acc[pos].1.clone();
                acc = sub_scaled(field, &acc, &coeff, row);
            }
        }
        acc
    }

    /// Rebuilds echelon data from reduced rows (e.g. read from disk).
    pub fn from_reduced_rows(
        field: &F,
        n_cols: usize,
        reduced_rows: Vec<SparseRow<F::Elem>>,
    ) -> Result<Self> {
        let pivot_cols: Vec<usize> = reduced_rows
            .iter()
            .map(|r| r.first().map(|(c, _)| *c))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: "empty row in reduced echelon data".into(),
            })?;
        let ok_order = pivot_cols.windows(2).all(|w| w[0] < w[1]);
        let ok_rows = reduced_rows.iter().zip(&pivot_cols).all(|(row, &pc)| {
            row[0].1 == field.one()
                && row[1..]
                    .iter()
                    .all(|(c, _)| pivot_cols.binary_search(c).is_err() && *c != pc)
        });
        if !ok_order || !ok_rows {
            return Err(Error::Parse {
                line: 0,
                message: "rows are not in reduced row-echelon form".into(),
            });
        }
        Ok(EchelonForm {
            n_cols,
            rank: pivot_cols.len(),
            pivot_cols,
            reduced_rows,
        })
    }
}

pub fn rank_sparse<F: Field>(m: &SparseMatrix<F>) -> Result<usize> {
    rank_sparse_with(m, &Limits::default())
}

pub fn rank_sparse_with<F: Field>(m: &SparseMatrix<F>, limits: &Limits) -> Result<usize> {
    Ok(eliminate(m, limits, false)?.0)
}

pub fn rref_sparse<F: Field>(m: &SparseMatrix<F>) -> Result<EchelonForm<F>> {
    rref_sparse_with(m, &Limits::default())
}

pub fn rref_sparse_with<F: Field>(m: &SparseMatrix<F>, limits: &Limits) -> Result<EchelonForm<F>> {
    let (rank, pivots) = eliminate(m, limits, true)?;
    let field = m.field();
    let n_cols = m.n_cols();
    let pivot_cols: Vec<usize> = pivots.iter().map(|r| r[0].0).collect();
    debug_assert_eq!(rank, pivot_cols.len());

    let mut pivot_index = vec![usize::MAX; n_cols];
    for (idx, &c) in pivot_cols.iter().enumerate() {
        pivot_index[c] = idx;
    }

    // Back substitution, bottom-up: rows below are already reduced, so each
    // pivot column in a row is cleared by exactly one subtraction.
    let mut reduced: Vec<SparseRow<F::Elem>> = vec![Vec::new(); rank];
    let mut dense = vec![field.zero(); n_cols];
    let mut touched = vec![false; n_cols];
    let mut support: Vec<usize> = Vec::new();
    for idx in (0..rank).rev() {
        let row = &pivots[idx];
        support.clear();
        for (c, v) in row {
            dense[*c] = v.clone();
            touched[*c] = true;
            support.push(*c);
        }
        for (c, _) in row.iter().skip(1) {
            let j = pivot_index[*c];
            if j == usize::MAX {
                continue;
            }
            let coeff = dense[*c].clone();
            if field.is_zero(&coeff) {
                continue;
            }
            for (c2, v2) in &reduced[j] {
                dense[*c2] = field.sub_mul(&dense[*c2], &coeff, v2);
                if !touched[*c2] {
                    touched[*c2] = true;
                    support.push(*c2);
                }
            }
        }
        support.sort_unstable();
        let mut out = Vec::new();
        for &c in &support {
            let v = std::mem::replace(&mut dense[c], field.zero());
            touched[c] = false;
            if !field.is_zero(&v) {
                out.push((c, v));
            }
        }
        reduced[idx] = out;
    }

    Ok(EchelonForm {
        n_cols,
        rank,
        pivot_cols,
        reduced_rows: reduced,
    })
}

/// Left-to-right bucketed elimination. Returns the rank and, when requested,
/// the monic pivot rows in pivot-column order.
fn eliminate<F: Field>(
    m: &SparseMatrix<F>,
    limits: &Limits,
    keep_pivots: bool,
) -> Result<(usize, Vec<SparseRow<F::Elem>>)> {
    let field = m.field();
    limits.admit(field, m.n_cols())?;

    let mut buckets: Vec<Vec<SparseRow<F::Elem>>> = vec![Vec::new(); m.n_cols()];
    let mut live = 0usize;
    for row in m.rows() {
        if let Some(&(c, _)) = row.first() {
            live += row.len();
            buckets[c].push(row.clone());
        }
    }

    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..m.n_cols() {
        let mut cands = std::mem::take(&mut buckets[col]);
        if cands.is_empty() {
            continue;
        }
        let best = cands
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.len())
            .map(|(i, _)| i)
            .expect("non-empty");
        let mut pivot = cands.swap_remove(best);
        make_monic(field, &mut pivot);
        rank += 1;
        for row in cands {
            live -= row.len();
            let lead = row[0].1.clone();
            let reduced = sub_scaled(field, &row, &lead, &pivot);
            if let Some(&(c, _)) = reduced.first() {
                live += reduced.len();
                buckets[c].push(reduced);
            }
        }
        if live > limits.max_nonzeros {
            return Err(Error::ResourceLimit(format!(
                "elimination holds {live} nonzeros at column {col}, budget is {}",
                limits.max_nonzeros
            )));
        }
        if keep_pivots {
            pivots.push(pivot);
        } else {
            live -= pivot.len();
        }
    }
    Ok((rank, pivots))
}

/// An echelon basis grown one row at a time.
///
/// Each stored row is monic and indexed by its leading column. Inserting a
/// row reduces it at its leading entry until it is zero or lands on a free
/// leading column. When the incoming row is shorter than the stored pivot it
/// collides with, the two swap roles, which keeps pivot rows short.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon<F: Field> {
    field: F,
    n_cols: usize,
    pivots: Vec<Option<SparseRow<F::Elem>>>,
    rank: usize,
    nnz: usize,
}

impl<F: Field> IncrementalEchelon<F> {
    pub fn new(field: F, n_cols: usize) -> Self {
        IncrementalEchelon {
            field,
            n_cols,
            pivots: vec![None; n_cols],
            rank: 0,
            nnz: 0,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    /// Inserts a row (sorted, no zeros). Returns whether the rank grew.
    pub fn insert(&mut self, mut row: SparseRow<F::Elem>) -> bool {
        loop {
            let Some(&(lead_col, _)) = row.first() else {
                return false;
            };
            match &mut self.pivots[lead_col] {
                slot @ None => {
                    make_monic(&self.field, &mut row);
                    self.nnz += row.len();
                    *slot = Some(row);
                    self.rank += 1;
                    return true;
                }
                Some(pivot) => {
                    if row.len() < pivot.len() {
                        make_monic(&self.field, &mut row);
                        self.nnz = self.nnz + row.len() - pivot.len();
                        std::mem::swap(pivot, &mut row);
                    }
                    let lead = row[0].1.clone();
                    row = sub_scaled(&self.field, &row, &lead, pivot);
                }
            }
        }
    }

    /// Whether a vector lies in the current span.
    pub fn contains(&self, row: &[(usize, F::Elem)]) -> bool {
        let mut row = row.to_vec();
        loop {
            let Some(&(lead_col, _)) = row.first() else {
                return true;
            };
            match &self.pivots[lead_col] {
                None => return false,
                Some(pivot) => {
                    let lead = row[0].1.clone();
                    row = sub_scaled(&self.field, &row, &lead, pivot);
                }
            }
        }
    }

    /// Stored pivot rows in pivot-column order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseRow<F::Elem>> {
        self.pivots.iter().flatten()
    }

    pub fn to_matrix(&self) -> SparseMatrix<F> {
        SparseMatrix::from_rows(self.field.clone(), self.n_cols, self.rows().cloned())
            .expect("pivot rows are well formed")
    }

    /// Restores a basis from previously stored pivot rows.
    pub fn from_matrix(m: &SparseMatrix<F>) -> Result<Self> {
        let mut e = IncrementalEchelon::new(m.field().clone(), m.n_cols());
        for row in m.rows() {
            let Some(&(c, _)) = row.first() else {
                continue;
            };
            if e.pivots[c].is_some() || row[0].1 != e.field.one() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("row with leading column {c} is not a fresh monic pivot"),
                });
            }
            e.nnz += row.len();
            e.pivots[c] = Some(row.clone());
            e.rank += 1;
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};

    fn q_matrix(rows: &[&[i64]]) -> SparseMatrix<Rationals> {
        let f = Rationals;
        let n_cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(c, v)| (r, c, Rationals.from_i64(*v)))
        });
        SparseMatrix::from_entries(f, rows.len(), n_cols, entries).unwrap()
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = SparseMatrix::zeros(Rationals, 0, 0);
        assert_eq!(rank_sparse(&m).unwrap(), 0);
        let e = rref_sparse(&m).unwrap();
        assert_eq!(e.rank, 0);
        assert!(e.pivot_cols.is_empty());
    }

    #[test]
    fn identity_over_gf5() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(rank_sparse(&SparseMatrix::identity(f, 3)).unwrap(), 3);
    }

    #[test]
    fn zero_matrix_rref() {
        let e = rref_sparse(&SparseMatrix::zeros(Rationals, 3, 4)).unwrap();
        assert_eq!(e.rank, 0);
        assert!(e.pivot_cols.is_empty());
        assert_eq!(e.free_cols(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn proportional_rows() {
        let m = q_matrix(&[&[1, 2], &[2, 4]]);
        let e = rref_sparse(&m).unwrap();
        assert_eq!(e.rank, 1);
        assert_eq!(e.pivot_cols, vec![0]);
        assert_eq!(
            e.reduced_rows,
            vec![vec![(0, Rationals.from_i64(1)), (1, Rationals.from_i64(2))]]
        );
    }

    #[test]
    fn rref_is_fully_reduced() {
        let m = q_matrix(&[&[0, 2, 4, 1], &[1, 1, 0, 0], &[1, 3, 4, 1], &[0, 0, 3, 3]]);
        let e = rref_sparse(&m).unwrap();
        assert_eq!(e.rank, 3);
        assert_eq!(e.pivot_cols, vec![0, 1, 2]);
        for (row, &pc) in e.reduced_rows.iter().zip(&e.pivot_cols) {
            assert_eq!(row[0], (pc, Rationals.from_i64(1)));
            for (c, _) in &row[1..] {
                assert!(!e.pivot_cols.contains(c));
            }
        }
        // every original row reduces to zero
        for row in m.rows() {
            assert!(e.reduce(&Rationals, row).is_empty());
        }
    }

    #[test]
    fn rational_guard_refuses_wide_blocks() {
        let m = SparseMatrix::zeros(Rationals, 1, 20);
        let limits = Limits {
            max_rational_cols: 10,
            ..Limits::default()
        };
        assert!(matches!(
            rank_sparse_with(&m, &limits),
            Err(Error::ResourceLimit(_))
        ));
        // prime fields are not subject to the column guard
        let f = PrimeField::new(7).unwrap();
        assert_eq!(rank_sparse_with(&SparseMatrix::zeros(f, 1, 20), &limits).unwrap(), 0);
    }

    #[test]
    fn nonzero_budget() {
        let m = q_matrix(&[&[1, 1, 1], &[1, 0, 1]]);
        let limits = Limits {
            max_nonzeros: 2,
            ..Limits::default()
        };
        assert!(matches!(
            rank_sparse_with(&m, &limits),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn incremental_matches_batch() {
        let m = q_matrix(&[&[1, 2, 0], &[2, 4, 0], &[0, 1, 1], &[1, 3, 1]]);
        let mut inc = IncrementalEchelon::new(Rationals, 3);
        let grew: Vec<bool> = m.rows().iter().map(|r| inc.insert(r.clone())).collect();
        assert_eq!(grew, vec![true, false, true, false]);
        assert_eq!(inc.rank(), rank_sparse(&m).unwrap());
        assert!(inc.contains(&[(0, Rationals.from_i64(1)), (1, Rationals.from_i64(3)), (2, Rationals.from_i64(1))]));
        assert!(!inc.contains(&[(2, Rationals.from_i64(1))]));
        let restored = IncrementalEchelon::from_matrix(&inc.to_matrix()).unwrap();
        assert_eq!(restored.rank(), 2);
    }
}
