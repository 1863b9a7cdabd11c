//! Row-major sparse matrices over a [`Field`].

use crate::error::{Error, Result};
use crate::linalg::field::Field;

/// One sparse row: strictly increasing column indices, no stored zeros.
pub type SparseRow<E> = Vec<(usize, E)>;

#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: F, n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            field,
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Builds a matrix from `(row, col, value)` triples in any order.
    ///
    /// Repeated `(row, col)` pairs are rejected rather than summed; zero
    /// values are dropped.
    pub fn from_entries(
        field: F,
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self> {
        let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); n_rows];
        for (r, c, v) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::OutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            rows[r].push((c, v));
        }
        for (r, row) in rows.iter_mut().enumerate() {
            normalize_row(&field, r, row)?;
        }
        Ok(SparseMatrix {
            field,
            n_rows,
            n_cols,
            rows,
        })
    }

    /// Builds a matrix from per-row `(col, value)` lists.
    pub fn from_rows(
        field: F,
        n_cols: usize,
        rows: impl IntoIterator<Item = SparseRow<F::Elem>>,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (r, mut row) in rows.into_iter().enumerate() {
            if let Some(&(c, _)) = row.iter().find(|(c, _)| *c >= n_cols) {
                return Err(Error::OutOfBounds {
                    row: r,
                    col: c,
                    n_rows: r + 1,
                    n_cols,
                });
            }
            normalize_row(&field, r, &mut row)?;
            out.push(row);
        }
        Ok(SparseMatrix {
            field,
            n_rows: out.len(),
            n_cols,
            rows: out,
        })
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let rows = (0..n).map(|i| vec![(i, one.clone())]).collect();
        SparseMatrix {
            field,
            n_rows: n,
            n_cols: n,
            rows,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }
    pub fn rows(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }
    pub fn row(&self, r: usize) -> &SparseRow<F::Elem> {
        &self.rows[r]
    }
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn into_rows(self) -> Vec<SparseRow<F::Elem>> {
        self.rows
    }

    /// The same matrix read through a ring map into another field.
    pub fn map_field<G: Field>(
        &self,
        target: G,
        map: impl Fn(&F::Elem) -> Result<G::Elem>,
    ) -> Result<SparseMatrix<G>> {
        let mut rows = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                let w = map(v)?;
                if !target.is_zero(&w) {
                    out.push((*c, w));
                }
            }
            rows.push(out);
        }
        Ok(SparseMatrix {
            field: target,
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows,
        })
    }
}

impl<F: Field> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows && self.n_cols == other.n_cols && self.rows == other.rows
    }
}

fn normalize_row<F: Field>(field: &F, r: usize, row: &mut SparseRow<F::Elem>) -> Result<()> {
    row.sort_by_key(|(c, _)| *c);
    if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateEntry { row: r, col: w[0].0 });
    }
    row.retain(|(_, v)| !field.is_zero(v));
    Ok(())
}

/// `a - c * b` for sorted sparse rows.
pub(crate) fn sub_scaled<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    c: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, cb) = (a[i].0, b[j].0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, field.neg(&field.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub_mul(&a[i].1, c, &b[j].1);
            if !field.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(cb, v)| (*cb, field.neg(&field.mul(c, v)))));
    out
}

/// Scales a row so its leading coefficient is one.
pub(crate) fn make_monic<F: Field>(field: &F, row: &mut SparseRow<F::Elem>) {
    if let Some((_, lead)) = row.first() {
        if *lead != field.one() {
            let inv = field.inv(lead);
            for (_, v) in row.iter_mut() {
                *v = field.mul(v, &inv);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};

    #[test]
    fn duplicate_entries_are_errors() {
        let f = PrimeField::new(5).unwrap();
        let err = SparseMatrix::from_entries(f, 2, 2, vec![(0, 1, 1), (0, 1, 2)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry { row: 0, col: 1 }));
    }

    #[test]
    fn out_of_bounds_and_zero_entries() {
        let f = PrimeField::new(5).unwrap();
        assert!(SparseMatrix::from_entries(f, 2, 2, vec![(2, 0, 1)]).is_err());
        let m = SparseMatrix::from_entries(f, 2, 2, vec![(1, 1, 0), (0, 0, 3)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3);
        assert_eq!(m.get(1, 1), 0);
    }

    #[test]
    fn sub_scaled_cancels_leading_entry() {
        let q = Rationals;
        let a = vec![(0, q.from_i64(2)), (3, q.from_i64(1))];
        let b = vec![(0, q.from_i64(1)), (2, q.from_i64(5))];
        let r = sub_scaled(&q, &a, &q.from_i64(2), &b);
        assert_eq!(r, vec![(2, q.from_i64(-10)), (3, q.from_i64(1))]);
    }
}
