//! Rectangular tensor matrices: the basis of `B(m,n) = V^{⊗ (m-1)(n-1)}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::basis::BasisIndex;
use crate::tensor::lincomb::{Coeff, LinComb};

/// A fully populated `rows x cols` grid of basis indices, row-major.
///
/// An element of `B(m, n)` has `m - 1` rows and `n - 1` columns. Grids with
/// no rows or no columns are the scalar units.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RectMonomial {
    rows: usize,
    cols: usize,
    entries: Vec<BasisIndex>,
}

impl RectMonomial {
    pub fn new(rows: usize, cols: usize, entries: Vec<BasisIndex>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} grid needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RectMonomial {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_values(rows: usize, cols: usize, values: &[u8]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| BasisIndex::of(v)).collect())
    }

    /// The empty grid of the given shape (one of the dimensions is zero).
    pub fn empty(rows: usize, cols: usize) -> Self {
        assert!(rows == 0 || cols == 0, "only degenerate grids are empty");
        RectMonomial {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BasisIndex) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for k in 1..=rows {
            for l in 1..=cols {
                entries.push(f(k, l));
            }
        }
        RectMonomial {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    /// `(m, n)` such that this grid lies in `B(m, n)`.
    pub fn arity(&self) -> (usize, usize) {
        (self.rows + 1, self.cols + 1)
    }
    pub fn entries(&self) -> &[BasisIndex] {
        &self.entries
    }

    /// 1-based entry `(k, l)`.
    pub fn get(&self, k: usize, l: usize) -> BasisIndex {
        self.entries[(k - 1) * self.cols + (l - 1)]
    }

    pub fn transpose(&self) -> RectMonomial {
        RectMonomial::from_fn(self.cols, self.rows, |k, l| self.get(l, k))
    }
}

impl fmt::Debug for RectMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}x{}[", self.rows, self.cols)?;
        for k in 1..=self.rows {
            if k > 1 {
                write!(f, ";")?;
            }
            for l in 1..=self.cols {
                if l > 1 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(k, l).value())?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectElement {
    rows: usize,
    cols: usize,
    terms: LinComb<RectMonomial>,
}

impl RectElement {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RectElement {
            rows,
            cols,
            terms: LinComb::zero(),
        }
    }

    pub fn from_monomial(m: RectMonomial) -> Self {
        RectElement {
            rows: m.rows,
            cols: m.cols,
            terms: LinComb::monomial(m),
        }
    }

    /// The unit of `B(m, 1)` (`cols = 0`) or `B(1, n)` (`rows = 0`).
    pub fn unit(rows: usize, cols: usize) -> Self {
        Self::from_monomial(RectMonomial::empty(rows, cols))
    }

    pub fn from_terms(rows: usize, cols: usize, terms: LinComb<RectMonomial>) -> Result<Self> {
        if let Some(m) = terms.monomials().find(|m| m.rows != rows || m.cols != cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} term in a {rows}x{cols} element",
                m.rows, m.cols
            )));
        }
        Ok(RectElement { rows, cols, terms })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn arity(&self) -> (usize, usize) {
        (self.rows + 1, self.cols + 1)
    }
    pub fn terms(&self) -> &LinComb<RectMonomial> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, c: &Coeff) -> RectElement {
        RectElement {
            rows: self.rows,
            cols: self.cols,
            terms: self.terms.scale(c),
        }
    }

    pub fn add(&self, other: &RectElement) -> Result<RectElement> {
        if self.arity() != other.arity() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RectElement {
            rows: self.rows,
            cols: self.cols,
            terms: self.terms.add(&other.terms),
        })
    }
}
