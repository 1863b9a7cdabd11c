use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::lincomb::Coeff;

/// Index of a basis vector `e_1, ..., e_d`, stored 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisIndex(u8);

impl BasisIndex {
    pub const MAX_DIM: usize = 255;

    pub fn new(value: u32, d: usize) -> Result<Self> {
        if value == 0 || value as usize > d || d > Self::MAX_DIM {
            return Err(Error::BasisIndexOutOfRange { index: value, d });
        }
        Ok(BasisIndex(value as u8))
    }

    /// `e_value` without a dimension check; `value` must be at least 1.
    pub const fn of(value: u8) -> Self {
        assert!(value >= 1);
        BasisIndex(value)
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    /// Zero-based position in a length-`d` coordinate vector.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A vector of V in coordinates with respect to `e_1, ..., e_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralVector {
    coords: Vec<Coeff>,
}

impl GeneralVector {
    pub fn new(coords: Vec<Coeff>) -> Self {
        GeneralVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        GeneralVector {
            coords: coords.iter().map(|&c| crate::tensor::coeff(c)).collect(),
        }
    }

    pub fn basis(index: BasisIndex, d: usize) -> Self {
        let mut coords = vec![Coeff::zero(); d];
        coords[index.slot()] = crate::tensor::coeff(1);
        GeneralVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coeff] {
        &self.coords
    }

    /// Nonzero coordinates as `(basis index, coefficient)`.
    pub fn support(&self) -> impl Iterator<Item = (BasisIndex, &Coeff)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BasisIndex((i + 1) as u8), c))
    }

    pub fn combine(&self, lambda: &Coeff, other: &GeneralVector, mu: &Coeff) -> GeneralVector {
        assert_eq!(self.dim(), other.dim());
        GeneralVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| lambda * a + mu * b)
                .collect(),
        }
    }
}

/// Multiplicity of each basis vector among the entries of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree {
    counts: Vec<u32>,
}

impl MultiDegree {
    pub fn new(counts: Vec<u32>) -> Self {
        MultiDegree { counts }
    }

    pub fn zero(d: usize) -> Self {
        MultiDegree {
            counts: vec![0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn count(&self, b: BasisIndex) -> u32 {
        self.counts.get(b.slot()).copied().unwrap_or(0)
    }

    pub(crate) fn bump(&mut self, b: BasisIndex) {
        self.counts[b.slot()] += 1;
    }

    /// Counts in non-increasing order, the canonical representative of the
    /// permutation class.
    pub fn sorted_desc(&self) -> MultiDegree {
        let mut counts = self.counts.clone();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        MultiDegree { counts }
    }

    /// Fails unless the counts fill a size-`n` triangle.
    pub fn check_size(&self, n: usize) -> Result<()> {
        let expected = crate::tensor::tri::num_positions(n) as u64;
        if self.total() != expected {
            return Err(Error::DegreeMismatch {
                counts: self.counts.clone(),
                sum: self.total(),
                size: n,
                expected,
            });
        }
        Ok(())
    }

    /// Every multidegree of length `d` with the given total, in
    /// lexicographically decreasing order of counts.
    pub fn all_with_total(d: usize, total: u32) -> Vec<MultiDegree> {
        fn rec(d: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
            if prefix.len() + 1 == d {
                prefix.push(left);
                out.push(MultiDegree::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for c in (0..=left).rev() {
                prefix.push(c);
                rec(d, left - c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if d == 0 {
            if total == 0 {
                out.push(MultiDegree::zero(0));
            }
            return out;
        }
        rec(d, total, &mut Vec::new(), &mut out);
        out
    }

    /// Number of distinct permutations of the counts.
    pub fn permutation_count(&self) -> u64 {
        let mut sorted = self.counts.clone();
        sorted.sort_unstable();
        let mut runs = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&c| c == sorted[i]).count();
            runs.push(j as u32);
            i += j;
        }
        multinomial(&runs)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `(sum k)! / prod k_i!`, computed without overflow for the sizes used here.
pub fn multinomial(ks: &[u32]) -> u64 {
    let mut acc: u128 = 1;
    let mut seen: u128 = 0;
    for &k in ks {
        for j in 1..=k as u128 {
            seen += 1;
            acc = acc * seen / j;
        }
    }
    u64::try_from(acc).expect("multinomial fits in u64")
}
