//! Triangular monomials: the basis of `T(n+1) = V^{⊗ n(n-1)/2}`.
//!
//! A size-`n` monomial assigns a basis index to each position `(i, j)`,
//! `1 <= i < j <= n`. Positions are ordered lexicographically,
//! `(1,2) < (1,3) < ... < (1,n) < (2,3) < ... < (n-1,n)`, and entries are
//! stored in that order, so the derived `Ord` is lexicographic on the entry
//! tuple.

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::basis::{multinomial, BasisIndex, GeneralVector, MultiDegree};
use crate::tensor::lincomb::{Coeff, LinComb};

/// Number of strict upper-triangular positions of an `n x n` matrix.
pub const fn num_positions(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Offset of the 1-based position `(i, j)` in a size-`n` monomial.
pub fn position_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n, "bad position ({i},{j}) for size {n}");
    // rows 1..i-1 contribute (n-1) + (n-2) + ... + (n-i+1) slots
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// All positions of a size-`n` monomial in storage order.
pub fn positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| ((i + 1)..=n).map(move |j| (i, j)))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriMonomial {
    size: usize,
    entries: Vec<BasisIndex>,
}

impl TriMonomial {
    pub fn new(size: usize, entries: Vec<BasisIndex>) -> Result<Self> {
        if entries.len() != num_positions(size) {
            return Err(Error::ShapeMismatch(format!(
                "size-{size} monomial needs {} entries, got {}",
                num_positions(size),
                entries.len()
            )));
        }
        Ok(TriMonomial { size, entries })
    }

    /// The operadic unit `1` in arity 1.
    pub fn unit() -> Self {
        TriMonomial {
            size: 0,
            entries: Vec::new(),
        }
    }

    /// The generator `(1)` of arity 2.
    pub fn generator() -> Self {
        TriMonomial {
            size: 1,
            entries: Vec::new(),
        }
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> BasisIndex) -> Self {
        TriMonomial {
            size,
            entries: positions(size).map(|(i, j)| f(i, j)).collect(),
        }
    }

    /// Builds a monomial from small integers in storage order.
    pub fn from_values(size: usize, values: &[u8]) -> Result<Self> {
        Self::new(size, values.iter().map(|&v| BasisIndex::of(v)).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Arity in the operad, one more than the size.
    pub fn arity(&self) -> usize {
        self.size + 1
    }

    pub fn entries(&self) -> &[BasisIndex] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> BasisIndex {
        self.entries[position_index(self.size, i, j)]
    }

    pub fn max_index(&self) -> usize {
        self.entries.iter().map(|b| b.value()).max().unwrap_or(0)
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        match self.entries.iter().find(|b| b.value() > d) {
            Some(b) => Err(Error::BasisIndexOutOfRange {
                index: b.value() as u32,
                d,
            }),
            None => Ok(()),
        }
    }

    pub fn with_entry(&self, i: usize, j: usize, b: BasisIndex) -> Self {
        let mut out = self.clone();
        out.entries[position_index(self.size, i, j)] = b;
        out
    }
}

impl fmt::Debug for TriMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}[", self.size)?;
        for (k, ((i, j), b)) in positions(self.size).zip(&self.entries).enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}{j}:{}", b.value())?;
        }
        write!(f, "]")
    }
}

pub fn multidegree_of(m: &TriMonomial, d: usize) -> MultiDegree {
    let mut k = MultiDegree::zero(d);
    for &b in m.entries() {
        k.bump(b);
    }
    k
}

/// Linear combination of same-size triangular monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriElement {
    size: usize,
    terms: LinComb<TriMonomial>,
}

impl TriElement {
    pub fn zero(size: usize) -> Self {
        TriElement {
            size,
            terms: LinComb::zero(),
        }
    }

    pub fn from_monomial(m: TriMonomial) -> Self {
        TriElement {
            size: m.size(),
            terms: LinComb::monomial(m),
        }
    }

    pub fn unit() -> Self {
        Self::from_monomial(TriMonomial::unit())
    }

    pub fn from_terms(size: usize, terms: LinComb<TriMonomial>) -> Result<Self> {
        if let Some(m) = terms.monomials().find(|m| m.size() != size) {
            return Err(Error::ShapeMismatch(format!(
                "term of size {} in a size-{size} element",
                m.size()
            )));
        }
        Ok(TriElement { size, terms })
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn arity(&self) -> usize {
        self.size + 1
    }
    pub fn terms(&self) -> &LinComb<TriMonomial> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &TriElement) -> Result<TriElement> {
        self.same_size(other)?;
        Ok(TriElement {
            size: self.size,
            terms: self.terms.add(&other.terms),
        })
    }

    pub fn sub(&self, other: &TriElement) -> Result<TriElement> {
        self.same_size(other)?;
        Ok(TriElement {
            size: self.size,
            terms: self.terms.sub(&other.terms),
        })
    }

    pub fn scale(&self, c: &Coeff) -> TriElement {
        TriElement {
            size: self.size,
            terms: self.terms.scale(c),
        }
    }

    pub fn max_index(&self) -> usize {
        self.terms.monomials().map(TriMonomial::max_index).max().unwrap_or(0)
    }

    fn same_size(&self, other: &TriElement) -> Result<()> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!(
                "sizes {} and {} differ",
                self.size, other.size
            )));
        }
        Ok(())
    }
}

/// Fully expands a simple tensor whose entries are general vectors.
///
/// `entries` is indexed in storage order; every coordinate product becomes a
/// monomial term.
pub fn expand_multilinear(size: usize, entries: &[GeneralVector]) -> Result<TriElement> {
    if entries.len() != num_positions(size) {
        return Err(Error::ShapeMismatch(format!(
            "size-{size} expansion needs {} vectors, got {}",
            num_positions(size),
            entries.len()
        )));
    }
    let mut partial: Vec<(Vec<BasisIndex>, Coeff)> = vec![(Vec::new(), crate::tensor::coeff(1))];
    for v in entries {
        let mut next = Vec::with_capacity(partial.len() * v.dim());
        for (prefix, c) in &partial {
            for (b, x) in v.support() {
                let mut p = prefix.clone();
                p.push(b);
                next.push((p, c * x));
            }
        }
        partial = next;
    }
    let terms = partial
        .into_iter()
        .map(|(e, c)| (TriMonomial { size, entries: e }, c))
        .collect();
    Ok(TriElement { size, terms })
}

/// All monomials of size `n` and multidegree `k`, in canonical order.
pub fn enumerate_block_monomials(n: usize, k: &MultiDegree) -> Result<Vec<TriMonomial>> {
    let indexer = BlockIndexer::new(n, k)?;
    let mut out = Vec::with_capacity(indexer.len());
    let mut cur = indexer.first();
    loop {
        out.push(TriMonomial {
            size: n,
            entries: cur.clone(),
        });
        if !next_multiset_permutation(&mut cur) {
            break;
        }
    }
    debug_assert_eq!(out.len(), indexer.len());
    Ok(out)
}

/// Advances to the next permutation in lexicographic order; false at the end.
pub(crate) fn next_multiset_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic ranking of the monomials of one multidegree block.
///
/// Column `r` of a relation block is the monomial of rank `r`.
#[derive(Clone, Debug)]
pub struct BlockIndexer {
    n: usize,
    k: MultiDegree,
    len: usize,
}

impl BlockIndexer {
    pub fn new(n: usize, k: &MultiDegree) -> Result<Self> {
        k.check_size(n)?;
        Ok(BlockIndexer {
            n,
            k: k.clone(),
            len: multinomial(k.counts()) as usize,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }
    pub fn multidegree(&self) -> &MultiDegree {
        &self.k
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn first(&self) -> Vec<BasisIndex> {
        let mut v = Vec::with_capacity(num_positions(self.n));
        for (slot, &c) in self.k.counts().iter().enumerate() {
            v.extend(std::iter::repeat(BasisIndex::of((slot + 1) as u8)).take(c as usize));
        }
        v
    }

    /// Rank of an entry sequence with this block's multidegree, or `None`
    /// when the multidegree differs.
    pub fn rank_entries(&self, entries: &[BasisIndex]) -> Option<usize> {
        if entries.len() != num_positions(self.n) {
            return None;
        }
        let mut counts: Vec<u32> = self.k.counts().to_vec();
        let mut remaining = entries.len() as u32;
        // number of arrangements of the remaining multiset
        let mut total = self.len as u128;
        let mut rank: u128 = 0;
        for &b in entries {
            let slot = b.slot();
            if slot >= counts.len() || counts[slot] == 0 {
                return None;
            }
            for &c in counts.iter().take(slot) {
                rank += total * c as u128 / remaining as u128;
            }
            total = total * counts[slot] as u128 / remaining as u128;
            counts[slot] -= 1;
            remaining -= 1;
        }
        Some(rank as usize)
    }

    pub fn rank(&self, m: &TriMonomial) -> Option<usize> {
        if m.size() != self.n {
            return None;
        }
        self.rank_entries(m.entries())
    }

    pub fn unrank(&self, mut rank: usize) -> TriMonomial {
        assert!(rank < self.len, "rank {rank} out of range");
        let mut counts: Vec<u32> = self.k.counts().to_vec();
        let mut remaining = num_positions(self.n) as u32;
        let mut total = self.len as u128;
        let mut entries = Vec::with_capacity(remaining as usize);
        while remaining > 0 {
            for slot in 0..counts.len() {
                let c = counts[slot];
                if c == 0 {
                    continue;
                }
                let block = (total * c as u128 / remaining as u128) as usize;
                if rank < block {
                    entries.push(BasisIndex::of((slot + 1) as u8));
                    total = block as u128;
                    counts[slot] -= 1;
                    remaining -= 1;
                    break;
                }
                rank -= block;
            }
        }
        TriMonomial {
            size: self.n,
            entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::coeff;

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    #[test]
    fn position_order() {
        let ps: Vec<_> = positions(4).collect();
        assert_eq!(ps, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        for (idx, (i, j)) in ps.iter().enumerate() {
            assert_eq!(position_index(4, *i, *j), idx);
        }
        assert_eq!(positions(1).count(), 0);
        assert_eq!(positions(0).count(), 0);
    }

    #[test]
    fn unit_and_generator_are_distinct() {
        assert_ne!(TriMonomial::unit(), TriMonomial::generator());
        assert_eq!(TriMonomial::unit().arity(), 1);
        assert_eq!(TriMonomial::generator().arity(), 2);
        assert!(TriMonomial::new(3, vec![BasisIndex::of(1); 2]).is_err());
    }

    #[test]
    fn block_sizes() {
        assert_eq!(enumerate_block_monomials(3, &md(&[1, 1, 1])).unwrap().len(), 6);
        assert_eq!(enumerate_block_monomials(4, &md(&[3, 3])).unwrap().len(), 20);
        assert!(matches!(
            enumerate_block_monomials(3, &md(&[1, 1])),
            Err(Error::DegreeMismatch { .. })
        ));
        let mons = enumerate_block_monomials(3, &md(&[2, 1])).unwrap();
        let vals: Vec<Vec<usize>> = mons
            .iter()
            .map(|m| m.entries().iter().map(|b| b.value()).collect())
            .collect();
        assert_eq!(vals, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
    }

    #[test]
    fn zero_size_blocks() {
        for n in [0, 1] {
            let mons = enumerate_block_monomials(n, &md(&[0, 0])).unwrap();
            assert_eq!(mons.len(), 1);
            assert_eq!(mons[0].size(), n);
        }
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(multidegree_of(&TriMonomial::unit(), 3), md(&[0, 0, 0]));
        let m = TriMonomial::from_values(3, &[1, 1, 2]).unwrap();
        assert_eq!(multidegree_of(&m, 2), md(&[2, 1]));
        // a b b / a b / a in storage order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
        let top = TriMonomial::from_values(4, &[1, 2, 2, 1, 2, 1]).unwrap();
        assert_eq!(multidegree_of(&top, 2), md(&[3, 3]));
    }

    #[test]
    fn expansion_examples() {
        let e1 = GeneralVector::from_ints(&[1, 0]);
        let x = expand_multilinear(3, &[e1.clone(), e1.clone(), e1]).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert_eq!(
            x.terms().coefficient(&TriMonomial::from_values(3, &[1, 1, 1]).unwrap()),
            coeff(1)
        );

        let v = GeneralVector::from_ints(&[2, 3]);
        let x = expand_multilinear(2, &[v]).unwrap();
        assert_eq!(x.terms().coefficient(&TriMonomial::from_values(2, &[1]).unwrap()), coeff(2));
        assert_eq!(x.terms().coefficient(&TriMonomial::from_values(2, &[2]).unwrap()), coeff(3));

        let s = GeneralVector::from_ints(&[1, 1]);
        let x = expand_multilinear(3, &[s.clone(), s.clone(), s]).unwrap();
        assert_eq!(x.terms().len(), 8);
        assert!(x.terms().iter().all(|(_, c)| *c == coeff(1)));
    }

    #[test]
    fn indexer_matches_enumeration() {
        for (n, k) in [(3, md(&[1, 1, 1])), (4, md(&[3, 2, 1])), (4, md(&[2, 2, 2])), (5, md(&[4, 3, 3]))] {
            let idx = BlockIndexer::new(n, &k).unwrap();
            let mons = enumerate_block_monomials(n, &k).unwrap();
            assert_eq!(mons.len(), idx.len());
            for (r, m) in mons.iter().enumerate() {
                assert_eq!(idx.rank(m), Some(r));
                assert_eq!(&idx.unrank(r), m);
            }
            assert!(mons.windows(2).all(|w| w[0] < w[1]));
        }
        let idx = BlockIndexer::new(3, &md(&[2, 1])).unwrap();
        assert_eq!(idx.rank(&TriMonomial::from_values(3, &[1, 1, 1]).unwrap()), None);
    }

    #[test]
    fn appendix_block_width() {
        let idx = BlockIndexer::new(6, &md(&[5, 5, 5])).unwrap();
        assert_eq!(idx.len(), 756_756);
        assert_eq!(idx.rank(&idx.unrank(123_456)), Some(123_456));
    }
}
