//! Generators of the ideal in a fixed size, one multidegree block at a time.
//!
//! Every relation sits on an index triangle `i < j < l`: the positions
//! `(i,j), (i,l), (j,l)` carry a fixed combination of letters (a
//! [`TrianglePattern`]) and all other positions carry a fixed fill.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::tri::next_multiset_permutation;
use crate::tensor::{
    expand_multilinear, num_positions, position_index, BasisIndex, BlockIndexer, Coeff, GeneralVector, LinComb,
    MultiDegree, TriElement, TriMonomial,
};

/// Which generating set describes the degree-3 relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Variant {
    /// Arrangement sums of each letter multiset.
    One,
    /// `[v,v,u] + [v,u,v] + [u,v,v]` and its polarization in `v`.
    Two,
    /// Sums over the six placements of `(u, v, w)`.
    Three,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::One, Variant::Two, Variant::Three];

    pub fn number(self) -> u8 {
        match self {
            Variant::One => 1,
            Variant::Two => 2,
            Variant::Three => 3,
        }
    }

    /// Variants 2 and 3 divide by 2 and 3 when normalizing.
    pub fn check_characteristic(self, p: u64) -> Result<()> {
        if self != Variant::One && (p == 2 || p == 3) {
            return Err(Error::CharacteristicUnsupported(p));
        }
        Ok(())
    }
}

impl Default for Variant {
    fn default() -> Self {
        Variant::Three
    }
}

impl From<Variant> for u8 {
    fn from(v: Variant) -> u8 {
        v.number()
    }
}

impl TryFrom<u8> for Variant {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Variant::One),
            2 => Ok(Variant::Two),
            3 => Ok(Variant::Three),
            _ => Err(format!("variant must be 1, 2 or 3, got {v}")),
        }
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: u8 = s.trim().parse().map_err(|_| format!("variant must be 1, 2 or 3, got '{s}'"))?;
        Variant::try_from(v)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Letters on the positions `(1,2), (1,3), (2,3)` of a triangle.
pub type Triple = [BasisIndex; 3];

/// A normalized relation on one triangle: integer coefficients, the first
/// being 1, all terms sharing one letter multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrianglePattern {
    occupants: MultiDegree,
    terms: Vec<(Triple, i64)>,
}

impl TrianglePattern {
    pub fn occupants(&self) -> &MultiDegree {
        &self.occupants
    }
    pub fn terms(&self) -> &[(Triple, i64)] {
        &self.terms
    }

    fn from_comb(comb: &LinComb<Triple>, d: usize) -> Option<Self> {
        let (_, lead) = comb.iter().next()?;
        let lead = lead.clone();
        let mut occupants: Option<MultiDegree> = None;
        let mut terms = Vec::with_capacity(comb.len());
        for (t, c) in comb.iter() {
            let mut k = MultiDegree::zero(d);
            for b in t {
                k.bump(*b);
            }
            match &occupants {
                None => occupants = Some(k),
                Some(o) => assert_eq!(o, &k, "triangle relation mixes multidegrees"),
            }
            let q = c / &lead;
            assert!(q.is_integer(), "normalized relation has a fractional coefficient");
            terms.push((*t, q.to_integer().to_i64().expect("small coefficient")));
        }
        Some(TrianglePattern {
            occupants: occupants?,
            terms,
        })
    }
}

fn basis(d: usize) -> Vec<GeneralVector> {
    (1..=d)
        .map(|b| GeneralVector::basis(BasisIndex::of(b as u8), d))
        .collect()
}

/// `⊗(1, a, b; 1, c; 1)` expanded over basis letters.
fn triangle(a: &GeneralVector, b: &GeneralVector, c: &GeneralVector) -> LinComb<Triple> {
    let x: TriElement = expand_multilinear(3, &[a.clone(), b.clone(), c.clone()]).expect("three vectors");
    x.terms().map(|m| {
        let e = m.entries();
        [e[0], e[1], e[2]]
    })
}

fn pair_polarization(u: &GeneralVector, v: &GeneralVector) -> LinComb<Triple> {
    triangle(v, v, u).add(&triangle(v, u, v)).add(&triangle(u, v, v))
}

fn triple_polarization(u: &GeneralVector, v: &GeneralVector, w: &GeneralVector) -> LinComb<Triple> {
    [
        triangle(u, v, w),
        triangle(u, w, v),
        triangle(v, u, w),
        triangle(w, u, v),
        triangle(v, w, u),
        triangle(w, v, u),
    ]
    .iter()
    .fold(LinComb::zero(), |acc, t| acc.add(t))
}

fn multisets(d: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 1..=d as u8 {
        for b in a..=d as u8 {
            for c in b..=d as u8 {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// The distinct triangle relations of a variant over `V = k^d`.
pub fn triangle_patterns(d: usize, variant: Variant) -> Vec<TrianglePattern> {
    let mut combs: Vec<LinComb<Triple>> = Vec::new();
    match variant {
        Variant::One => {
            for ms in multisets(d) {
                let mut letters = ms.map(BasisIndex::of);
                let mut comb = LinComb::zero();
                loop {
                    comb.add_term(letters, Coeff::one());
                    if !next_multiset_permutation(&mut letters) {
                        break;
                    }
                }
                combs.push(comb);
            }
        }
        Variant::Two => {
            let e = basis(d);
            for u in &e {
                for v in &e {
                    combs.push(pair_polarization(u, v));
                }
                for (a, v) in e.iter().enumerate() {
                    for w in &e[a + 1..] {
                        let vw = v.combine(&Coeff::one(), w, &Coeff::one());
                        combs.push(pair_polarization(u, &vw).sub(&pair_polarization(u, v)).sub(&pair_polarization(u, w)));
                    }
                }
            }
        }
        Variant::Three => {
            let e = basis(d);
            for u in &e {
                for v in &e {
                    for w in &e {
                        combs.push(triple_polarization(u, v, w));
                    }
                }
            }
        }
    }
    let set: BTreeSet<TrianglePattern> = combs
        .iter()
        .filter_map(|c| TrianglePattern::from_comb(c, d))
        .collect();
    set.into_iter().collect()
}

/// Visits every relation row of the block `(n, k)`, as sorted
/// `(column, coefficient)` pairs. Rows may repeat.
pub fn for_each_block_row(
    indexer: &BlockIndexer,
    patterns: &[TrianglePattern],
    mut visit: impl FnMut(&[(u32, i64)]),
) {
    let n = indexer.size();
    let k = indexer.multidegree();
    let len = num_positions(n);
    let mut entries = vec![BasisIndex::of(1); len];
    let mut row: Vec<(u32, i64)> = Vec::with_capacity(6);
    for i in 1..=n {
        for j in i + 1..=n {
            for l in j + 1..=n {
                let tri = [
                    position_index(n, i, j),
                    position_index(n, i, l),
                    position_index(n, j, l),
                ];
                let rest: Vec<usize> = (0..len).filter(|p| !tri.contains(p)).collect();
                for pat in patterns {
                    let occ = pat.occupants().counts();
                    if occ.iter().zip(k.counts()).any(|(o, c)| o > c) {
                        continue;
                    }
                    let mut fill: Vec<BasisIndex> = Vec::with_capacity(rest.len());
                    for (slot, (&c, &o)) in k.counts().iter().zip(occ).enumerate() {
                        fill.extend(std::iter::repeat(BasisIndex::of(slot as u8 + 1)).take((c - o) as usize));
                    }
                    loop {
                        for (p, b) in rest.iter().zip(&fill) {
                            entries[*p] = *b;
                        }
                        row.clear();
                        for (t, c) in pat.terms() {
                            for (p, b) in tri.iter().zip(t) {
                                entries[*p] = *b;
                            }
                            let col = indexer.rank_entries(&entries).expect("row stays in its block");
                            row.push((col as u32, *c));
                        }
                        row.sort_unstable();
                        visit(&row);
                        if !next_multiset_permutation(&mut fill) {
                            break;
                        }
                    }
                }
            }
        }
    }
}

/// Deduplicated relation rows of one block, in lexicographic order.
pub fn block_rows(indexer: &BlockIndexer, patterns: &[TrianglePattern]) -> Vec<Vec<(u32, i64)>> {
    let mut rows: Vec<Vec<(u32, i64)>> = Vec::new();
    for_each_block_row(indexer, patterns, |r| rows.push(r.to_vec()));
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// A relation row of a whole size, tagged with its block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    pub multidegree: MultiDegree,
    pub terms: Vec<(TriMonomial, i64)>,
}

impl RelationRow {
    pub fn to_element(&self) -> TriElement {
        let size = self.terms.first().map(|(m, _)| m.size()).unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), crate::tensor::coeff(*c)))
            .collect();
        TriElement::from_terms(size, terms).expect("row terms share a size")
    }
}

/// All deduplicated relation rows in size `n` over `V = k^d`, block by block
/// in the order of [`MultiDegree::all_with_total`].
pub fn relation_generators(n: usize, d: usize, variant: Variant, characteristic: u64) -> Result<Vec<RelationRow>> {
    variant.check_characteristic(characteristic)?;
    if n < 3 {
        return Ok(Vec::new());
    }
    let patterns = triangle_patterns(d, variant);
    let mut out = Vec::new();
    for k in MultiDegree::all_with_total(d, num_positions(n) as u32) {
        let indexer = BlockIndexer::new(n, &k)?;
        for row in block_rows(&indexer, &patterns) {
            out.push(RelationRow {
                multidegree: k.clone(),
                terms: row
                    .into_iter()
                    .map(|(c, v)| (indexer.unrank(c as usize), v))
                    .collect(),
            });
        }
    }
    Ok(out)
}

/// Number of relation rows visited before deduplication.
pub fn raw_row_count(indexer: &BlockIndexer, patterns: &[TrianglePattern]) -> u64 {
    let mut count = 0u64;
    for_each_block_row(indexer, patterns, |_| count += 1);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    #[test]
    fn pattern_shapes() {
        for d in 1..=3 {
            for v in Variant::ALL {
                let pats = triangle_patterns(d, v);
                // one pattern per letter multiset, all coefficients 1
                assert_eq!(pats.len(), multisets(d).len(), "d={d} variant {v}");
                for p in &pats {
                    assert!(p.terms().iter().all(|(_, c)| *c == 1));
                    assert!([1, 3, 6].contains(&p.terms().len()));
                }
            }
        }
    }

    #[test]
    fn variants_agree_on_patterns() {
        for d in 1..=3 {
            let one = triangle_patterns(d, Variant::One);
            assert_eq!(triangle_patterns(d, Variant::Two), one);
            assert_eq!(triangle_patterns(d, Variant::Three), one);
        }
    }

    #[test]
    fn single_letter_size_three() {
        for v in Variant::ALL {
            let rows = relation_generators(3, 1, v, 0).unwrap();
            assert_eq!(rows.len(), 1);
            assert_eq!(rows[0].terms.len(), 1);
            assert_eq!(rows[0].terms[0].1, 1);
        }
    }

    #[test]
    fn distinct_letters_give_one_six_term_row() {
        let idx = BlockIndexer::new(3, &md(&[1, 1, 1])).unwrap();
        let rows = block_rows(&idx, &triangle_patterns(3, Variant::Three));
        assert_eq!(rows, vec![(0..6).map(|c| (c, 1)).collect::<Vec<_>>()]);
    }

    #[test]
    fn two_letter_counts() {
        let idx = BlockIndexer::new(4, &md(&[3, 3])).unwrap();
        let pats = triangle_patterns(2, Variant::One);
        assert_eq!(raw_row_count(&idx, &pats), 32);
        let idx = BlockIndexer::new(3, &md(&[2, 1])).unwrap();
        assert_eq!(block_rows(&idx, &pats), vec![vec![(0, 1), (1, 1), (2, 1)]]);
    }

    #[test]
    fn small_characteristic_refused() {
        assert!(matches!(
            relation_generators(3, 2, Variant::Two, 2),
            Err(Error::CharacteristicUnsupported(2))
        ));
        assert!(matches!(
            relation_generators(3, 2, Variant::Three, 3),
            Err(Error::CharacteristicUnsupported(3))
        ));
        assert!(relation_generators(3, 2, Variant::One, 3).is_ok());
        assert!(relation_generators(2, 2, Variant::Three, 0).unwrap().is_empty());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("2".parse::<Variant>().unwrap(), Variant::Two);
        assert!("4".parse::<Variant>().is_err());
        assert_eq!(Variant::default(), Variant::Three);
    }
}
