//! Graded components of the ideal computed from its generators alone.
//!
//! Each size `s` keeps an echelon basis of the ideal inside the full space of
//! size-`s` monomials. Generator images seed size 3, and rounds of `⋄`
//! composition with monomials on either side run until no rank grows.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diamond::diamond_monomial;
use crate::error::{Error, Result};
use crate::linalg::{Field, FieldSpec, IncrementalEchelon, SparseRow};
use crate::tensor::{
    expand_multilinear, multidegree_of, num_positions, BasisIndex, BlockIndexer, GeneralVector, MultiDegree,
    RectMonomial, TriMonomial,
};

pub const ORACLE_MAX_D: usize = 2;
pub const ORACLE_MAX_ARITY: usize = 5;
/// Seed vectors have coordinates in `0..=SEED_COORD_MAX`.
pub const SEED_COORD_MAX: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBlock {
    pub k: MultiDegree,
    pub n_monomials: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleArity {
    pub arity: usize,
    pub n_monomials: usize,
    pub rank: usize,
    pub quotient_dim: usize,
    pub blocks: Vec<OracleBlock>,
    /// Whether the block ranks add up to the total rank.
    pub graded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub d: usize,
    pub max_arity: usize,
    pub field: FieldSpec,
    pub rounds: usize,
    pub arities: Vec<OracleArity>,
}

impl OracleReport {
    pub fn arity(&self, m: usize) -> Option<&OracleArity> {
        self.arities.iter().find(|a| a.arity == m)
    }

    pub fn block_rank(&self, n: usize, k: &MultiDegree) -> Option<usize> {
        let a = self.arity(n + 1)?;
        a.blocks.iter().find(|b| &b.k == k).map(|b| b.rank)
    }
}

struct Space {
    d: usize,
    size: usize,
}

impl Space {
    fn len(&self) -> usize {
        self.d.pow(num_positions(self.size) as u32)
    }

    fn index(&self, m: &TriMonomial) -> usize {
        m.entries().iter().fold(0, |acc, b| acc * self.d + b.slot())
    }

    fn monomial(&self, mut idx: usize) -> TriMonomial {
        let len = num_positions(self.size);
        let mut entries = vec![BasisIndex::new(1, self.d).expect("d >= 1"); len];
        for e in entries.iter_mut().rev() {
            *e = BasisIndex::new((idx % self.d) as u32 + 1, self.d).expect("digit below d");
            idx /= self.d;
        }
        TriMonomial::new(self.size, entries).expect("entry count matches size")
    }
}

fn all_tri(size: usize, d: usize) -> Vec<TriMonomial> {
    let s = Space { d, size };
    (0..s.len()).map(|i| s.monomial(i)).collect()
}

fn all_rect(rows: usize, cols: usize, d: usize) -> Vec<RectMonomial> {
    let count = d.pow((rows * cols) as u32);
    (0..count)
        .map(|mut idx| {
            let mut vals = vec![0u8; rows * cols];
            for v in vals.iter_mut().rev() {
                *v = (idx % d) as u8 + 1;
                idx /= d;
            }
            RectMonomial::from_values(rows, cols, &vals).expect("values in range")
        })
        .collect()
}

fn sorted_row<F: Field>(field: &F, acc: BTreeMap<usize, F::Elem>) -> SparseRow<F::Elem> {
    acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
}

/// Seeds: `v ⊗ v ⊗ v` on the single triangle for every nonzero `v` with
/// coordinates in `0..=coord_max`.
pub fn generator_seeds<F: Field>(field: &F, d: usize, coord_max: i64) -> Result<Vec<SparseRow<F::Elem>>> {
    let space = Space { d, size: 3 };
    let mut out = Vec::new();
    let total = (coord_max + 1).pow(d as u32);
    for mut code in 1..total {
        let mut coords = vec![0i64; d];
        for c in coords.iter_mut() {
            *c = code % (coord_max + 1);
            code /= coord_max + 1;
        }
        let v = GeneralVector::from_ints(&coords);
        let x = expand_multilinear(3, &[v.clone(), v.clone(), v])?;
        let mut acc = BTreeMap::new();
        for (m, c) in x.terms().iter() {
            acc.insert(space.index(m), field.from_rational(c)?);
        }
        out.push(sorted_row(field, acc));
    }
    Ok(out)
}

/// Ideal ranks in every arity up to `max_arity`, with the default seeds.
pub fn saturation_oracle<F: Field>(d: usize, max_arity: usize, field: &F) -> Result<OracleReport> {
    saturation_oracle_with_seeds(d, max_arity, field, SEED_COORD_MAX)
}

pub fn saturation_oracle_with_seeds<F: Field>(
    d: usize,
    max_arity: usize,
    field: &F,
    coord_max: i64,
) -> Result<OracleReport> {
    if d == 0 || d > ORACLE_MAX_D || max_arity > ORACLE_MAX_ARITY {
        return Err(Error::ResourceLimit(format!(
            "saturation oracle is limited to 1 <= d <= {ORACLE_MAX_D} and arity <= {ORACLE_MAX_ARITY}, got d={d}, arity {max_arity}"
        )));
    }
    let max_size = max_arity.saturating_sub(1);
    let spaces: Vec<Space> = (0..=max_size).map(|size| Space { d, size }).collect();
    let mut ideal: Vec<IncrementalEchelon<F>> = spaces.iter().map(|s| IncrementalEchelon::new(field.clone(), s.len())).collect();
    if max_size >= 3 {
        for row in generator_seeds(field, d, coord_max)? {
            ideal[3].insert(row);
        }
    }
    let monomials: Vec<Vec<TriMonomial>> = (0..=max_size).map(|s| all_tri(s, d)).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let before: Vec<usize> = ideal.iter().map(|e| e.rank()).collect();
        for t in 3..=max_size {
            let rows: Vec<SparseRow<F::Elem>> = ideal[t].rows().cloned().collect();
            if rows.is_empty() {
                continue;
            }
            let decoded: Vec<Vec<(TriMonomial, F::Elem)>> = rows
                .iter()
                .map(|r| r.iter().map(|(c, v)| (spaces[t].monomial(*c), v.clone())).collect())
                .collect();
            // other factor of size o; the result has size t + o
            for o in 0..=(max_size - t) {
                let target = t + o;
                for other in &monomials[o] {
                    let (om, tm) = (o + 1, t + 1);
                    // relation on the right: x = other, grid o x t, i in 1..=om
                    for a in all_rect(o, t, d) {
                        for i in 1..=om {
                            for r in &decoded {
                                let mut acc = BTreeMap::new();
                                for (m, v) in r {
                                    let z = diamond_monomial(other, &a, i, m)?;
                                    acc.insert(spaces[target].index(&z), v.clone());
                                }
                                ideal[target].insert(sorted_row(field, acc));
                            }
                        }
                    }
                    // relation on the left: y = other, grid t x o, i in 1..=tm
                    for a in all_rect(t, o, d) {
                        for i in 1..=tm {
                            for r in &decoded {
                                let mut acc = BTreeMap::new();
                                for (m, v) in r {
                                    let z = diamond_monomial(m, &a, i, other)?;
                                    acc.insert(spaces[target].index(&z), v.clone());
                                }
                                ideal[target].insert(sorted_row(field, acc));
                            }
                        }
                    }
                }
            }
        }
        let after: Vec<usize> = ideal.iter().map(|e| e.rank()).collect();
        if after == before {
            break;
        }
    }
    let mut arities = Vec::new();
    for m in 1..=max_arity {
        let size = m - 1;
        let space = &spaces[size];
        let mut blocks = Vec::new();
        for k in MultiDegree::all_with_total(d, num_positions(size) as u32) {
            let indexer = BlockIndexer::new(size, &k)?;
            let mut proj = IncrementalEchelon::new(field.clone(), indexer.len());
            for row in ideal[size].rows() {
                let part: SparseRow<F::Elem> = {
                    let mut p: Vec<(usize, F::Elem)> = row
                        .iter()
                        .filter_map(|(c, v)| {
                            let mono = space.monomial(*c);
                            (multidegree_of(&mono, d) == k).then(|| (indexer.rank(&mono).expect("in block"), v.clone()))
                        })
                        .collect();
                    p.sort_by_key(|(c, _)| *c);
                    p
                };
                proj.insert(part);
            }
            blocks.push(OracleBlock {
                k,
                n_monomials: indexer.len(),
                rank: proj.rank(),
            });
        }
        let rank = ideal[size].rank();
        arities.push(OracleArity {
            arity: m,
            n_monomials: space.len(),
            rank,
            quotient_dim: space.len() - rank,
            graded: blocks.iter().map(|b| b.rank).sum::<usize>() == rank,
            blocks,
        });
    }
    Ok(OracleReport {
        d,
        max_arity,
        field: field.spec(),
        rounds,
        arities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank_sparse, PrimeField, Rationals};
    use crate::quotient::block::assemble_relation_block;
    use crate::quotient::relations::Variant;

    #[test]
    fn index_round_trip() {
        let s = Space { d: 2, size: 4 };
        for i in 0..s.len() {
            assert_eq!(s.index(&s.monomial(i)), i);
        }
    }

    #[test]
    fn one_letter() {
        let r = saturation_oracle(1, 4, &Rationals).unwrap();
        let dims: Vec<usize> = r.arities.iter().map(|a| a.quotient_dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 0]);
        assert_eq!(r.arity(4).unwrap().rank, 1);
    }

    #[test]
    fn two_letters_match_triangle_model() {
        let r = saturation_oracle(2, 5, &Rationals).unwrap();
        assert_eq!(r.arity(4).unwrap().rank, 4);
        assert_eq!(r.arity(4).unwrap().quotient_dim, 4);
        assert_eq!(r.arity(5).unwrap().quotient_dim, 1);
        for a in &r.arities {
            assert!(a.graded);
            for b in &a.blocks {
                let size = a.arity - 1;
                let block = assemble_relation_block(size, &b.k, Rationals, Variant::Three).unwrap();
                assert_eq!(rank_sparse(&block.matrix).unwrap(), b.rank, "block {} size {size}", b.k);
            }
        }
    }

    #[test]
    fn prime_field_agrees() {
        let q = saturation_oracle(2, 5, &Rationals).unwrap();
        let p = saturation_oracle(2, 5, &PrimeField::new(1_000_003).unwrap()).unwrap();
        assert_eq!(q.arities, p.arities);
    }

    #[test]
    fn zero_one_seeds_miss_a_direction() {
        let r = saturation_oracle_with_seeds(2, 4, &Rationals, 1).unwrap();
        assert_eq!(r.arity(4).unwrap().rank, 3);
    }

    #[test]
    fn guard() {
        assert!(matches!(saturation_oracle(3, 4, &Rationals), Err(Error::ResourceLimit(_))));
        assert!(matches!(saturation_oracle(2, 6, &Rationals), Err(Error::ResourceLimit(_))));
    }
}
