use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{Field, FieldSpec, SparseMatrix};
use crate::quotient::relations::{block_rows, triangle_patterns, Variant};
use crate::tensor::{enumerate_block_monomials, BlockIndexer, MultiDegree, TriMonomial};

/// The relation matrix of one multidegree block: rows are relations,
/// columns are the block's monomials in canonical order.
#[derive(Clone, Debug)]
pub struct RelationBlock<F: Field> {
    pub n: usize,
    pub k: MultiDegree,
    pub variant: Variant,
    pub indexer: BlockIndexer,
    pub matrix: SparseMatrix<F>,
}

impl<F: Field> RelationBlock<F> {
    pub fn n_monomials(&self) -> usize {
        self.indexer.len()
    }

    /// Column `c` is `monomial_order()[c]`.
    pub fn monomial_order(&self) -> Vec<TriMonomial> {
        enumerate_block_monomials(self.n, &self.k).expect("block was validated")
    }
}

/// Assembles the deduplicated relation rows of the block `(n, k)` with
/// `d = k.dim()`.
pub fn assemble_relation_block<F: Field>(n: usize, k: &MultiDegree, field: F, variant: Variant) -> Result<RelationBlock<F>> {
    let indexer = BlockIndexer::new(n, k)?;
    variant.check_characteristic(field.characteristic())?;
    let rows = if n < 3 {
        Vec::new()
    } else {
        block_rows(&indexer, &triangle_patterns(k.dim(), variant))
    };
    let sparse = rows.into_iter().map(|r| {
        r.into_iter()
            .map(|(c, v)| (c as usize, field.from_i64(v)))
            .collect::<Vec<_>>()
    });
    let matrix = SparseMatrix::from_rows(field.clone(), indexer.len(), sparse)?;
    Ok(RelationBlock {
        n,
        k: k.clone(),
        variant,
        indexer,
        matrix,
    })
}

/// Whether the block vanishes because some letter fills at least `n` slots.
pub fn pruned_by_repetition(n: usize, k: &MultiDegree) -> bool {
    n >= 3 && k.max() as usize >= n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub d: usize,
    pub n: usize,
    pub k: MultiDegree,
    pub n_monomials: usize,
    /// `None` when the block was pruned without assembling relations.
    pub n_rows: Option<usize>,
    pub rank: usize,
    pub dimension: usize,
    pub field: FieldSpec,
    pub variant: Variant,
    pub pruned: bool,
    pub millis: u64,
}

impl BlockReport {
    pub fn arity(&self) -> usize {
        self.n + 1
    }

    /// The same report with the timing zeroed, for reproducible output.
    pub fn without_timing(&self) -> BlockReport {
        BlockReport {
            millis: 0,
            ..self.clone()
        }
    }
}

impl fmt::Display for BlockReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.n_rows.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        write!(
            f,
            "E_{}^{} = {} ({} monomials, {} rows, rank {}, {}{})",
            self.n,
            self.k,
            self.dimension,
            self.n_monomials,
            rows,
            self.rank,
            self.field,
            if self.pruned { ", pruned" } else { "" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank_sparse, rref_sparse, PrimeField, Rationals};

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    #[test]
    fn three_column_block() {
        let b = assemble_relation_block(3, &md(&[2, 1]), Rationals, Variant::Three).unwrap();
        assert_eq!(b.n_monomials(), 3);
        assert_eq!(b.matrix.n_rows(), 1);
        assert_eq!(rank_sparse(&b.matrix).unwrap(), 1);
        let e = rref_sparse(&b.matrix).unwrap();
        assert_eq!(e.pivot_cols, vec![0]);
        assert!(e.reduced_rows[0].iter().all(|(_, v)| *v == Rationals.one()));
        assert_eq!(e.reduced_rows[0].len(), 3);
    }

    #[test]
    fn rows_are_short_and_homogeneous() {
        let k = md(&[3, 2, 1]);
        let b = assemble_relation_block(4, &k, PrimeField::new(1_000_003).unwrap(), Variant::One).unwrap();
        let order = b.monomial_order();
        for row in b.matrix.rows() {
            assert!([1, 3, 6].contains(&row.len()));
            assert!(row.iter().all(|(_, v)| *v == 1));
            for (c, _) in row {
                assert_eq!(crate::tensor::multidegree_of(&order[*c], 3), k);
            }
        }
    }

    #[test]
    fn two_letter_size_four() {
        let b = assemble_relation_block(4, &md(&[3, 3]), Rationals, Variant::Three).unwrap();
        assert_eq!(b.n_monomials(), 20);
        assert_eq!(rank_sparse(&b.matrix).unwrap(), 19);
    }

    #[test]
    fn pruning_rule() {
        assert!(pruned_by_repetition(4, &md(&[4, 2])));
        assert!(!pruned_by_repetition(4, &md(&[3, 3])));
        assert!(!pruned_by_repetition(0, &md(&[0, 0])));
    }

    #[test]
    fn small_fields_refused_for_polarized_variants() {
        let k = md(&[2, 1]);
        assert!(assemble_relation_block(3, &k, PrimeField::new_unchecked(3).unwrap(), Variant::Three).is_err());
        assert!(assemble_relation_block(3, &k, PrimeField::new_unchecked(3).unwrap(), Variant::One).is_ok());
    }
}
