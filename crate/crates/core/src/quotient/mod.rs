//! The quotient of the tensor GSC by the 2-alternating relations.

pub mod block;
pub mod engine;
pub mod oracle;
pub mod reduce;
pub mod relations;
pub mod stretch;

pub use block::{assemble_relation_block, pruned_by_repetition, BlockReport, RelationBlock};
pub use engine::{
    default_cache_dir, BlockKey, CachedField, ClassSummary, Engine, EngineConfig, PrimeEvidence, TotalReport,
};
pub use relations::{block_rows, raw_row_count, relation_generators, triangle_patterns, RelationRow, TrianglePattern, Variant};
pub use reduce::{
    lemma5_vanishing_check, lift_two_alternating, quotient_reduce, variant_span_equal, ComponentForm, Lemma5Report,
    LiftedFunctional, NormalForm, VariantReport,
};
pub use oracle::{saturation_oracle, saturation_oracle_with_seeds, OracleArity, OracleBlock, OracleReport};
pub use stretch::{checkpoint_path, stream_block_rank, stretch_block, StreamConfig, StreamReport};
