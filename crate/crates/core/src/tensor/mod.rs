//! Tensor words, triangular monomials and rectangular grids over `V = k^d`.

pub mod basis;
pub mod json;
pub mod lincomb;
pub mod rect;
pub mod tri;

pub use basis::{multinomial, BasisIndex, GeneralVector, MultiDegree};
pub use lincomb::{bilinear, coeff, trilinear, Coeff, LinComb};
pub use json::{parse_tri_element, tri_element_to_json};
pub use rect::{RectElement, RectMonomial};
pub use tri::{
    enumerate_block_monomials, expand_multilinear, multidegree_of, num_positions, position_index,
    positions, BlockIndexer, TriElement, TriMonomial,
};
