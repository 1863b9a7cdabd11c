pub mod bioperad;
pub mod classical;
pub mod det;
pub mod diamond;
pub mod error;
pub mod laws;
pub mod linalg;
pub mod quotient;
pub mod tensor;

pub use error::{Error, Result};
