//! Expected values shipped with the binary.

use serde::Deserialize;

use gsc::tensor::MultiDegree;

pub const EXPECTED_VALUES: &str = include_str!("../data/expected_values.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub two_letter_totals: Totals,
    pub two_letter_blocks: Vec<Block>,
    pub three_letter_blocks: Vec<Block>,
    pub three_letter_totals: Totals,
    pub vanishing: Vec<Vanishing>,
    pub det: DetValues,
    pub laws: Laws,
    pub oracle: Oracle,
    pub variants: Variants,
    pub repetition: Repetition,
    pub stretch: Stretch,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Totals {
    pub d: usize,
    pub dimensions: Vec<usize>,
    #[serde(default)]
    pub breakdowns: Vec<Breakdown>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Breakdown {
    pub arity: usize,
    pub parts: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Block {
    pub n: usize,
    pub k: MultiDegree,
    pub dimension: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Vanishing {
    pub d: usize,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DetValues {
    pub normalization: [(i64, i64); 6],
    pub value: i64,
    pub samples: usize,
    pub cube_exponent: u32,
    pub matrices: usize,
    pub entry_bound: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Laws {
    pub trials: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Oracle {
    pub ranges: Vec<OracleRange>,
    pub two_letter_arity_five: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OracleRange {
    pub d: usize,
    pub max_arity: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Variants {
    pub max_d: usize,
    pub max_n: usize,
    pub prime: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Repetition {
    pub samples: usize,
    pub cases: Vec<RepetitionCase>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RepetitionCase {
    pub n: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Stretch {
    pub n: usize,
    pub k: MultiDegree,
    pub columns: usize,
}

impl Manifest {
    pub fn embedded() -> Manifest {
        serde_json::from_str(EXPECTED_VALUES).expect("embedded manifest is valid")
    }
}
