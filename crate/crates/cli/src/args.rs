use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gsc::linalg::FieldSpec;
use gsc::quotient::Variant;
use gsc::tensor::MultiDegree;

use crate::verify::Mutant;

#[derive(Debug, Parser)]
#[command(name = "gsc", version, about = "Dimensions of the exterior GSC operad by exact sparse rank")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total and per-block quotient dimensions by arity.
    Dims(DimsArgs),
    /// Check every tabulated value and structural claim; exit 1 on any mismatch.
    VerifyPaper(VerifyArgs),
    /// Randomized law checks for the operad, bioperad and GSC structures.
    Axioms(AxiomsArgs),
    /// Normal form of an element read from a JSON file.
    Reduce(ReduceArgs),
    /// Write one relation block in the sparse-matrix text format.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// rational, prime (= prime:1000003) or prime:P
    #[arg(long, value_parser = parse_field)]
    pub field: Option<FieldSpec>,
    /// Relation generating set.
    #[arg(long, default_value_t = Variant::Three, value_parser = parse_variant)]
    pub variant: Variant,
    /// Compute blocks that vanish by the repetition and arity bounds.
    #[arg(long)]
    pub no_shortcut: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Block cache location (default ./.gsc-cache).
    #[arg(long, env = "GSC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Keep no block cache on disk.
    #[arg(long, conflicts_with = "cache_dir")]
    pub no_cache: bool,
    /// Refuse rational elimination above this many columns.
    #[arg(long, default_value_t = 10_000)]
    pub max_rational_cols: usize,
    /// Report wall-clock times (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 6)]
    pub max_arity: usize,
    /// List every multidegree block.
    #[arg(long)]
    pub per_block: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Also run the open size-6 block over three primes (hours).
    #[arg(long)]
    pub stretch: bool,
    /// Checkpoint directory for the open block.
    #[arg(long)]
    pub checkpoint_dir: Option<PathBuf>,
    /// Trials per law instead of the manifest's count.
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replace one structure by a broken one; the run must then fail.
    #[arg(long, value_enum)]
    pub mutant: Option<Mutant>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// JSON document with fields "size" and "terms".
    pub input: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub n: usize,
    /// Multidegree such as 2,1 or (2,1).
    #[arg(long, value_parser = parse_multidegree)]
    pub k: MultiDegree,
    /// Must equal the length of k when given.
    #[arg(long)]
    pub d: Option<usize>,
    /// Output file.
    #[arg(long, short)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: gsc::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

pub fn parse_multidegree(s: &str) -> Result<MultiDegree, String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let counts = inner
        .split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|_| format!("bad count '{c}' in multidegree '{s}'")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiDegree::new(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn multidegree_forms() {
        assert_eq!(parse_multidegree("2,1").unwrap(), MultiDegree::new(vec![2, 1]));
        assert_eq!(parse_multidegree("(5, 5, 5)").unwrap(), MultiDegree::new(vec![5, 5, 5]));
        assert!(parse_multidegree("2;1").is_err());
    }

    #[test]
    fn field_forms() {
        assert_eq!(parse_field("prime").unwrap(), FieldSpec::Prime(1_000_003));
        assert_eq!(parse_field("prime:5").unwrap(), FieldSpec::Prime(5));
        assert!(parse_field("prime:6").is_err());
    }
}
