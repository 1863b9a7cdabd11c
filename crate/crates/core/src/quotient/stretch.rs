//! Streaming elimination for blocks too large to assemble in memory.
//!
//! Relation rows are generated in a fixed order and fed one at a time into
//! an incremental echelon basis. Progress is checkpointed as
//!
//! ```text
//! rows_seen N
//! <echelon rows in the sparse-matrix text format>
//! ```
//!
//! so an interrupted run resumes at row `N`.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::text::{read_matrix, write_matrix};
use crate::linalg::{Field, FieldSpec, IncrementalEchelon, Limits};
use crate::quotient::engine::write_atomic;
use crate::quotient::relations::{for_each_block_row, triangle_patterns, Variant};
use crate::tensor::{BlockIndexer, MultiDegree};

/// The open block: size 6, three letters five times each.
pub fn stretch_block() -> (usize, MultiDegree) {
    (6, MultiDegree::new(vec![5, 5, 5]))
}

#[derive(Clone, Debug)]
pub struct StreamConfig {
    pub n: usize,
    pub k: MultiDegree,
    pub variant: Variant,
    pub limits: Limits,
    pub checkpoint: Option<PathBuf>,
    /// Checkpoint after this much wall time.
    pub checkpoint_interval: Duration,
    /// Stop after this many rows in total, leaving a checkpoint.
    pub stop_after: Option<u64>,
}

impl StreamConfig {
    pub fn new(n: usize, k: MultiDegree) -> Self {
        StreamConfig {
            n,
            k,
            variant: Variant::default(),
            limits: Limits::default(),
            checkpoint: None,
            checkpoint_interval: Duration::from_secs(300),
            stop_after: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StreamReport {
    pub n: usize,
    pub k: MultiDegree,
    pub field: FieldSpec,
    pub n_monomials: usize,
    pub rows_seen: u64,
    pub resumed_from: u64,
    pub rank: usize,
    pub dimension: usize,
    pub complete: bool,
    pub millis: u64,
}

/// Checkpoint file for one block and field inside `dir`.
pub fn checkpoint_path(dir: &Path, n: usize, k: &MultiDegree, field: FieldSpec) -> PathBuf {
    let k: Vec<String> = k.counts().iter().map(|c| c.to_string()).collect();
    dir.join(format!("stream.n{n}.{}.{}.ckpt", k.join("-"), field.slug()))
}

fn load<F: Field>(field: &F, path: &Path, n_cols: usize) -> Result<Option<(u64, IncrementalEchelon<F>)>> {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| Error::io(path, e))?;
    let seen = first
        .trim_end()
        .strip_prefix("rows_seen ")
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("bad checkpoint header in {}", path.display()),
        })?;
    let m = read_matrix(field.clone(), reader)?;
    if m.n_cols() != n_cols {
        return Err(Error::Parse {
            line: 2,
            message: format!("checkpoint has {} columns, block has {n_cols}", m.n_cols()),
        });
    }
    Ok(Some((seen, IncrementalEchelon::from_matrix(&m)?)))
}

fn save<F: Field>(path: &Path, seen: u64, e: &IncrementalEchelon<F>) -> Result<()> {
    let mut buf = format!("rows_seen {seen}\n").into_bytes();
    write_matrix(&e.to_matrix(), &mut buf).map_err(|err| Error::io(path, err))?;
    write_atomic(path, &buf)
}

/// Rank of the block's relations by streaming elimination, resuming from
/// the checkpoint when one exists.
pub fn stream_block_rank<F: Field>(config: &StreamConfig, field: &F) -> Result<StreamReport> {
    config.variant.check_characteristic(field.characteristic())?;
    let start = Instant::now();
    let indexer = BlockIndexer::new(config.n, &config.k)?;
    let n_cols = indexer.len();
    let name = format!("block n={} k={}", config.n, config.k);
    if matches!(field.spec(), FieldSpec::Rational) && n_cols > config.limits.max_rational_cols {
        return Err(Error::ResourceLimit(format!(
            "{name}: {n_cols} columns exceed the rational limit of {}",
            config.limits.max_rational_cols
        )));
    }
    let (resumed_from, mut echelon) = match &config.checkpoint {
        Some(p) => load(field, p, n_cols)?.unwrap_or_else(|| (0, IncrementalEchelon::new(field.clone(), n_cols))),
        None => (0, IncrementalEchelon::new(field.clone(), n_cols)),
    };
    let patterns = triangle_patterns(config.k.dim(), config.variant);
    let mut seen = 0u64;
    let mut last_save = Instant::now();
    let mut failure: Option<Error> = None;
    let mut stopped = false;
    for_each_block_row(&indexer, &patterns, |row| {
        if failure.is_some() || stopped {
            return;
        }
        seen += 1;
        if seen <= resumed_from {
            return;
        }
        let r = row.iter().map(|&(c, v)| (c as usize, field.from_i64(v))).collect();
        echelon.insert(r);
        if echelon.nnz() > config.limits.max_nonzeros {
            failure = Some(Error::ResourceLimit(format!(
                "{name}: {} stored nonzeros exceed the limit of {}",
                echelon.nnz(),
                config.limits.max_nonzeros
            )));
            return;
        }
        let due = last_save.elapsed() >= config.checkpoint_interval;
        let stop = config.stop_after.is_some_and(|s| seen >= s);
        if let Some(p) = &config.checkpoint {
            if due || stop {
                if let Err(e) = save(p, seen, &echelon) {
                    failure = Some(e);
                }
                last_save = Instant::now();
            }
        }
        stopped = stop;
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let complete = !stopped;
    if complete {
        if let Some(p) = &config.checkpoint {
            save(p, seen, &echelon)?;
        }
    }
    Ok(StreamReport {
        n: config.n,
        k: config.k.clone(),
        field: field.spec(),
        n_monomials: n_cols,
        rows_seen: seen,
        resumed_from,
        rank: echelon.rank(),
        dimension: n_cols - echelon.rank(),
        complete,
        millis: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::tensor::multinomial;

    #[test]
    fn stretch_block_has_expected_columns() {
        let (n, k) = stretch_block();
        assert_eq!(BlockIndexer::new(n, &k).unwrap().len(), 756_756);
        assert_eq!(multinomial(k.counts()), 756_756);
    }

    #[test]
    fn streaming_matches_assembled_rank() {
        let f = PrimeField::new(1_000_003).unwrap();
        let r = stream_block_rank(&StreamConfig::new(4, MultiDegree::new(vec![3, 2, 1])), &f).unwrap();
        assert!(r.complete);
        assert_eq!(r.dimension, 9);
    }

    #[test]
    fn interrupted_run_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let f = PrimeField::new(1_000_033).unwrap();
        let k = MultiDegree::new(vec![2, 2, 2]);
        let path = checkpoint_path(dir.path(), 4, &k, f.spec());
        let mut config = StreamConfig::new(4, k);
        config.checkpoint = Some(path.clone());
        config.stop_after = Some(40);
        let partial = stream_block_rank(&config, &f).unwrap();
        assert!(!partial.complete);
        assert_eq!(partial.rows_seen, 40);
        assert!(path.exists());
        config.stop_after = None;
        let done = stream_block_rank(&config, &f).unwrap();
        assert!(done.complete);
        assert_eq!(done.resumed_from, 40);
        assert_eq!(done.dimension, 22);
    }

    #[test]
    fn rational_guard() {
        let (n, k) = stretch_block();
        let err = stream_block_rank(&StreamConfig::new(n, k), &crate::linalg::Rationals).unwrap_err();
        assert!(err.to_string().contains("n=6 k=(5,5,5)"), "{err}");
    }
}
