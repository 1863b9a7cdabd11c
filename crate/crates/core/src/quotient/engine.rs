//! Block dimensions with an in-memory and an on-disk cache.
//!
//! Disk layout under the cache directory:
//!
//! ```text
//! v1/d{d}/n{n}/{k1-k2-..}.{field}.v{variant}.json   BlockReport
//! v1/d{d}/n{n}/{k1-k2-..}.{field}.v{variant}.rref   reduced rows, sparse text format
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::text::{read_matrix, write_matrix};
use crate::linalg::{
    rank_sparse_with, rref_sparse_with, EchelonForm, Field, FieldSpec, Limits, PrimeField, Rationals, SparseMatrix,
};
use crate::quotient::block::{assemble_relation_block, pruned_by_repetition, BlockReport};
use crate::quotient::relations::Variant;
use crate::tensor::{multinomial, num_positions, MultiDegree};

pub const CACHE_SCHEMA: &str = "v1";
pub const CACHE_ENV: &str = "GSC_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".gsc-cache";

/// The cache directory named by `GSC_CACHE_DIR`, or `./.gsc-cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockKey {
    pub n: usize,
    pub k: MultiDegree,
    pub field: FieldSpec,
    pub variant: Variant,
}

impl BlockKey {
    fn file_stem(&self) -> String {
        let k: Vec<String> = self.k.counts().iter().map(|c| c.to_string()).collect();
        format!("{}.{}.v{}", k.join("-"), self.field.slug(), self.variant)
    }

    fn dir(&self, root: &Path) -> PathBuf {
        root.join(CACHE_SCHEMA)
            .join(format!("d{}", self.k.dim()))
            .join(format!("n{}", self.n))
    }
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub variant: Variant,
    /// Report blocks with a letter repeated at least `n` times, and arities
    /// above `2d + 1`, as zero without computing.
    pub shortcut: bool,
    pub limits: Limits,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            variant: Variant::default(),
            shortcut: true,
            limits: Limits::default(),
            cache_dir: None,
        }
    }
}

type EchelonCache<F> = RwLock<HashMap<BlockKey, Arc<EchelonForm<F>>>>;

/// Shared state for block computations. Safe to use from many threads.
#[derive(Debug, Default)]
pub struct Engine {
    config: EngineConfig,
    reports: RwLock<HashMap<BlockKey, BlockReport>>,
    rational: EchelonCache<Rationals>,
    prime: EchelonCache<PrimeField>,
}

/// Fields whose echelon forms the engine caches.
pub trait CachedField: Field + Sized {
    fn echelon_cache(engine: &Engine) -> &EchelonCache<Self>;
}

impl CachedField for Rationals {
    fn echelon_cache(engine: &Engine) -> &EchelonCache<Self> {
        &engine.rational
    }
}

impl CachedField for PrimeField {
    fn echelon_cache(engine: &Engine) -> &EchelonCache<Self> {
        &engine.prime
    }
}

/// Calls the body with the concrete field named by a spec.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            $crate::linalg::FieldSpec::Rational => {
                let $f = $crate::linalg::Rationals;
                $body
            }
            $crate::linalg::FieldSpec::Prime(p) => {
                let $f = $crate::linalg::PrimeField::new_unchecked(p)?;
                $body
            }
        }
    };
}

/// One multidegree over several primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEvidence {
    pub n: usize,
    pub k: MultiDegree,
    pub reports: Vec<BlockReport>,
    pub agree: bool,
    /// Smallest dimension seen; an upper bound for the rational dimension.
    pub upper_bound: usize,
}

/// Blocks of one permutation class of multidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub k: MultiDegree,
    pub dimension: usize,
    pub multiplicity: u64,
    pub contribution: usize,
    /// Whether every block of the class has the same dimension.
    pub uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalReport {
    pub d: usize,
    pub arity: usize,
    pub field: FieldSpec,
    pub variant: Variant,
    pub total: usize,
    /// Zero by the arity bound, with no block computed.
    pub pruned: bool,
    pub blocks: Vec<BlockReport>,
    pub classes: Vec<ClassSummary>,
}

impl TotalReport {
    /// Contributions of the classes, largest multidegree first.
    pub fn breakdown(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.contribution).filter(|&c| c > 0).collect()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Engine {
            config,
            ..Engine::default()
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    /// An engine with the same settings and no shared caches except disk.
    pub fn with_shortcut(&self, shortcut: bool) -> Engine {
        Engine::new(EngineConfig {
            shortcut,
            ..self.config.clone()
        })
    }

    fn key(&self, n: usize, k: &MultiDegree, field: FieldSpec) -> BlockKey {
        BlockKey {
            n,
            k: k.clone(),
            field,
            variant: self.config.variant,
        }
    }

    fn name(n: usize, k: &MultiDegree) -> String {
        format!("block n={n} k={k}")
    }

    /// Dimension of the quotient in the block `(n, k)`.
    pub fn block_dimension(&self, n: usize, k: &MultiDegree, field: FieldSpec) -> Result<BlockReport> {
        k.check_size(n)?;
        let key = self.key(n, k, field);
        if self.config.shortcut && pruned_by_repetition(n, k) {
            let len = multinomial(k.counts()) as usize;
            return Ok(BlockReport {
                d: k.dim(),
                n,
                k: k.clone(),
                n_monomials: len,
                n_rows: None,
                rank: len,
                dimension: 0,
                field,
                variant: key.variant,
                pruned: true,
                millis: 0,
            });
        }
        if let Some(r) = self.reports.read().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        if let Some(r) = self.read_report(&key) {
            self.remember(&key, &r);
            return Ok(r);
        }
        let start = Instant::now();
        let (n_rows, n_cols, rank) = with_field!(field, |f| self.block_rank(f, n, k)?);
        let report = BlockReport {
            d: k.dim(),
            n,
            k: k.clone(),
            n_monomials: n_cols,
            n_rows: Some(n_rows),
            rank,
            dimension: n_cols - rank,
            field,
            variant: key.variant,
            pruned: false,
            millis: start.elapsed().as_millis() as u64,
        };
        self.write_report(&key, &report)?;
        self.remember(&key, &report);
        Ok(report)
    }

    fn remember(&self, key: &BlockKey, report: &BlockReport) {
        self.reports
            .write()
            .expect("cache lock")
            .entry(key.clone())
            .or_insert_with(|| report.clone());
    }

    fn block_rank<F: Field>(&self, f: F, n: usize, k: &MultiDegree) -> Result<(usize, usize, usize)> {
        let block = assemble_relation_block(n, k, f.clone(), self.config.variant)?;
        let rank = rank_sparse_with(&block.matrix, &self.config.limits)
            .map_err(|e| annotate(e, &Self::name(n, k)))?;
        Ok((block.matrix.n_rows(), block.n_monomials(), rank))
    }

    /// Reduced row-echelon form of the block's relations, never pruned.
    pub fn echelon<F: CachedField>(&self, field: &F, n: usize, k: &MultiDegree) -> Result<Arc<EchelonForm<F>>> {
        k.check_size(n)?;
        let key = self.key(n, k, field.spec());
        if let Some(e) = F::echelon_cache(self).read().expect("cache lock").get(&key) {
            return Ok(e.clone());
        }
        let e = match self.read_echelon(field, &key) {
            Some(e) => e,
            None => {
                let block = assemble_relation_block(n, k, field.clone(), self.config.variant)?;
                let e = rref_sparse_with(&block.matrix, &self.config.limits)
                    .map_err(|e| annotate(e, &Self::name(n, k)))?;
                self.write_echelon(field, &key, &e)?;
                e
            }
        };
        let e = Arc::new(e);
        let mut cache = F::echelon_cache(self).write().expect("cache lock");
        Ok(cache.entry(key).or_insert(e).clone())
    }

    /// The block over each prime, with agreement and the smallest dimension.
    pub fn prime_evidence(&self, n: usize, k: &MultiDegree, primes: &[u64]) -> Result<PrimeEvidence> {
        let reports = primes
            .iter()
            .map(|&p| self.block_dimension(n, k, FieldSpec::prime(p)?))
            .collect::<Result<Vec<_>>>()?;
        let upper_bound = reports.iter().map(|r| r.dimension).min().unwrap_or(0);
        let agree = reports.iter().all(|r| r.dimension == upper_bound);
        Ok(PrimeEvidence {
            n,
            k: k.clone(),
            reports,
            agree,
            upper_bound,
        })
    }

    /// Every block of size `m - 1`, computed in parallel.
    pub fn all_blocks(&self, m: usize, d: usize, field: FieldSpec) -> Result<Vec<BlockReport>> {
        let n = m - 1;
        MultiDegree::all_with_total(d, num_positions(n) as u32)
            .par_iter()
            .map(|k| self.block_dimension(n, k, field))
            .collect()
    }

    /// Dimension of the quotient in arity `m`, with per-block detail.
    pub fn total_dimension(&self, m: usize, d: usize, field: FieldSpec) -> Result<TotalReport> {
        if m == 0 {
            return Err(Error::ShapeMismatch("arity must be at least 1".into()));
        }
        if self.config.shortcut && m > 2 * d + 1 {
            return Ok(TotalReport {
                d,
                arity: m,
                field,
                variant: self.config.variant,
                total: 0,
                pruned: true,
                blocks: Vec::new(),
                classes: Vec::new(),
            });
        }
        let blocks = self.all_blocks(m, d, field)?;
        let total = blocks.iter().map(|b| b.dimension).sum();
        let mut grouped: BTreeMap<MultiDegree, Vec<usize>> = BTreeMap::new();
        for b in &blocks {
            grouped.entry(b.k.sorted_desc()).or_default().push(b.dimension);
        }
        let classes = grouped
            .into_iter()
            .rev()
            .map(|(k, dims)| ClassSummary {
                multiplicity: k.permutation_count(),
                dimension: dims[0],
                contribution: dims.iter().sum(),
                uniform: dims.iter().all(|&x| x == dims[0]),
                k,
            })
            .collect();
        Ok(TotalReport {
            d,
            arity: m,
            field,
            variant: self.config.variant,
            total,
            pruned: false,
            blocks,
            classes,
        })
    }

    fn paths(&self, key: &BlockKey) -> Option<(PathBuf, PathBuf)> {
        let root = self.config.cache_dir.as_ref()?;
        let dir = key.dir(root);
        let stem = key.file_stem();
        Some((dir.join(format!("{stem}.json")), dir.join(format!("{stem}.rref"))))
    }

    fn read_report(&self, key: &BlockKey) -> Option<BlockReport> {
        let (json, _) = self.paths(key)?;
        let text = fs::read_to_string(json).ok()?;
        let r: BlockReport = serde_json::from_str(&text).ok()?;
        // a stale or foreign file is ignored and recomputed
        let matches = r.n == key.n && r.k == key.k && r.field == key.field && r.variant == key.variant && !r.pruned;
        matches.then_some(r)
    }

    fn write_report(&self, key: &BlockKey, report: &BlockReport) -> Result<()> {
        let Some((json, _)) = self.paths(key) else {
            return Ok(());
        };
        let text = serde_json::to_string_pretty(report).expect("report serializes");
        write_atomic(&json, text.as_bytes())
    }

    fn read_echelon<F: Field>(&self, field: &F, key: &BlockKey) -> Option<EchelonForm<F>> {
        let (_, rref) = self.paths(key)?;
        let file = fs::File::open(rref).ok()?;
        let m = read_matrix(field.clone(), BufReader::new(file)).ok()?;
        EchelonForm::from_reduced_rows(field, m.n_cols(), m.into_rows()).ok()
    }

    fn write_echelon<F: Field>(&self, field: &F, key: &BlockKey, e: &EchelonForm<F>) -> Result<()> {
        let Some((_, rref)) = self.paths(key) else {
            return Ok(());
        };
        let m = SparseMatrix::from_rows(field.clone(), e.n_cols, e.reduced_rows.iter().cloned())?;
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).map_err(|err| Error::io(&rref, err))?;
        write_atomic(&rref, &buf)
    }
}

fn annotate(e: Error, block: &str) -> Error {
    match e {
        Error::ResourceLimit(msg) => Error::ResourceLimit(format!("{block}: {msg}")),
        other => other,
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = dir.join(format!(
        ".{}.{}.{:?}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("cache"),
        std::process::id(),
        std::thread::current().id()
    ));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    #[test]
    fn two_letter_totals() {
        let e = Engine::default();
        let dims: Vec<usize> = (1..=6)
            .map(|m| e.total_dimension(m, 2, FieldSpec::Rational).unwrap().total)
            .collect();
        assert_eq!(dims, vec![1, 1, 2, 4, 1, 0]);
    }

    #[test]
    fn one_letter_totals() {
        let e = Engine::default();
        let dims: Vec<usize> = (1..=4)
            .map(|m| e.total_dimension(m, 1, FieldSpec::Rational).unwrap().total)
            .collect();
        assert_eq!(dims, vec![1, 1, 1, 0]);
        let strict = e.with_shortcut(false);
        assert_eq!(strict.total_dimension(4, 1, FieldSpec::Rational).unwrap().total, 0);
    }

    #[test]
    fn pruned_block_is_flagged() {
        let e = Engine::default();
        let r = e.block_dimension(4, &md(&[4, 2]), FieldSpec::Rational).unwrap();
        assert!(r.pruned && r.dimension == 0 && r.n_rows.is_none());
        let r = e.with_shortcut(false).block_dimension(4, &md(&[4, 2]), FieldSpec::Rational).unwrap();
        assert!(!r.pruned && r.dimension == 0);
    }

    #[test]
    fn degree_mismatch() {
        let e = Engine::default();
        assert!(matches!(
            e.block_dimension(4, &md(&[3, 2]), FieldSpec::Rational),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = EngineConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            ..EngineConfig::default()
        };
        let cold = Engine::new(config.clone());
        let k = md(&[3, 2, 1]);
        let r1 = cold.block_dimension(4, &k, FieldSpec::Rational).unwrap();
        let e1 = cold.echelon(&Rationals, 4, &k).unwrap();
        let warm = Engine::new(config);
        let r2 = warm.block_dimension(4, &k, FieldSpec::Rational).unwrap();
        assert_eq!(r1, r2);
        let e2 = warm.echelon(&Rationals, 4, &k).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(r1.dimension, 9);
        let stem = dir.path().join("v1/d3/n4/3-2-1.q.v3.json");
        assert!(stem.exists());
    }

    #[test]
    fn corrupt_cache_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let config = EngineConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            ..EngineConfig::default()
        };
        let path = dir.path().join("v1/d2/n4/3-3.q.v3.json");
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, "{ not json").unwrap();
        let r = Engine::new(config).block_dimension(4, &md(&[3, 3]), FieldSpec::Rational).unwrap();
        assert_eq!(r.dimension, 1);
    }

    #[test]
    fn rational_guard_names_the_block() {
        let e = Engine::new(EngineConfig {
            limits: Limits {
                max_rational_cols: 10,
                ..Limits::default()
            },
            ..EngineConfig::default()
        });
        let err = e.block_dimension(4, &md(&[3, 3]), FieldSpec::Rational).unwrap_err();
        assert!(err.to_string().contains("n=4 k=(3,3)"), "{err}");
    }
}
