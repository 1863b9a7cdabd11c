//! Tabulated values and structural claims as executable checks.

use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use gsc::bioperad::{check_bioperad_laws, SkewedColumnBioperad, TensorBioperad};
use gsc::classical::{ExteriorWords, SymmetricWords, TensorWords};
use gsc::det::{check_two_alternating, det2, det_s2_functional, det_s2_raw, induced_map_scalar, PairMatrix};
use gsc::diamond::{check_gsc_axioms, GscCheckOptions, TensorGsc};
use gsc::laws::{check_operad_axioms, law_rng, SuiteReport, LAW_SEQUENTIAL};
use gsc::linalg::{FieldSpec, EVIDENCE_PRIMES};
use gsc::quotient::{
    checkpoint_path, lemma5_vanishing_check, saturation_oracle, stream_block_rank,
    variant_span_equal, Engine, StreamConfig,
};
use gsc::tensor::{coeff, Coeff};
use gsc::{with_field, Result};

use crate::manifest::{Block, Manifest};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub millis: u64,
    pub budget_secs: u64,
}

impl Criterion {
    pub fn within_budget(&self) -> bool {
        self.millis <= self.budget_secs * 1000
    }

    pub fn line(&self, timing: bool) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} [{:>2}] {}: expected {}; computed {}",
            self.id, self.claim, self.expected, self.computed
        );
        if timing {
            s.push_str(&format!(" ({} ms, budget {} s)", self.millis, self.budget_secs));
        }
        s
    }
}

/// Shared inputs of every check.
pub struct Context {
    pub engine: Engine,
    pub manifest: Manifest,
    /// Field for every block computation; `None` means rationals, with
    /// three primes for size-5 blocks.
    pub field: Option<FieldSpec>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Context {
    pub fn new(engine: Engine) -> Self {
        Context {
            engine,
            manifest: Manifest::embedded(),
            field: None,
            seed: 0,
            trials: None,
            checkpoint_dir: None,
        }
    }

    fn field(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::Rational)
    }
}

fn timed(id: u8, claim: &str, budget_secs: u64, f: impl FnOnce() -> Result<(String, String, bool)>) -> Result<Criterion> {
    let start = Instant::now();
    let (expected, computed, passed) = f()?;
    Ok(Criterion {
        id,
        claim: claim.into(),
        expected,
        computed,
        passed,
        millis: start.elapsed().as_millis() as u64,
        budget_secs,
    })
}

fn tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn two_letter_totals(ctx: &Context) -> Result<Criterion> {
    let want = &ctx.manifest.two_letter_totals;
    timed(1, "two-letter dimension vector", 5, || {
        let got = (1..=want.dimensions.len())
            .map(|m| ctx.engine.total_dimension(m, want.d, ctx.field()).map(|t| t.total))
            .collect::<Result<Vec<_>>>()?;
        let mut blocks_ok = true;
        for b in &ctx.manifest.two_letter_blocks {
            blocks_ok &= ctx.engine.block_dimension(b.n, &b.k, ctx.field())?.dimension == b.dimension;
        }
        Ok((tuple(&want.dimensions), tuple(&got), got == want.dimensions && blocks_ok))
    })
}

fn block_value(ctx: &Context, b: &Block) -> Result<(usize, bool, String)> {
    match ctx.field {
        None if b.n >= 5 => {
            let ev = ctx.engine.prime_evidence(b.n, &b.k, &EVIDENCE_PRIMES)?;
            let dims: Vec<usize> = ev.reports.iter().map(|r| r.dimension).collect();
            Ok((ev.upper_bound, ev.agree, format!("{} over three primes", tuple(&dims))))
        }
        field => {
            let r = ctx.engine.block_dimension(b.n, &b.k, field.unwrap_or(FieldSpec::Rational))?;
            Ok((r.dimension, true, r.field.to_string()))
        }
    }
}

pub fn three_letter_blocks(ctx: &Context) -> Result<Criterion> {
    timed(2, "three-letter block table", 600, || {
        let mut expected = Vec::new();
        let mut computed = Vec::new();
        let mut ok = true;
        for b in &ctx.manifest.three_letter_blocks {
            let (dim, agree, how) = block_value(ctx, b)?;
            expected.push(format!("E_{}^{}={}", b.n, b.k, b.dimension));
            computed.push(format!("E_{}^{}={} [{how}]", b.n, b.k, dim));
            ok &= agree && dim == b.dimension;
        }
        Ok((expected.join(" "), computed.join(" "), ok))
    })
}

pub fn three_letter_totals(ctx: &Context) -> Result<Criterion> {
    let want = &ctx.manifest.three_letter_totals;
    timed(3, "three-letter totals and breakdowns", 600, || {
        let mut got = Vec::new();
        let mut parts = Vec::new();
        for m in 1..=want.dimensions.len() {
            let t = ctx.engine.total_dimension(m, want.d, ctx.field())?;
            if let Some(b) = want.breakdowns.iter().find(|b| b.arity == m) {
                parts.push((b.parts.clone(), t.breakdown()));
            }
            got.push(t.total);
        }
        let ok = got == want.dimensions && parts.iter().all(|(w, g)| w == g);
        let fmt = |sel: fn(&(Vec<usize>, Vec<usize>)) -> &Vec<usize>| -> String {
            parts
                .iter()
                .map(|p| {
                    let v = sel(p);
                    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    format!("{}={}", v.iter().sum::<usize>(), s.join("+"))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        Ok((
            format!("{} {}", tuple(&want.dimensions), fmt(|p| &p.0)),
            format!("{} {}", tuple(&got), fmt(|p| &p.1)),
            ok,
        ))
    })
}

pub fn vanishing(ctx: &Context) -> Result<Criterion> {
    timed(4, "vanishing above arity 2d+1 without pruning", 60, || {
        let strict = ctx.engine.with_shortcut(false);
        let mut expected = Vec::new();
        let mut computed = Vec::new();
        let mut ok = true;
        for v in &ctx.manifest.vanishing {
            for &n in &v.sizes {
                let blocks = strict.all_blocks(n + 1, v.d, ctx.field())?;
                let nonzero = blocks.iter().filter(|b| b.dimension != 0).count();
                ok &= nonzero == 0 && blocks.iter().all(|b| !b.pruned);
                expected.push(format!("d={} n={n}: 0", v.d));
                computed.push(format!(
                    "d={} n={n}: {} over {} blocks",
                    v.d,
                    blocks.iter().map(|b| b.dimension).sum::<usize>(),
                    blocks.len()
                ));
            }
        }
        Ok((expected.join(", "), computed.join(", "), ok))
    })
}

pub fn det_form(ctx: &Context) -> Result<Criterion> {
    let det = &ctx.manifest.det;
    timed(5, "12-term form: normalization, vanishing, linearity", 60, || {
        let value = det_s2_raw(&PairMatrix::from_pairs(det.normalization));
        let r = check_two_alternating(det.samples, ctx.seed);
        let ok = value == coeff(det.value) && r.passed();
        Ok((
            format!("value {}, 0 nonzero of {} per triangle, {} exact slot checks", det.value, det.samples, det.samples),
            format!(
                "value {value}, nonzero per triangle {:?}, {} linearity failures",
                r.triangle_failures, r.linearity_failures
            ),
            ok,
        ))
    })
}

pub fn functoriality(ctx: &Context) -> Result<Criterion> {
    let det = &ctx.manifest.det;
    timed(6, "induced scalar equals det(T)^3", 10, || {
        let f = det_s2_functional(&ctx.engine)?;
        let mut rng = law_rng(ctx.seed);
        let mut failures = 0;
        let mut witness = None;
        let b = det.entry_bound;
        for _ in 0..det.matrices {
            let t: [[Coeff; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| coeff(rng.gen_range(-b..=b))));
            let got = induced_map_scalar(&ctx.engine, &f, &t)?;
            let d = det2(&t);
            let want = (0..det.cube_exponent).fold(coeff(1), |acc, _| acc * &d);
            if got != want {
                failures += 1;
                witness.get_or_insert(format!("{t:?}: {got} vs {want}"));
            }
        }
        Ok((
            format!("{} matrices with det(T)^{}", det.matrices, det.cube_exponent),
            match witness {
                None => format!("{} of {} equal", det.matrices, det.matrices),
                Some(w) => format!("{failures} mismatches, first {w}"),
            },
            failures == 0,
        ))
    })
}

/// Which structure to replace by a deliberately broken one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
pub enum Mutant {
    /// Exterior operad without the insertion sign.
    ExteriorSign,
    /// Bioperad whose column insertion is off by one.
    SkewedColumns,
    /// GSC identity (I) without the transpose.
    OmitTranspose,
}

/// Law suites for every structure, with one structure optionally broken.
pub fn axiom_suites(trials: usize, seed: u64, mutant: Option<Mutant>) -> Vec<SuiteReport> {
    let mut out = vec![check_operad_axioms(&TensorWords { d: 2 }, trials, seed)];
    out.push(match mutant {
        Some(Mutant::ExteriorSign) => check_operad_axioms(&ExteriorWords::without_sign(8), trials, seed),
        _ => check_operad_axioms(&ExteriorWords::new(8), trials, seed),
    });
    out.push(check_operad_axioms(&SymmetricWords { d: 2 }, trials, seed));
    out.push(match mutant {
        Some(Mutant::SkewedColumns) => check_bioperad_laws(&SkewedColumnBioperad, 2, trials, seed),
        _ => check_bioperad_laws(&TensorBioperad, 2, trials, seed),
    });
    let opts = GscCheckOptions {
        omit_transpose: mutant == Some(Mutant::OmitTranspose),
    };
    out.push(check_gsc_axioms(&TensorGsc::new(2), trials, seed, opts));
    out
}

/// Whether each broken structure is caught by the suites.
pub fn mutant_controls(trials: usize, seed: u64) -> Vec<(Mutant, bool)> {
    [Mutant::ExteriorSign, Mutant::SkewedColumns, Mutant::OmitTranspose]
        .into_iter()
        .map(|m| {
            let suites = axiom_suites(trials, seed, Some(m));
            let caught = match m {
                Mutant::ExteriorSign => suites[1].law(LAW_SEQUENTIAL).is_some_and(|l| l.failures > 0),
                _ => suites.iter().any(|s| !s.passed()),
            };
            (m, caught)
        })
        .collect()
}

pub fn law_suites(ctx: &Context) -> Result<Criterion> {
    let trials = ctx.trials.unwrap_or(ctx.manifest.laws.trials);
    timed(7, "operad, bioperad and GSC laws", 120, || {
        let suites = axiom_suites(trials, ctx.seed, None);
        let laws: usize = suites.iter().map(|s| s.laws.len()).sum();
        let failures: usize = suites.iter().map(SuiteReport::failures).sum();
        let controls = mutant_controls(trials, ctx.seed);
        let caught = controls.iter().filter(|(_, c)| *c).count();
        let ok = failures == 0 && suites.iter().all(SuiteReport::passed) && caught == controls.len();
        Ok((
            format!("0 failures in {trials} trials per law; every mutant caught"),
            format!("{failures} failures over {laws} laws; {caught}/{} mutants caught", controls.len()),
            ok,
        ))
    })
}

pub fn oracle_equivalence(ctx: &Context) -> Result<Criterion> {
    let o = &ctx.manifest.oracle;
    timed(8, "saturation oracle matches triangle relations", 300, || {
        let strict = ctx.engine.with_shortcut(false);
        let field = ctx.field();
        let mut mismatches = Vec::new();
        let mut compared = 0;
        let mut top = None;
        for range in &o.ranges {
            let report = with_field!(field, |f| saturation_oracle(range.d, range.max_arity, &f)?);
            for a in &report.arities {
                for b in &a.blocks {
                    let r = strict.block_dimension(a.arity - 1, &b.k, field)?;
                    compared += 1;
                    if r.rank != b.rank {
                        mismatches.push(format!("d={} arity {} k={}: {} vs {}", range.d, a.arity, b.k, b.rank, r.rank));
                    }
                }
                if !a.graded {
                    mismatches.push(format!("d={} arity {} not graded", range.d, a.arity));
                }
                if range.d == 2 && a.arity == 5 {
                    let direct = ctx.engine.total_dimension(5, 2, field)?.total;
                    top = Some((a.quotient_dim, direct));
                }
            }
        }
        let want = o.two_letter_arity_five;
        let ok = mismatches.is_empty() && top == Some((want, want));
        let computed = match top {
            Some((a, b)) => format!("{compared} blocks, {} mismatches; arity 5: oracle {a}, direct {b}", mismatches.len()),
            None => format!("{compared} blocks, {} mismatches; arity 5 missing", mismatches.len()),
        };
        Ok((format!("equal ranks in every block; arity 5 dimension {want} both ways"), computed, ok))
    })
}

pub fn variant_equivalence(ctx: &Context) -> Result<Criterion> {
    let v = &ctx.manifest.variants;
    timed(9, "relation variants span equal spaces", 600, || {
        let fields = match ctx.field {
            Some(f) => vec![f],
            None => vec![FieldSpec::Rational, FieldSpec::prime(v.prime)?],
        };
        let mut blocks = 0;
        let mut unequal = Vec::new();
        for field in &fields {
            for d in 1..=v.max_d {
                for n in 1..=v.max_n {
                    let report = with_field!(*field, |f| variant_span_equal(n, d, &f)?);
                    for row in &report.rows {
                        blocks += 1;
                        if !row.equal {
                            unequal.push(format!("{field} n={n} k={}: {:?}", row.k, row.ranks));
                        }
                    }
                }
            }
        }
        let names: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
        Ok((
            format!("equal ranks for d<={}, n<={} over {}", v.max_d, v.max_n, names.join(" and ")),
            if unequal.is_empty() {
                format!("equal in all {blocks} blocks")
            } else {
                format!("{} of {blocks} blocks differ, first {}", unequal.len(), unequal[0])
            },
            unequal.is_empty(),
        ))
    })
}

pub fn repetition_vanishing(ctx: &Context) -> Result<Criterion> {
    let r = &ctx.manifest.repetition;
    timed(10, "monomials with a letter repeated n times vanish", 120, || {
        let mut computed = Vec::new();
        let mut ok = true;
        for (i, case) in r.cases.iter().enumerate() {
            let seed = ctx.seed.wrapping_add(i as u64);
            let rep = with_field!(ctx.field(), |f| lemma5_vanishing_check(&ctx.engine, case.n, case.d, r.samples, seed, &f)?);
            ok &= rep.passed();
            computed.push(format!("(n={},d={}) {}/{} zero", case.n, case.d, rep.samples - rep.failures, rep.samples));
        }
        Ok((format!("{} of {} zero per case", r.samples, r.samples), computed.join(", "), ok))
    })
}

/// Column count of the open block, without eliminating.
pub fn stretch_columns(ctx: &Context) -> Result<(usize, usize)> {
    let s = &ctx.manifest.stretch;
    let b = gsc::tensor::BlockIndexer::new(s.n, &s.k)?;
    Ok((b.len(), s.columns))
}

/// The open block over three primes. No value is expected.
pub fn stretch(ctx: &Context) -> Result<Criterion> {
    let s = &ctx.manifest.stretch;
    timed(11, "open block over three primes", 16 * 3600, || {
        let (cols, want_cols) = stretch_columns(ctx)?;
        let mut dims = Vec::new();
        let mut complete = true;
        for p in EVIDENCE_PRIMES {
            let field = gsc::linalg::PrimeField::new(p)?;
            let mut config = StreamConfig::new(s.n, s.k.clone());
            config.variant = ctx.engine.variant();
            config.limits = ctx.engine.config().limits;
            config.checkpoint = ctx
                .checkpoint_dir
                .as_ref()
                .map(|d| checkpoint_path(d, s.n, &s.k, FieldSpec::Prime(p)));
            let r = stream_block_rank(&config, &field)?;
            complete &= r.complete;
            dims.push(r.dimension);
        }
        let equal_one = dims.iter().all(|&d| d == 1);
        Ok((
            format!("{want_cols} columns; dimension reported, none asserted"),
            format!("{cols} columns; dimensions {} (equals 1: {})", tuple(&dims), if equal_one { "yes" } else { "no" }),
            cols == want_cols && complete,
        ))
    })
}

pub type Check = fn(&Context) -> Result<Criterion>;

/// Criteria 1 to 10; the open block is run separately.
pub const CHECKS: [Check; 10] = [
    two_letter_totals,
    three_letter_blocks,
    three_letter_totals,
    vanishing,
    det_form,
    functoriality,
    law_suites,
    oracle_equivalence,
    variant_equivalence,
    repetition_vanishing,
];
