use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use gsc::laws::SuiteReport;
use gsc::linalg::text::write_matrix;
use gsc::linalg::{Field, FieldSpec, Limits};
use gsc::quotient::{
    assemble_relation_block, default_cache_dir, quotient_reduce, BlockReport, CachedField, ClassSummary, Engine,
    EngineConfig, NormalForm, TotalReport,
};
use gsc::tensor::{parse_tri_element, MultiDegree, TriMonomial};
use gsc::{with_field, Error, Result};

use crate::args::{AxiomsArgs, Common, DimsArgs, ExportArgs, Format, ReduceArgs, VerifyArgs};
use crate::verify::{self, Context, Criterion};

/// Process exit status: 0 success, 1 a claim or law failed, 2 usage, resource or I/O error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Mismatch = 1,
    Failure = 2,
}

pub const CSV_HEADER: &str = "d,arity,multidegree,monomials,rows,rank,dimension,field,variant,millis";

pub fn engine(c: &Common) -> Engine {
    let cache_dir = if c.no_cache {
        None
    } else {
        Some(c.cache_dir.clone().unwrap_or_else(default_cache_dir))
    };
    Engine::new(EngineConfig {
        variant: c.variant,
        shortcut: !c.no_shortcut,
        limits: Limits {
            max_rational_cols: c.max_rational_cols,
            ..Limits::default()
        },
        cache_dir,
    })
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_block(b: &BlockReport, timing: bool) -> String {
    let rows = b.n_rows.map(|r| r.to_string()).unwrap_or_default();
    let millis = if timing { b.millis.to_string() } else { String::new() };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        b.d,
        b.arity(),
        csv_quote(&b.k.to_string()),
        b.n_monomials,
        rows,
        b.rank,
        b.dimension,
        b.field,
        b.variant,
        millis
    )
}

fn csv_total(t: &TotalReport, timing: bool) -> String {
    let (monomials, rows, rank) = if t.pruned {
        (String::new(), String::new(), String::new())
    } else {
        let rows = if t.blocks.iter().any(|b| b.n_rows.is_none()) {
            String::new()
        } else {
            t.blocks.iter().filter_map(|b| b.n_rows).sum::<usize>().to_string()
        };
        (
            t.blocks.iter().map(|b| b.n_monomials).sum::<usize>().to_string(),
            rows,
            t.blocks.iter().map(|b| b.rank).sum::<usize>().to_string(),
        )
    };
    let millis = if timing {
        t.blocks.iter().map(|b| b.millis).sum::<u64>().to_string()
    } else {
        String::new()
    };
    format!(
        "{},{},total,{monomials},{rows},{rank},{},{},{},{millis}",
        t.d, t.arity, t.total, t.field, t.variant
    )
}

fn text_total(t: &TotalReport) -> String {
    if t.pruned {
        return format!("arity {}: 0 (vanishes above arity 2d+1)", t.arity);
    }
    let parts = t.breakdown();
    if parts.len() > 1 {
        let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        format!("arity {}: {} = {}", t.arity, t.total, s.join(" + "))
    } else {
        format!("arity {}: {}", t.arity, t.total)
    }
}

#[derive(Serialize)]
struct ArityOut {
    arity: usize,
    total: usize,
    pruned: bool,
    breakdown: Vec<usize>,
    classes: Vec<ClassSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<BlockReport>>,
}

#[derive(Serialize)]
struct DimsOut {
    d: usize,
    field: FieldSpec,
    variant: gsc::quotient::Variant,
    arities: Vec<ArityOut>,
}

pub fn dims(a: &DimsArgs, out: &mut (dyn Write + Send)) -> Result<Exit> {
    let engine = engine(&a.common);
    let field = a.common.field.unwrap_or(FieldSpec::Rational);
    let timing = a.common.timing;
    let mut json = DimsOut {
        d: a.d,
        field,
        variant: a.common.variant,
        arities: Vec::new(),
    };
    match a.common.format {
        Format::Text => writeln!(out, "d={} field={} variant={}", a.d, field, a.common.variant).map_err(io_err)?,
        Format::Csv => writeln!(out, "{CSV_HEADER}").map_err(io_err)?,
        Format::Json => {}
    }
    for m in 1..=a.max_arity {
        let mut t = engine.total_dimension(m, a.d, field)?;
        if !timing {
            t.blocks = t.blocks.iter().map(BlockReport::without_timing).collect();
        }
        match a.common.format {
            Format::Text => {
                writeln!(out, "{}", text_total(&t)).map_err(io_err)?;
                if a.per_block {
                    for b in &t.blocks {
                        let ms = if timing { format!(" [{} ms]", b.millis) } else { String::new() };
                        writeln!(out, "  {b}{ms}").map_err(io_err)?;
                    }
                }
            }
            Format::Csv => {
                if a.per_block {
                    for b in &t.blocks {
                        writeln!(out, "{}", csv_block(b, timing)).map_err(io_err)?;
                    }
                }
                writeln!(out, "{}", csv_total(&t, timing)).map_err(io_err)?;
            }
            Format::Json => json.arities.push(ArityOut {
                arity: t.arity,
                total: t.total,
                pruned: t.pruned,
                breakdown: t.breakdown(),
                classes: t.classes.clone(),
                blocks: a.per_block.then(|| t.blocks.clone()),
            }),
        }
        out.flush().map_err(io_err)?;
    }
    if a.common.format == Format::Json {
        let s = serde_json::to_string_pretty(&json).expect("report serializes");
        writeln!(out, "{s}").map_err(io_err)?;
    }
    Ok(Exit::Ok)
}

pub fn verify_paper(a: &VerifyArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<Exit> {
    let engine = engine(&a.common);
    let checkpoint_dir = a.checkpoint_dir.clone().or_else(|| {
        engine.config().cache_dir.as_ref().map(|d| d.join("stream"))
    });
    let ctx = Context {
        field: a.common.field,
        seed: a.common.seed,
        trials: a.trials,
        checkpoint_dir,
        ..Context::new(engine)
    };
    let timing = a.common.timing;
    let mut checks: Vec<verify::Check> = verify::CHECKS.to_vec();
    if a.stretch {
        checks.push(verify::stretch);
    }
    if a.common.format == Format::Csv {
        writeln!(out, "criterion,claim,expected,computed,status,millis").map_err(io_err)?;
    }
    let mut results: Vec<Criterion> = Vec::new();
    let mut errored = false;
    for check in checks {
        match check(&ctx) {
            Ok(c) => {
                match a.common.format {
                    Format::Text => writeln!(out, "{}", c.line(timing)).map_err(io_err)?,
                    Format::Csv => writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        c.id,
                        csv_quote(&c.claim),
                        csv_quote(&c.expected),
                        csv_quote(&c.computed),
                        if c.passed { "pass" } else { "fail" },
                        if timing { c.millis.to_string() } else { String::new() }
                    )
                    .map_err(io_err)?,
                    Format::Json => {}
                }
                out.flush().map_err(io_err)?;
                results.push(c);
            }
            Err(e) => {
                errored = true;
                writeln!(err, "error: {e}").map_err(io_err)?;
            }
        }
    }
    let passed = results.iter().filter(|c| c.passed).count();
    match a.common.format {
        Format::Text => writeln!(out, "{passed} of {} criteria passed", results.len()).map_err(io_err)?,
        Format::Json => {
            let mut results = results.clone();
            if !timing {
                results.iter_mut().for_each(|c| c.millis = 0);
            }
            let s = serde_json::to_string_pretty(&results).expect("report serializes");
            writeln!(out, "{s}").map_err(io_err)?;
        }
        Format::Csv => {}
    }
    Ok(if errored {
        Exit::Failure
    } else if passed == results.len() {
        Exit::Ok
    } else {
        Exit::Mismatch
    })
}

pub fn axioms(a: &AxiomsArgs, out: &mut (dyn Write + Send)) -> Result<Exit> {
    let suites = verify::axiom_suites(a.trials as usize, a.seed, a.mutant);
    match a.format {
        Format::Json => {
            let s = serde_json::to_string_pretty(&suites).expect("report serializes");
            writeln!(out, "{s}").map_err(io_err)?;
        }
        Format::Text | Format::Csv => {
            for s in &suites {
                for law in &s.laws {
                    writeln!(out, "{law}").map_err(io_err)?;
                }
            }
            let failures: usize = suites.iter().map(SuiteReport::failures).sum();
            writeln!(out, "{} suites, {failures} failures", suites.len()).map_err(io_err)?;
        }
    }
    Ok(if suites.iter().all(SuiteReport::passed) {
        Exit::Ok
    } else {
        Exit::Mismatch
    })
}

#[derive(Serialize)]
struct CoordOut {
    monomial: TriMonomial,
    value: String,
}

#[derive(Serialize)]
struct ComponentOut {
    multidegree: MultiDegree,
    pruned: bool,
    coordinates: Vec<CoordOut>,
}

#[derive(Serialize)]
struct ReduceOut {
    size: usize,
    d: usize,
    field: FieldSpec,
    is_zero: bool,
    components: Vec<ComponentOut>,
}

fn reduce_out<F: Field>(field: &F, d: usize, nf: &NormalForm<F>) -> ReduceOut {
    ReduceOut {
        size: nf.size,
        d,
        field: field.spec(),
        is_zero: nf.is_zero,
        components: nf
            .components
            .iter()
            .map(|c| ComponentOut {
                multidegree: c.k.clone(),
                pruned: c.pruned,
                coordinates: c
                    .coords
                    .iter()
                    .map(|(m, v)| CoordOut {
                        monomial: m.clone(),
                        value: field.format(v),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn write_reduce<F: CachedField>(engine: &Engine, text: &str, a: &ReduceArgs, field: &F, out: &mut (dyn Write + Send)) -> Result<()> {
    let x = parse_tri_element(text, a.d)?;
    let nf = quotient_reduce(engine, &x, a.d, field)?;
    let doc = reduce_out(field, a.d, &nf);
    match a.common.format {
        Format::Json => {
            let s = serde_json::to_string_pretty(&doc).expect("report serializes");
            writeln!(out, "{s}").map_err(io_err)
        }
        Format::Text | Format::Csv => {
            writeln!(out, "size {} over {} (d={})", doc.size, doc.field, a.d).map_err(io_err)?;
            for c in &nf.components {
                let note = if c.pruned { ", vanishes by repetition" } else { "" };
                writeln!(out, "component {}: {} coordinates{note}", c.k, c.coords.len()).map_err(io_err)?;
                for (m, v) in &c.coords {
                    writeln!(out, "  {m:?} -> {}", field.format(v)).map_err(io_err)?;
                }
            }
            writeln!(out, "{}", if nf.is_zero { "zero" } else { "nonzero" }).map_err(io_err)
        }
    }
}

pub fn reduce(a: &ReduceArgs, out: &mut (dyn Write + Send)) -> Result<Exit> {
    let text = fs::read_to_string(&a.input).map_err(|e| Error::Io {
        path: a.input.clone(),
        source: e,
    })?;
    let engine = engine(&a.common);
    let field = a.common.field.unwrap_or(FieldSpec::Rational);
    with_field!(field, |f| write_reduce(&engine, &text, a, &f, out)?);
    Ok(Exit::Ok)
}

fn write_block<F: Field>(a: &ExportArgs, field: F, path: &Path) -> Result<(usize, usize)> {
    let b = assemble_relation_block(a.n, &a.k, field, a.common.variant)?;
    let mut buf = Vec::new();
    write_matrix(&b.matrix, &mut buf).map_err(io_err)?;
    fs::write(path, buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok((b.matrix.n_rows(), b.n_monomials()))
}

pub fn export(a: &ExportArgs, out: &mut (dyn Write + Send)) -> Result<Exit> {
    if let Some(d) = a.d {
        if d != a.k.dim() {
            return Err(Error::ShapeMismatch(format!("--d {d} but k={} has {} entries", a.k, a.k.dim())));
        }
    }
    let field = a.common.field.unwrap_or(FieldSpec::Rational);
    let (rows, cols) = with_field!(field, |f| write_block(a, f, &a.out)?);
    writeln!(out, "wrote {} ({rows} rows, {cols} columns, {field})", a.out.display()).map_err(io_err)?;
    Ok(Exit::Ok)
}
