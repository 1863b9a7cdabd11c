//! One test per tabulated value or structural claim. Run with
//! `cargo test --release -p gsc-cli --test acceptance -- --nocapture`
//! to see the criterion lines.

use gsc::quotient::{Engine, EngineConfig};
use gsc_cli::verify::{self, Context, Criterion};
use gsc::Result;

fn context() -> Context {
    Context::new(Engine::new(EngineConfig::default()))
}

fn run(check: fn(&Context) -> Result<Criterion>) {
    let c = check(&context()).expect("criterion ran");
    println!("{}", c.line(true));
    assert!(c.passed, "{}", c.line(true));
    assert!(c.within_budget(), "over budget: {}", c.line(true));
}

#[test]
fn criterion_01_two_letter_totals() {
    run(verify::two_letter_totals);
}

#[test]
fn criterion_02_three_letter_blocks() {
    run(verify::three_letter_blocks);
}

#[test]
fn criterion_03_three_letter_totals() {
    run(verify::three_letter_totals);
}

#[test]
fn criterion_04_vanishing_without_pruning() {
    run(verify::vanishing);
}

#[test]
fn criterion_05_determinant_form() {
    run(verify::det_form);
}

#[test]
fn criterion_06_functoriality() {
    run(verify::functoriality);
}

#[test]
fn criterion_07_law_suites_and_mutants() {
    run(verify::law_suites);
}

#[test]
fn criterion_08_oracle_equivalence() {
    run(verify::oracle_equivalence);
}

#[test]
fn criterion_09_variant_equivalence() {
    run(verify::variant_equivalence);
}

#[test]
fn criterion_10_repetition_vanishing() {
    run(verify::repetition_vanishing);
}

#[test]
fn criterion_11_open_block_columns() {
    let (cols, want) = verify::stretch_columns(&context()).unwrap();
    println!("open block: {cols} columns, expected {want}");
    assert_eq!(cols, want);
}

/// Hours of streaming elimination over three primes.
#[test]
#[ignore]
fn criterion_11_open_block_full() {
    let dir = std::env::var_os("GSC_CHECKPOINT_DIR").map(Into::into);
    let ctx = Context {
        checkpoint_dir: dir,
        ..context()
    };
    let c = verify::stretch(&ctx).expect("stretch ran");
    println!("{}", c.line(true));
    assert!(c.passed, "{}", c.line(true));
}
