use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsc"))
        .args(args)
        .env_remove("GSC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn totals(text: &str) -> Vec<usize> {
    text.lines()
        .filter_map(|l| l.strip_prefix("arity "))
        .map(|l| {
            let v = l.split(':').nth(1).unwrap().trim();
            v.split_whitespace().next().unwrap().parse().unwrap()
        })
        .collect()
}

fn monomial_doc(size: usize, values: &[u8]) -> String {
    let mut entries = Vec::new();
    let mut it = values.iter();
    for i in 1..=size {
        for j in i + 1..=size {
            entries.push(format!("\"{i},{j}\":{}", it.next().unwrap()));
        }
    }
    format!(
        r#"{{"size":{size},"terms":[{{"monomial":{{"size":{size},"entries":{{{}}}}},"coeff":1}}]}}"#,
        entries.join(",")
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dims_two_letters() {
    let o = gsc(&["dims", "--d", "2", "--no-cache"]);
    assert!(o.status.success());
    assert_eq!(totals(&stdout(&o)), vec![1, 1, 2, 4, 1, 0]);
}

#[test]
fn dims_one_letter() {
    let o = gsc(&["dims", "--d", "1", "--max-arity", "4", "--no-cache"]);
    assert!(o.status.success());
    assert_eq!(totals(&stdout(&o)), vec![1, 1, 1, 0]);
}

#[test]
fn dims_csv_header_and_rows() {
    let o = gsc(&["dims", "--d", "2", "--no-cache", "--format", "csv", "--per-block"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), gsc_cli::commands::CSV_HEADER);
    assert!(lines.all(|l| l.starts_with("2,")));
}

#[test]
fn dims_is_deterministic_and_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cold = gsc(&["dims", "--d", "3", "--max-arity", "5", "--format", "json", "--cache-dir", cache]);
    let warm = gsc(&["dims", "--d", "3", "--max-arity", "5", "--format", "json", "--cache-dir", cache]);
    let none = gsc(&["dims", "--d", "3", "--max-arity", "5", "--format", "json", "--no-cache"]);
    assert!(cold.status.success() && warm.status.success() && none.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, none.stdout);
    assert!(dir.path().join("v1").exists());
}

#[test]
fn dims_threads_do_not_change_output() {
    let one = gsc(&["dims", "--d", "3", "--max-arity", "5", "--no-cache", "--threads", "1"]);
    let four = gsc(&["dims", "--d", "3", "--max-arity", "5", "--no-cache", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn export_writes_sparse_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("block.txt");
    let o = gsc(&["export", "--n", "3", "--k", "2,1", "--no-cache", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "1 3 0");
}

#[test]
fn export_to_missing_directory_fails() {
    let o = gsc(&["export", "--n", "3", "--k", "2,1", "--no-cache", "-o", "/nonexistent/dir/block.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/block.txt"));
}

#[test]
fn export_dimension_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("block.txt");
    let o = gsc(&["export", "--n", "3", "--k", "2,1", "--d", "3", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_top_monomial_is_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "top.json", &monomial_doc(4, &[1, 2, 2, 1, 2, 1]));
    let o = gsc(&["reduce", "--d", "2", "--no-cache", &p]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().last().unwrap(), "nonzero");
    assert!(text.contains("1 coordinates"), "{text}");
}

#[test]
fn reduce_repeated_letter_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "rep.json", &monomial_doc(4, &[1, 1, 1, 1, 1, 1]));
    let o = gsc(&["reduce", "--d", "2", "--no-cache", &p]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last().unwrap(), "zero");
}

#[test]
fn reduce_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "top.json", &monomial_doc(4, &[1, 2, 2, 1, 2, 1]));
    let o = gsc(&["reduce", "--d", "2", "--no-cache", "--format", "json", &p]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_zero"], false);
    assert_eq!(v["size"], 4);
}

#[test]
fn reduce_rejects_entries_beyond_d() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", &monomial_doc(2, &[3]));
    let o = gsc(&["reduce", "--d", "2", "--no-cache", &p]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", "{\"size\": 2, \"terms\": [");
    let o = gsc(&["reduce", "--d", "2", "--no-cache", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn axioms_pass() {
    let o = gsc(&["axioms", "--trials", "50", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failures\n"));
}

#[test]
fn axioms_catch_each_mutant() {
    for m in ["exterior-sign", "skewed-columns", "omit-transpose"] {
        let o = gsc(&["axioms", "--trials", "500", "--mutant", m]);
        assert_eq!(o.status.code(), Some(1), "mutant {m} went unnoticed");
    }
}

#[test]
fn verify_paper_over_small_prime() {
    let o = gsc(&["verify-paper", "--no-cache", "--field", "prime:5", "--trials", "100"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.ends_with("10 of 10 criteria passed\n"), "{text}");
}

#[test]
fn bad_field_is_a_usage_error() {
    let o = gsc(&["dims", "--d", "2", "--field", "prime:6"]);
    assert_eq!(o.status.code(), Some(2));
}
