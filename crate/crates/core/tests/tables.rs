use gsc::linalg::{FieldSpec, EVIDENCE_PRIMES};
use gsc::quotient::Engine;
use gsc::tensor::MultiDegree;

fn md(v: &[u32]) -> MultiDegree {
    MultiDegree::new(v.to_vec())
}

#[test]
fn three_letter_blocks_up_to_size_four() {
    let e = Engine::default();
    for (n, k, want) in [
        (2, md(&[1, 0, 0]), 1),
        (3, md(&[2, 1, 0]), 2),
        (3, md(&[1, 1, 1]), 5),
        (4, md(&[3, 3, 0]), 1),
        (4, md(&[3, 2, 1]), 9),
        (4, md(&[2, 2, 2]), 22),
    ] {
        assert_eq!(e.block_dimension(n, &k, FieldSpec::Rational).unwrap().dimension, want, "n={n} k={k}");
    }
}

#[test]
fn three_letter_size_five_over_primes() {
    let e = Engine::default();
    for (k, want) in [(md(&[4, 4, 2]), 6), (md(&[4, 3, 3]), 16)] {
        let ev = e.prime_evidence(5, &k, &EVIDENCE_PRIMES).unwrap();
        assert!(ev.agree);
        assert_eq!(ev.upper_bound, want, "k={k}");
    }
}

#[test]
fn three_letter_totals() {
    let e = Engine::default();
    let mut totals = Vec::new();
    for m in 1..=6 {
        let field = if m <= 5 { FieldSpec::Rational } else { FieldSpec::Prime(EVIDENCE_PRIMES[0]) };
        totals.push(e.total_dimension(m, 3, field).unwrap());
    }
    let dims: Vec<usize> = totals.iter().map(|t| t.total).collect();
    assert_eq!(dims, vec![1, 1, 3, 17, 79, 66]);
    assert_eq!(totals[3].breakdown(), vec![12, 5]);
    assert_eq!(totals[4].breakdown(), vec![3, 54, 22]);
    assert_eq!(totals[5].breakdown(), vec![18, 48]);
    assert!(totals.iter().all(|t| t.classes.iter().all(|c| c.uniform)));
}
