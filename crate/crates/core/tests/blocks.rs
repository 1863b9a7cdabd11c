use proptest::prelude::*;

use gsc::linalg::FieldSpec;
use gsc::quotient::{checkpoint_path, stream_block_rank, Engine, StreamConfig};
use gsc::linalg::PrimeField;
use gsc::tensor::MultiDegree;

fn partitions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|a| {
            partitions(total - a, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

fn size_for(total: u32) -> usize {
    (1..8).find(|n| n * (n - 1) / 2 == total as usize).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelling_letters_preserves_block_dimension(total in prop::sample::select(vec![1u32, 3, 6]), pick in 0usize..1000, perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let all = partitions(total, 3);
        let k = &all[pick % all.len()];
        let permuted: Vec<u32> = perm.iter().map(|&i| k[i]).collect();
        let n = size_for(total);
        let e = Engine::default();
        let a = e.block_dimension(n, &MultiDegree::new(k.clone()), FieldSpec::Rational).unwrap();
        let b = e.block_dimension(n, &MultiDegree::new(permuted), FieldSpec::Rational).unwrap();
        prop_assert_eq!(a.dimension, b.dimension);
    }
}

#[test]
fn rational_and_large_prime_agree_through_size_four() {
    let e = Engine::default();
    for n in 1..=4usize {
        let total = (n * (n - 1) / 2) as u32;
        for k in partitions(total, 3) {
            let k = MultiDegree::new(k);
            let q = e.block_dimension(n, &k, FieldSpec::Rational).unwrap().dimension;
            let p = e.block_dimension(n, &k, FieldSpec::Prime(1_000_003)).unwrap().dimension;
            assert_eq!(q, p, "n={n} k={k}");
        }
    }
}

#[test]
fn streamed_rank_matches_engine() {
    let e = Engine::default();
    let k = MultiDegree::new(vec![3, 2, 1]);
    let f = PrimeField::new(1_000_003).unwrap();
    let streamed = stream_block_rank(&StreamConfig::new(4, k.clone()), &f).unwrap();
    let direct = e.block_dimension(4, &k, FieldSpec::Prime(1_000_003)).unwrap();
    assert_eq!(streamed.dimension, direct.dimension);
}

/// The open size-6 block over one prime, resumable through
/// `GSC_CHECKPOINT_DIR`. Runs for hours.
#[test]
#[ignore]
fn open_block_streams_to_completion() {
    let (n, k) = gsc::quotient::stretch_block();
    let f = PrimeField::new(1_000_003).unwrap();
    let mut config = StreamConfig::new(n, k.clone());
    config.checkpoint = std::env::var_os("GSC_CHECKPOINT_DIR")
        .map(|d| checkpoint_path(std::path::Path::new(&d), n, &k, FieldSpec::Prime(1_000_003)));
    let r = stream_block_rank(&config, &f).unwrap();
    assert!(r.complete);
    println!("open block n={n} k={k}: dimension {} over prime:1000003", r.dimension);
}
