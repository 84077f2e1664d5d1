//! Every branch of the batched construction is reached on the random corpus,
//! and each one delivers its per-column promise.

use std::collections::BTreeSet;

use tomo_core::oracle::random_corpus;
use tomo_core::{
    diverge_with, neighbour_column_sums, symmetric_difference, BatchCase, Condition,
    DivergeOptions, PairSide, RowChoicePolicy,
};

#[test]
fn all_case_condition_side_combinations_occur() {
    let mut seen = BTreeSet::new();
    for (idx, p) in random_corpus(2024, 1500).iter().enumerate() {
        if neighbour_column_sums(p).alpha == 0 {
            continue;
        }
        for seed in 0..3 {
            let opts = DivergeOptions {
                f2_policy: RowChoicePolicy::Seeded(idx as u64 * 7 + seed),
                ..DivergeOptions::default()
            };
            let d = diverge_with(p, &opts).unwrap();
            let diff = symmetric_difference(&d.f2, &d.f3).unwrap();
            for b in &d.f3_batches {
                let case = match b.case {
                    BatchCase::Case1 => 1,
                    BatchCase::Case2 => 2,
                };
                let side = match b.final_side {
                    PairSide::Source => "source",
                    PairSide::Target => "target",
                };
                seen.insert((case, side, format!("{:?}", b.condition)));
                assert_eq!(b.r.len(), 2 * b.multiplicity);
                assert_eq!(b.r_double_prime.len(), b.multiplicity);
                assert!(b.r_double_prime.iter().all(|l| b.r.contains(l)));
                if b.case == BatchCase::Case2 {
                    let l0 = b.l0.unwrap();
                    assert_eq!(b.r_prime.len(), b.multiplicity + 1);
                    assert!(b.r_prime.contains(&l0) && b.r_double_prime.contains(&l0));
                }
                assert!(diff.in_column(b.final_column) >= 2 * b.multiplicity);
                if b.condition == Condition::B {
                    assert!(diff.in_column(b.other_column) >= 2);
                }
            }
        }
    }
    let expected: BTreeSet<_> = [1, 2]
        .into_iter()
        .flat_map(|c| ["source", "target"].map(move |s| (c, s)))
        .flat_map(|(c, s)| ["A", "B"].map(move |k| (c, s, k.to_string())))
        .collect();
    let missing: Vec<_> = expected.difference(&seen).collect();
    assert!(missing.is_empty(), "branches never exercised: {missing:?}");
}
