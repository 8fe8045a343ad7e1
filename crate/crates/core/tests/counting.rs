use proptest::prelude::*;
use pseudomagic::counting::{
    brute_force_count, count, count_contingency, count_magic, count_pseudomagic,
    count_pseudomagic_multi, count_symmetric_even, count_symmetric_even_bounded, LineConstraint,
    MatrixCountSpec, Partition, DEFAULT_BRUTE_FORCE_CAP,
};
use pseudomagic::BigCount;

fn constraint() -> impl Strategy<Value = LineConstraint> {
    prop_oneof![
        (0u64..=3).prop_map(LineConstraint::Exact),
        (0u64..=3).prop_map(LineConstraint::AtMost)
    ]
}

fn spec() -> impl Strategy<Value = MatrixCountSpec> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(constraint(), r),
            prop::collection::vec(constraint(), c),
        )
            .prop_map(|(rows, cols)| MatrixCountSpec::new(rows, cols))
    })
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0u64..=4, 0..=4).prop_map(Partition::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dp_matches_brute_force_on_mixed_constraints(spec in spec()) {
        let bf = brute_force_count(&spec, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        prop_assert_eq!(count(&spec).unwrap(), bf);
    }

    #[test]
    fn transposing_preserves_count(spec in spec()) {
        let t = MatrixCountSpec::new(spec.col_constraints.clone(), spec.row_constraints.clone());
        prop_assert_eq!(count(&spec).unwrap(), count(&t).unwrap());
    }

    #[test]
    fn contingency_symmetric_in_margins(a in partition(), b in partition()) {
        prop_assert_eq!(count_contingency(&a, &b), count_contingency(&b, &a));
    }

    #[test]
    fn weight_mismatch_gives_zero(a in partition(), b in partition()) {
        prop_assume!(a.weight() != b.weight());
        prop_assert_eq!(count_contingency(&a, &b), BigCount::from(0u8));
    }

    #[test]
    fn partitions_are_normalized(v in prop::collection::vec(0u64..=5, 0..=6)) {
        let p = Partition::new(v.iter().copied());
        prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(p.parts().iter().all(|&x| x > 0));
        prop_assert_eq!(p.weight(), v.iter().sum::<u64>());
        let reparsed: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn pseudomagic_counts_grow_with_bound(k in 1usize..=3, l in 0u64..=4) {
        prop_assert!(count_pseudomagic(k, l) < count_pseudomagic(k, l + 1));
        prop_assert!(count_magic(k, l) <= count_pseudomagic(k, l));
    }

    #[test]
    fn multi_bound_agrees_with_uniform(k in 1usize..=3, l in 0u64..=4) {
        prop_assert_eq!(count_pseudomagic_multi(&vec![l; k]), count_pseudomagic(k, l));
    }
}

#[test]
fn symmetric_even_grid_matches_brute_force() {
    for k in 1..=3usize {
        for j in 0..=4u64 {
            let spec = MatrixCountSpec::symmetric_even(k, j);
            let bf = brute_force_count(&spec, DEFAULT_BRUTE_FORCE_CAP).unwrap();
            assert_eq!(count_symmetric_even(k, j), bf, "k={k} j={j}");
            let spec = MatrixCountSpec::symmetric_even_bounded(k, j);
            let bf = brute_force_count(&spec, DEFAULT_BRUTE_FORCE_CAP).unwrap();
            assert_eq!(count_symmetric_even_bounded(k, j), bf, "k={k} l={j}");
        }
    }
}

#[test]
fn bounded_symmetric_sums_exact_levels() {
    for k in 1..=3usize {
        for l in 0..=5u64 {
            let total: BigCount = (0..=l).map(|j| count_symmetric_even(k, j)).sum();
            assert!(count_symmetric_even_bounded(k, l) >= total);
        }
    }
}

#[test]
fn brute_force_respects_cap() {
    let spec = MatrixCountSpec::magic(4, 3);
    let err = brute_force_count(&spec, 100).unwrap_err();
    assert!(err.is_budget());
}
