use proptest::prelude::*;
use pseudomagic::euler::{arithmetic_factor_a, arithmetic_factor_b, dk_prime_power, primes_up_to};
use pseudomagic::zeta::{
    divisor_profile, mv_pseudomoment, mv_pseudomoment_f64, numeric_moment, pair_sum_oracle,
    uniform_profile, DEFAULT_TUPLE_BUDGET,
};
use pseudomagic::{BigCount, BigRational};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_total_is_product_of_bounds(bounds in prop::collection::vec(1u64..=12, 1..=3)) {
        let p = divisor_profile(&bounds, DEFAULT_TUPLE_BUDGET).unwrap();
        let product: u64 = bounds.iter().product();
        prop_assert_eq!(p.total(), BigCount::from(product));
    }

    #[test]
    fn profile_ignores_bound_order(mut bounds in prop::collection::vec(1u64..=10, 1..=3)) {
        let a = mv_pseudomoment(&divisor_profile(&bounds, DEFAULT_TUPLE_BUDGET).unwrap());
        bounds.reverse();
        let b = mv_pseudomoment(&divisor_profile(&bounds, DEFAULT_TUPLE_BUDGET).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn float_path_tracks_exact(k in 1usize..=3, x in 1u64..=20) {
        let p = uniform_profile(k, x, DEFAULT_TUPLE_BUDGET).unwrap();
        let exact = num_traits::ToPrimitive::to_f64(&mv_pseudomoment(&p)).unwrap();
        prop_assert!((mv_pseudomoment_f64(&p) - exact).abs() <= 1e-13 * exact);
    }

    #[test]
    fn mean_value_grows_with_cutoff(k in 1usize..=2, x in 1u64..=30) {
        let m = |x| mv_pseudomoment(&uniform_profile(k, x, DEFAULT_TUPLE_BUDGET).unwrap());
        prop_assert!(m(x + 1) > m(x));
    }
}

#[test]
fn pair_oracle_grid() {
    for (k, xmax) in [(1usize, 30u64), (2, 8), (3, 3)] {
        for x in 1..=xmax {
            let p = uniform_profile(k, x, DEFAULT_TUPLE_BUDGET).unwrap();
            assert_eq!(
                mv_pseudomoment(&p),
                pair_sum_oracle(k, x, DEFAULT_TUPLE_BUDGET).unwrap(),
                "k={k} x={x}"
            );
        }
    }
}

#[test]
fn harmonic_numbers_for_k_one() {
    let mut h = BigRational::from_integer(0.into());
    for x in 1..=25u64 {
        h += BigRational::new(1.into(), x.into());
        assert_eq!(
            mv_pseudomoment(&uniform_profile(1, x, DEFAULT_TUPLE_BUDGET).unwrap()),
            h
        );
    }
}

#[test]
fn tuple_budget_is_enforced() {
    assert!(uniform_profile(3, 1000, 1000).unwrap_err().is_budget());
    assert!(pair_sum_oracle(2, 100, 1000).unwrap_err().is_budget());
}

#[test]
fn quadrature_is_thread_independent_up_to_rounding() {
    let one = numeric_moment(1, 6, 200.0, 20_000, 1).unwrap();
    let four = numeric_moment(1, 6, 200.0, 20_000, 4).unwrap();
    assert!((one.value - four.value).abs() < 1e-12);
    let again = numeric_moment(1, 6, 200.0, 20_000, 4).unwrap();
    assert_eq!(four, again);
}

#[test]
fn quadrature_converges_to_harmonic_sum() {
    let m = numeric_moment(1, 4, 2e4, 400_000, 2).unwrap();
    let h4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
    assert!(m.resolved);
    assert!((m.value - h4).abs() / h4 < 0.01, "{m:?}");
}

#[test]
fn euler_factor_metadata() {
    let a = arithmetic_factor_a(2, 1000, 32).unwrap();
    assert_eq!(a.prime_limit, 997);
    assert_eq!(a.j_terms, 32);
    assert!(a.tail_estimate > 0.0);
    let b = arithmetic_factor_b(2, 1000).unwrap();
    assert_eq!(b.j_terms, 0);
    assert_eq!(primes_up_to(1000).len(), 168);
}

#[test]
fn local_divisor_counts() {
    // d_3(p^j) = (j+1)(j+2)/2
    for j in 0..10u32 {
        let want = (j + 1) * (j + 2) / 2;
        assert_eq!(dk_prime_power(3, j), BigCount::from(want));
    }
}

#[test]
fn a_factor_converges_with_more_primes() {
    for k in 1..=3 {
        let lo = arithmetic_factor_a(k, 2_000, 64).unwrap();
        let hi = arithmetic_factor_a(k, 50_000, 64).unwrap();
        assert!((lo.value - hi.value).abs() <= lo.tail_estimate, "k={k}");
    }
}
