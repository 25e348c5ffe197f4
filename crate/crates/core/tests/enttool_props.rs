use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ruelle::enttool::{cover_count, greedy_separated, is_separated, SeparatedSets};
use ruelle::expmap::{circle_periodic_points, make_circle_map, make_toral_map, ExpandingMap, ShiftMap};
use ruelle::exactmat::SignedIntMatrix;
use ruelle::sft::SubshiftOfFiniteType;

fn inv(d: i64) -> BigRational {
    BigRational::new(1.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circle_witnesses_are_separated(k in 2u32..=3, n in 1usize..=4, d in prop::sample::select(vec![8i64, 16, 32])) {
        let map = make_circle_map(k).unwrap();
        let eps = inv(d);
        let r = greedy_separated(&map, n, &eps, None).unwrap();
        prop_assert!(is_separated(&map, &r.witness, n, &eps));
        prop_assert_eq!(BigInt::from(r.witness.len()), r.lower_s_n.clone());
        prop_assert!(r.lower_s_n <= r.upper_s_n);
    }

    #[test]
    fn circle_bounds_are_monotone(n in 1usize..=6, a in 3u32..=6) {
        let map = make_circle_map(2).unwrap();
        let grid = Some(4096);
        let coarse = map.separated_bounds(n, &inv(1 << a), grid, false).unwrap();
        let fine = map.separated_bounds(n, &inv(1 << (a + 1)), grid, false).unwrap();
        let longer = map.separated_bounds(n + 1, &inv(1 << a), grid, false).unwrap();
        prop_assert!(coarse.lower_s_n <= fine.lower_s_n);
        prop_assert!(coarse.lower_s_n <= longer.lower_s_n);
        for r in [&coarse, &fine, &longer] {
            prop_assert!(r.lower_s_n <= r.upper_s_n);
        }
    }

    #[test]
    fn full_shift_counts_are_exact(n in 1usize..=10) {
        let map = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        for (eps, expect) in [(inv(1), 1u64 << n), (inv(2), 1u64 << (n + 1))] {
            let r = map.separated_bounds(n, &eps, None, false).unwrap();
            prop_assert_eq!(r.lower_s_n.clone(), BigInt::from(expect));
            prop_assert_eq!(r.upper_s_n, BigInt::from(expect));
        }
    }
}

#[test]
fn toral_witness_is_separated() {
    let map = make_toral_map(&SignedIntMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap()).unwrap();
    for n in 1..=3 {
        let eps = inv(8);
        let r = greedy_separated(&map, n, &eps, None).unwrap();
        assert!(is_separated(&map, &r.witness, n, &eps));
        assert!(r.lower_s_n <= r.upper_s_n);
    }
}

#[test]
fn periodic_points_are_separated() {
    let map = make_circle_map(2).unwrap();
    let eps = BigRational::from_float(map.constants().expansivity_eps * 0.99).unwrap();
    for n in 1..=8u32 {
        assert!(is_separated(&map, &circle_periodic_points(2, n), n as usize, &eps), "n={n}");
    }
}

#[test]
fn refinement_counts_sandwich_separated_bounds() {
    let map = make_circle_map(2).unwrap();
    for n in 1..=8 {
        for d in [8usize, 16, 32] {
            let r = map.separated_bounds(n, &inv(d as i64), None, false).unwrap();
            let coarse = cover_count(&map, &map.arcs(d / 4), n).unwrap();
            let fine = cover_count(&map, &map.arcs(2 * d), n).unwrap();
            assert!(BigInt::from(coarse) <= r.lower_s_n, "n={n} eps=1/{d}");
            assert!(r.upper_s_n <= BigInt::from(fine), "n={n} eps=1/{d}");
        }
    }
}
