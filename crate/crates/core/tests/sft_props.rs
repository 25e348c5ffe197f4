use proptest::prelude::*;

use ruelle::expmap::{ExpandingMap, ShiftMap, ShiftPoint};
use ruelle::sft::SubshiftOfFiniteType;

proptest! {
    #[test]
    fn full_shift_entropy_is_log_k(k in 1usize..=6) {
        let e = SubshiftOfFiniteType::full(k).sft_entropy().unwrap();
        let lk = (k as f64).ln();
        prop_assert!(e.lower <= lk + 1e-12 && lk <= e.upper + 1e-12);
        prop_assert!(e.upper - e.lower <= 1e-9);
    }

    #[test]
    fn admissible_concatenation_has_admissible_parts(
        u in prop::collection::vec(0usize..2, 1..8),
        v in prop::collection::vec(0usize..2, 1..8),
    ) {
        let g = SubshiftOfFiniteType::golden_mean();
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        if g.is_admissible(&uv).unwrap() {
            prop_assert!(g.is_admissible(&u).unwrap() && g.is_admissible(&v).unwrap());
        }
    }

    #[test]
    fn distinct_preimages_are_far_apart(prefix in prop::collection::vec(0usize..3, 0..5), cycle in prop::collection::vec(0usize..3, 1..4)) {
        let map = ShiftMap::new(SubshiftOfFiniteType::full(3)).unwrap();
        let x = ShiftPoint::new(prefix, cycle);
        let pre = map.preimages(&x);
        prop_assert_eq!(pre.len(), 3);
        for i in 0..pre.len() {
            for j in i + 1..pre.len() {
                let d = map.distance(&pre[i], &pre[j]);
                prop_assert!(d >= 1.0 && d > map.constants().c);
            }
        }
    }
}
