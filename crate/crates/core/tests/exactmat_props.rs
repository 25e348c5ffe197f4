use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use ruelle::exactmat::{char_poly_det, is_irreducible, mat_power_trace, perron_bounds, SignedIntMatrix};
use ruelle::sft::SubshiftOfFiniteType;

fn matrix(dim: usize, entries: Vec<i64>) -> SignedIntMatrix {
    SignedIntMatrix::new(dim, entries.into_iter().map(BigInt::from).collect()).unwrap()
}

fn binary(max_dim: usize) -> impl Strategy<Value = SignedIntMatrix> {
    (1..=max_dim).prop_flat_map(|d| prop::collection::vec(0i64..=1, d * d).prop_map(move |e| matrix(d, e)))
}

fn small_signed(max_dim: usize) -> impl Strategy<Value = SignedIntMatrix> {
    (1..=max_dim).prop_flat_map(|d| prop::collection::vec(-2i64..=2, d * d).prop_map(move |e| matrix(d, e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_counts_closed_words(a in binary(5), n in 1u32..=8) {
        let s = SubshiftOfFiniteType::new(a.clone()).unwrap();
        prop_assert_eq!(mat_power_trace(&a, n as u64).unwrap(), BigInt::from(s.count_periodic_bruteforce(n).unwrap()));
    }

    #[test]
    fn char_poly_is_one_at_zero(a in small_signed(6)) {
        prop_assert_eq!(char_poly_det(&a).eval_rational(&BigRational::zero()), BigRational::one());
    }

    #[test]
    fn fast_power_matches_repeated_product(a in small_signed(6), n in 1u64..=20) {
        let mut p = a.clone();
        for _ in 1..n {
            p = p.mul(&a);
        }
        prop_assert_eq!(mat_power_trace(&a, n).unwrap(), p.trace());
        prop_assert_eq!(a.pow(n), p);
    }

    #[test]
    fn perron_brackets_nest(a in binary(5), it in 1usize..30) {
        prop_assume!(is_irreducible(&a) && !a.is_zero());
        let b = perron_bounds(&a, it).unwrap();
        let c = perron_bounds(&a, it + 1).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.lower <= c.lower && c.upper <= b.upper);
    }
}

#[test]
fn char_poly_degree_tracks_zero_eigenvalue() {
    let golden = SignedIntMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
    let cat = SignedIntMatrix::from_rows(&[[2, 1], [1, 1]]).unwrap();
    let full = SignedIntMatrix::all_ones(3);
    assert_eq!(char_poly_det(&golden).degree(), Some(2));
    assert_eq!(char_poly_det(&cat).degree(), Some(2));
    // All-ones 3x3 has eigenvalue 0 with multiplicity 2.
    assert_eq!(char_poly_det(&full).degree(), Some(1));
    let nilpotent = SignedIntMatrix::from_rows(&[[0, 1], [0, 0]]).unwrap();
    assert_eq!(char_poly_det(&nilpotent).degree(), Some(0));
}
