use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use ruelle::exactmat::{is_irreducible, perron_bounds, IntPolynomial, SignedIntMatrix};
use ruelle::sft::SubshiftOfFiniteType;
use ruelle::zetafn::{
    counts_from_zeta, primitive_orbit_counts, radius_and_entropy, zeta_from_sft, zeta_series_from_counts,
    CountSequence, RationalFunction,
};

fn binary(max_dim: usize) -> impl Strategy<Value = SignedIntMatrix> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec(0i64..=1, d * d)
            .prop_map(move |e| SignedIntMatrix::new(d, e.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(IntPolynomial::from_i64(num), IntPolynomial::from_i64(den)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeta_round_trips_trace_counts(a in binary(6), m in 1usize..=12) {
        let z = zeta_from_sft(&a).unwrap();
        let counts = counts_from_zeta(&z, m).unwrap();
        let s = SubshiftOfFiniteType::new(a).unwrap();
        prop_assert_eq!(counts.counts(), &s.trace_counts(m)[..]);
    }

    #[test]
    fn pole_gives_perron_entropy(a in binary(5)) {
        prop_assume!(is_irreducible(&a));
        let b = perron_bounds(&a, 200).unwrap();
        prop_assume!(b.midpoint_f64() > 1.0 + 1e-6);
        let h = radius_and_entropy(&zeta_from_sft(&a).unwrap()).unwrap().periodic_entropy();
        prop_assert!((h - b.midpoint_f64().ln()).abs() < 1e-9, "{} vs {}", h, b.midpoint_f64().ln());
    }

    #[test]
    fn primitive_counts_are_nonnegative(a in binary(5)) {
        let counts = CountSequence::new(SubshiftOfFiniteType::new(a).unwrap().trace_counts(10)).unwrap();
        prop_assert!(primitive_orbit_counts(&counts).unwrap().iter().all(|p| !p.is_negative()));
    }

    #[test]
    fn single_orbit_series(p in 1usize..=6, m in 6usize..=18) {
        let counts: Vec<BigInt> = (1..=m).map(|n| BigInt::from(if n % p == 0 { p } else { 0 })).collect();
        let s = zeta_series_from_counts(&CountSequence::new(counts).unwrap()).unwrap();
        let mut den = vec![0i64; p + 1];
        den[0] = 1;
        den[p] = -1;
        prop_assert_eq!(s, rf(&[1], &den).series(m));
    }
}

#[test]
fn series_of_known_forms_round_trip() {
    for r in [rf(&[1], &[1, -1, -1]), rf(&[1, -1], &[1, -2]), rf(&[1, -2, 1], &[1, -3, 1])] {
        let counts = counts_from_zeta(&r, 15).unwrap();
        assert_eq!(zeta_series_from_counts(&counts).unwrap(), r.series(15));
    }
}
