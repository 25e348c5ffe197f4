use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use ruelle::cover::{
    build_cover, codings, count_periodic_via_cover, intersecting_families, pi_code, rects_containing, verify_cover,
    zeta_via_cover, CoverGeometry, MarkovCover,
};
use ruelle::expmap::{circle_periodic_points, make_circle_map, CircleMap, ExpandingMap};

fn cover(k: u32, m: u32) -> MarkovCover<CircleMap> {
    build_cover(&make_circle_map(k).unwrap(), &BigRational::new(1.into(), m.into())).unwrap()
}

fn q(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn counts_match_enumeration_and_refinement() {
    for k in [2u32, 3] {
        let mut zetas = Vec::new();
        for m in [4 * k, 8 * k] {
            let c = cover(k, m);
            assert!(verify_cover(&c).passed());
            let fam = intersecting_families(&c).unwrap();
            for p in 1..=10u64 {
                let expect = BigInt::from(k).pow(p as u32) - 1;
                assert_eq!(count_periodic_via_cover(&fam, p).unwrap(), expect, "k={k} m={m} p={p}");
            }
            zetas.push(zeta_via_cover(&fam).unwrap());
        }
        assert_eq!(zetas[0], zetas[1], "k={k}");
    }
}

fn assert_periodic(word: &[usize], q: usize) {
    for i in q..word.len() {
        assert_eq!(word[i], word[i - q], "{word:?} not {q}-periodic");
    }
}

#[test]
fn periodic_points_have_periodic_codings() {
    for k in [2u32, 3] {
        let c = cover(k, 4 * k);
        for p in 1..=6u32 {
            if k == 3 && p > 4 {
                continue;
            }
            for z in circle_periodic_points(k, p) {
                let words = codings(&c, &z, 4 * p as usize);
                assert!(!words.is_empty());
                for w in &words {
                    assert_periodic(w, 2 * p as usize);
                }
            }
        }
    }
}

#[test]
fn codings_of_periodic_points_meeting_once_are_equal() {
    for k in [2u32, 3] {
        for m in [4 * k, 8 * k] {
            let c = cover(k, m);
            for p in 1..=4u32 {
                for z in circle_periodic_points(k, p) {
                    let words = codings(&c, &z, 4 * p as usize);
                    for a in &words {
                        for b in &words {
                            if a.iter().zip(b).any(|(s, t)| s == t) {
                                assert_eq!(a, b, "k={k} m={m} x={z}");
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn multiplicity_is_bounded(k in 2u32..=3, scale in 0usize..2, num in 0u64..4096, den_pow in 0u32..6) {
        let m = 4 * k * (1 << scale);
        let c = cover(k, m);
        let fam = intersecting_families(&c).unwrap();
        let d = m as u64 * 2u64.pow(den_pow);
        let x = q(num % d, d);
        prop_assert!(rects_containing(&c, &x).len() <= fam.max_order());
        prop_assert!(codings(&c, &x, 6).len() <= k as usize);
    }

    #[test]
    fn pi_code_diameter_shrinks(k in 2u32..=3, start in 0usize..64, choices in prop::collection::vec(0usize..8, 1..10)) {
        let c = cover(k, 4 * k);
        let map = c.map();
        let lambda = map.constants().lambda;
        let c0 = c.rects().iter().map(|r| map.diameter(r).to_f64().unwrap()).fold(0.0, f64::max) / lambda;
        let mut word = vec![start % c.len()];
        for ch in choices {
            let last = *word.last().unwrap();
            let next: Vec<usize> = (0..c.len()).filter(|&j| c.transition().has_edge(last, j)).collect();
            word.push(next[ch % next.len()]);
        }
        let f = pi_code(&c, &word).unwrap();
        let n = word.len() as i32;
        prop_assert!(map.diameter(&f).to_f64().unwrap() <= c0 * lambda.powi(n) * (1.0 + 1e-12));
    }
}
