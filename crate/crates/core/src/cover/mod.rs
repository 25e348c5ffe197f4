//! Markov covers by closed arcs (circle maps) or cylinders (shifts), the
//! codings they induce, and the signed trace formula for periodic counts.

mod arc;
mod cylinder;
mod theta;

use std::fmt::{Debug, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exactmat::{mat_power_trace, SignedIntMatrix};
use crate::expmap::ExpandingMap;
use crate::zetafn::{counts_from_zeta, zeta_from_signed_family, RationalFunction};
use crate::{Error, Result};

pub use arc::Arc;
pub use theta::{dense_coding, theta_code, DenseCoding};

/// Largest family size searched over permutations.
pub const MAX_FAMILY_ORDER: usize = 12;

/// Exact set operations on the rectangles of one geometry.
pub trait CoverGeometry: ExpandingMap {
    type Rect: Clone + Debug + PartialEq;

    fn uniform_rects(&self, mesh: &BigRational) -> Result<Vec<Self::Rect>>;
    fn diameter(&self, r: &Self::Rect) -> BigRational;
    /// `R` is the closure of its (nonempty) interior.
    fn is_proper(&self, r: &Self::Rect) -> bool;
    fn interiors_meet(&self, a: &Self::Rect, b: &Self::Rect) -> bool;
    /// `f(int a)` meets `int b`.
    fn image_meets(&self, a: &Self::Rect, b: &Self::Rect) -> bool;
    /// `int b` lies inside `f(int a)`.
    fn image_contains(&self, a: &Self::Rect, b: &Self::Rect) -> bool;
    fn covers(&self, rects: &[Self::Rect]) -> bool;
    /// The closed rectangles have a common point.
    fn common_point(&self, rects: &[&Self::Rect]) -> bool;
    fn rect_contains(&self, r: &Self::Rect, x: &Self::Point) -> bool;
    /// `outer ∩ f^-1(inner)` as a rectangle.
    fn pull_back(&self, outer: &Self::Rect, inner: &Self::Rect) -> Result<Self::Rect>;
    fn dump_rect(&self, r: &Self::Rect) -> String;
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovCover<M: CoverGeometry> {
    map: M,
    rects: Vec<M::Rect>,
    transition: SignedIntMatrix,
}

impl<M: CoverGeometry + Clone> MarkovCover<M> {
    /// A cover from explicit rectangles. Nothing is checked; see [`verify_cover`].
    pub fn from_rects(map: &M, rects: Vec<M::Rect>) -> Result<Self> {
        if rects.is_empty() {
            return Err(Error::InvalidCover("no rectangles".into()));
        }
        let n = rects.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in &rects {
            for b in &rects {
                entries.push(BigInt::from(map.image_meets(a, b) as i32));
            }
        }
        Ok(Self {
            map: map.clone(),
            transition: SignedIntMatrix::new(n, entries)?,
            rects,
        })
    }
}

impl<M: CoverGeometry> MarkovCover<M> {
    pub fn map(&self) -> &M {
        &self.map
    }

    pub fn rects(&self) -> &[M::Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn transition(&self) -> &SignedIntMatrix {
        &self.transition
    }

    /// Rectangles must have diameter below `min{eps, c/2}`.
    pub fn diameter_bound(&self) -> f64 {
        let c = self.map.constants();
        c.expansivity_eps.min(c.c / 2.0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "cover {}", self.map.describe()).unwrap();
        writeln!(s, "rects {}", self.rects.len()).unwrap();
        for r in &self.rects {
            writeln!(s, "{}", self.map.dump_rect(r)).unwrap();
        }
        writeln!(s, "transition").unwrap();
        s.push_str(&self.transition.to_text());
        s
    }
}

/// The uniform partition at `mesh`, refused when it breaks the diameter bound.
pub fn build_cover<M: CoverGeometry + Clone>(map: &M, mesh: &BigRational) -> Result<MarkovCover<M>> {
    let cover = MarkovCover::from_rects(map, map.uniform_rects(mesh)?)?;
    if !verify_cover(&cover).diameter {
        return Err(Error::InvalidCover(format!(
            "mesh {mesh} gives rectangles of diameter >= {}",
            cover.diameter_bound()
        )));
    }
    Ok(cover)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverReport {
    pub diameter: bool,
    pub proper: bool,
    pub disjoint_interiors: bool,
    pub markov: bool,
    pub covers: bool,
    pub max_diameter: f64,
    pub diameter_bound: f64,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.diameter && self.proper && self.disjoint_interiors && self.markov && self.covers
    }

    pub fn checks(&self) -> [(&'static str, bool); 5] {
        [
            ("diameter", self.diameter),
            ("proper", self.proper),
            ("disjoint-interiors", self.disjoint_interiors),
            ("markov", self.markov),
            ("covers", self.covers),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "max diameter {:.6e} (bound {:.6e})\n",
            self.max_diameter, self.diameter_bound
        );
        for (name, ok) in self.checks() {
            writeln!(s, "{name}: {}", if ok { "pass" } else { "FAIL" }).unwrap();
        }
        s
    }
}

pub fn verify_cover<M: CoverGeometry>(cover: &MarkovCover<M>) -> CoverReport {
    let map = &cover.map;
    let rects = &cover.rects;
    let bound = cover.diameter_bound();
    let bound_q = BigRational::from_float(bound).unwrap_or_else(BigRational::zero);
    let max_diam = rects
        .iter()
        .map(|r| map.diameter(r))
        .max()
        .unwrap_or_else(BigRational::zero);
    let n = rects.len();
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    CoverReport {
        diameter: max_diam < bound_q,
        proper: rects.iter().all(|r| map.is_proper(r)),
        disjoint_interiors: pairs()
            .filter(|(i, j)| i < j)
            .all(|(i, j)| !map.interiors_meet(&rects[i], &rects[j])),
        markov: pairs().all(|(i, j)| {
            !map.image_meets(&rects[i], &rects[j]) || map.image_contains(&rects[i], &rects[j])
        }),
        covers: map.covers(rects),
        max_diameter: max_diam.to_f64().unwrap_or(f64::NAN),
        diameter_bound: bound,
    }
}

/// `F = R_{a_0} ∩ f^-1 R_{a_1} ∩ ... ∩ f^-(n-1) R_{a_{n-1}}`.
pub fn pi_code<M: CoverGeometry>(cover: &MarkovCover<M>, word: &[usize]) -> Result<M::Rect> {
    let n = cover.len();
    let Some((&last, _)) = word.split_last() else {
        return Err(Error::Precondition("empty symbol word".into()));
    };
    if let Some(&s) = word.iter().find(|&&s| s >= n) {
        return Err(Error::SymbolOutOfRange { symbol: s, alphabet: n });
    }
    if let Some(w) = word.windows(2).find(|w| !cover.transition.has_edge(w[0], w[1])) {
        return Err(Error::Inadmissible(format!("transition {} -> {} is not allowed", w[0], w[1])));
    }
    let mut f = cover.rects[last].clone();
    for &a in word[..word.len() - 1].iter().rev() {
        f = cover.map.pull_back(&cover.rects[a], &f)?;
    }
    Ok(f)
}

/// Indices of the closed rectangles containing `x`.
pub fn rects_containing<M: CoverGeometry>(cover: &MarkovCover<M>, x: &M::Point) -> Vec<usize> {
    (0..cover.len())
        .filter(|&i| cover.map.rect_contains(&cover.rects[i], x))
        .collect()
}

/// Admissible words `a_0..a_{depth-1}` with `f^i(x) ∈ R_{a_i}`.
pub fn codings<M: CoverGeometry>(cover: &MarkovCover<M>, x: &M::Point, depth: usize) -> Vec<Vec<usize>> {
    let orbit = cover.map.orbit(x, depth.saturating_sub(1));
    let hits: Vec<Vec<usize>> = orbit.iter().take(depth).map(|y| rects_containing(cover, y)).collect();
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    for h in &hits {
        words = words
            .into_iter()
            .flat_map(|w| {
                h.iter()
                    .filter(|&&s| w.last().map_or(true, |&l| cover.transition.has_edge(l, s)))
                    .map(|&s| {
                        let mut v = w.clone();
                        v.push(s);
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    words
}

/// `I_r` with the matrices `A^(r)`, `B^(r)` indexed by it.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyLevel {
    pub sets: Vec<Vec<usize>>,
    pub a: SignedIntMatrix,
    pub b: SignedIntMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectingFamilies {
    levels: Vec<FamilyLevel>,
}

impl IntersectingFamilies {
    /// `L`, the largest `r` with `I_r` nonempty.
    pub fn max_order(&self) -> usize {
        self.levels.len()
    }

    /// Level `r`, 1-based.
    pub fn level(&self, r: usize) -> Option<&FamilyLevel> {
        r.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn levels(&self) -> &[FamilyLevel] {
        &self.levels
    }

    pub fn b_matrices(&self) -> Vec<SignedIntMatrix> {
        self.levels.iter().map(|l| l.b.clone()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, l) in self.levels.iter().enumerate() {
            let sets: Vec<String> = l
                .sets
                .iter()
                .map(|set| {
                    let inner: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                    format!("{{{}}}", inner.join(","))
                })
                .collect();
            writeln!(s, "I_{}: {}", i + 1, sets.join(" ")).unwrap();
        }
        s
    }
}

fn parity(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Counts bijections `mu` with `A[s_i][t_mu(i)] = 1` (stopping at two) and keeps the first.
fn matchings(a: &SignedIntMatrix, s: &[usize], t: &[usize], i: usize, used: &mut [bool], perm: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    if found.len() >= 2 {
        return;
    }
    if i == s.len() {
        found.push(perm.clone());
        return;
    }
    for j in 0..t.len() {
        if !used[j] && a.has_edge(s[i], t[j]) {
            used[j] = true;
            perm.push(j);
            matchings(a, s, t, i + 1, used, perm, found);
            perm.pop();
            used[j] = false;
        }
    }
}

/// `Some(sgn mu)` when exactly one admissible permutation exists.
fn unique_sign(a: &SignedIntMatrix, s: &[usize], t: &[usize]) -> Option<i32> {
    let mut found = Vec::new();
    matchings(a, s, t, 0, &mut vec![false; t.len()], &mut Vec::new(), &mut found);
    match found.as_slice() {
        [p] => Some(parity(p)),
        _ => None,
    }
}

pub fn intersecting_families<M: CoverGeometry>(cover: &MarkovCover<M>) -> Result<IntersectingFamilies> {
    let n = cover.len();
    let rects = &cover.rects;
    let mut levels = Vec::new();
    let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while !sets.is_empty() {
        let r = sets[0].len();
        if r > MAX_FAMILY_ORDER {
            return Err(Error::GuardExceeded(format!(
                "{r} rectangles share a point; permutation search is limited to {MAX_FAMILY_ORDER}"
            )));
        }
        let m = sets.len();
        let mut a = Vec::with_capacity(m * m);
        let mut b = Vec::with_capacity(m * m);
        for s in &sets {
            for t in &sets {
                let sign = unique_sign(&cover.transition, s, t);
                a.push(BigInt::from(sign.is_some() as i32));
                b.push(BigInt::from(sign.unwrap_or(0)));
            }
        }
        let next: Vec<Vec<usize>> = sets
            .iter()
            .flat_map(|s| {
                let start = s.last().unwrap() + 1;
                (start..n).filter_map(move |j| {
                    let mut group: Vec<&M::Rect> = s.iter().map(|&i| &rects[i]).collect();
                    group.push(&rects[j]);
                    cover.map.common_point(&group).then(|| {
                        let mut v = s.clone();
                        v.push(j);
                        v
                    })
                })
            })
            .collect();
        levels.push(FamilyLevel {
            sets,
            a: SignedIntMatrix::new(m, a)?,
            b: SignedIntMatrix::new(m, b)?,
        });
        sets = next;
    }
    Ok(IntersectingFamilies { levels })
}

/// `N_p = sum_r (-1)^(r-1) tr((B^(r))^p)`.
pub fn count_periodic_via_cover(families: &IntersectingFamilies, p: u64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (i, l) in families.levels.iter().enumerate() {
        let t = mat_power_trace(&l.b, p)?;
        if i % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    Ok(total)
}

/// `prod_{r even} det(I - z B^(r)) / prod_{r odd} det(I - z B^(r))`, checked against the trace counts.
pub fn zeta_via_cover(families: &IntersectingFamilies) -> Result<RationalFunction> {
    let r = zeta_from_signed_family(&families.b_matrices())?;
    let order = r.numerator().degree().unwrap_or(0) + r.denominator().degree().unwrap_or(0) + 1;
    let expected = counts_from_zeta(&r, order)?;
    for p in 1..=order {
        let direct = count_periodic_via_cover(families, p as u64)?;
        if &direct != expected.get(p) {
            return Err(Error::InconsistentFamily(format!(
                "N_{p} = {direct} from traces but {} from {}",
                expected.get(p),
                r
            )));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::{make_circle_map, CircleMap, ShiftMap};
    use crate::sft::SubshiftOfFiniteType;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn arcs(map: &CircleMap, m: usize) -> MarkovCover<CircleMap> {
        MarkovCover::from_rects(map, map.arcs(m)).unwrap()
    }

    fn full2() -> ShiftMap {
        ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap()
    }

    #[test]
    fn four_arc_cover_structure() {
        let m = make_circle_map(2).unwrap();
        let c = arcs(&m, 4);
        assert_eq!(c.transition().to_i64_rows().unwrap()[0], vec![1, 1, 0, 0]);
        let rep = verify_cover(&c);
        assert!(rep.proper && rep.disjoint_interiors && rep.markov && rep.covers);
        // arcs of length 1/4 are not below c/2 = 1/4 - 5e-10
        assert!(!rep.diameter);
        assert!(build_cover(&m, &q(1, 4)).is_err());
        let fam = intersecting_families(&c).unwrap();
        assert_eq!(fam.max_order(), 2);
        assert_eq!(fam.level(2).unwrap().sets, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert_eq!(fam.level(1).unwrap().a, *c.transition());
        assert_eq!(fam.level(1).unwrap().b, *c.transition());
    }

    #[test]
    fn built_covers() {
        let m3 = make_circle_map(3).unwrap();
        let c = build_cover(&m3, &q(1, 9)).unwrap();
        assert_eq!(c.len(), 9);
        for row in c.transition().to_i64_rows().unwrap() {
            assert_eq!(row.iter().sum::<i64>(), 3);
        }
        assert!(verify_cover(&c).passed());
        let m2 = make_circle_map(2).unwrap();
        assert_eq!(build_cover(&m2, &q(1, 5)).unwrap().len(), 6);
        let s = build_cover(&full2(), &q(1, 16)).unwrap();
        assert_eq!(s.len(), 16);
        assert!(verify_cover(&s).passed());
        assert!(build_cover(&full2(), &q(1, 4)).is_err());
    }

    #[test]
    fn constructed_violations() {
        let m = make_circle_map(2).unwrap();
        let wide = MarkovCover::from_rects(
            &m,
            vec![Arc::new(q(0, 1), q(3, 5)).unwrap(), Arc::new(q(3, 5), q(1, 1)).unwrap()],
        )
        .unwrap();
        assert!(!verify_cover(&wide).diameter);
        let overlap = MarkovCover::from_rects(
            &m,
            vec![
                Arc::new(q(0, 1), q(1, 4)).unwrap(),
                Arc::new(q(1, 5), q(1, 2)).unwrap(),
                Arc::new(q(1, 2), q(3, 4)).unwrap(),
                Arc::new(q(3, 4), q(1, 1)).unwrap(),
            ],
        )
        .unwrap();
        assert!(!verify_cover(&overlap).disjoint_interiors);
        let gap = MarkovCover::from_rects(&m, m.arcs(4)[..3].to_vec()).unwrap();
        assert!(!verify_cover(&gap).covers);
    }

    #[test]
    fn pullback_codes() {
        let m = make_circle_map(2).unwrap();
        let c = arcs(&m, 4);
        assert_eq!(pi_code(&c, &[0, 0, 0]).unwrap(), Arc::new(q(0, 1), q(1, 16)).unwrap());
        assert_eq!(pi_code(&c, &[2]).unwrap(), c.rects()[2]);
        assert!(pi_code(&c, &[0, 2]).is_err());
        assert!(pi_code(&c, &[]).is_err());
        let s = MarkovCover::from_rects(&full2(), vec![vec![0], vec![1]]).unwrap();
        assert_eq!(pi_code(&s, &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(*s.transition(), SignedIntMatrix::all_ones(2));
    }

    #[test]
    fn signed_counts_on_fine_circle_covers() {
        for k in [2u32, 3] {
            let m = make_circle_map(k).unwrap();
            for mult in [3usize, 4] {
                let c = arcs(&m, mult * k as usize);
                assert!(verify_cover(&c).passed());
                let fam = intersecting_families(&c).unwrap();
                for p in 1..=10u32 {
                    let want = BigInt::from(k).pow(p) - 1;
                    assert_eq!(count_periodic_via_cover(&fam, p as u64).unwrap(), want, "k={k} m={}", mult * k as usize);
                }
                let z = zeta_via_cover(&fam).unwrap();
                assert_eq!(z.to_text(), format!("num: 1 -1 / den: 1 -{k}"));
            }
        }
    }

    #[test]
    fn coarse_circle_cover_overcounts() {
        let m = make_circle_map(2).unwrap();
        let fam = intersecting_families(&arcs(&m, 4)).unwrap();
        let counts: Vec<BigInt> = (1..=3).map(|p| count_periodic_via_cover(&fam, p).unwrap()).collect();
        assert_eq!(counts, [2, 4, 8].map(BigInt::from).to_vec());
    }

    #[test]
    fn shift_covers_count_by_trace() {
        let s = MarkovCover::from_rects(&full2(), vec![vec![0], vec![1]]).unwrap();
        let fam = intersecting_families(&s).unwrap();
        assert_eq!(fam.max_order(), 1);
        assert_eq!(count_periodic_via_cover(&fam, 3).unwrap(), BigInt::from(8));
        assert_eq!(zeta_via_cover(&fam).unwrap().to_string(), "1/(1 - 2z)");
        let g = ShiftMap::new(SubshiftOfFiniteType::golden_mean()).unwrap();
        let c = build_cover(&g, &q(1, 16)).unwrap();
        assert_eq!(zeta_via_cover(&intersecting_families(&c).unwrap()).unwrap().to_string(), "1/(1 - z - z^2)");
    }

    #[test]
    fn codings_of_points() {
        let m = make_circle_map(2).unwrap();
        let c = arcs(&m, 8);
        assert_eq!(rects_containing(&c, &q(0, 1)), vec![0, 7]);
        let w = codings(&c, &q(0, 1), 5);
        assert_eq!(w, vec![vec![0; 5], vec![7; 5]]);
        let w = codings(&c, &q(1, 3), 4);
        assert_eq!(w, vec![vec![2, 5, 2, 5]]);
        assert_eq!(c.to_text().lines().nth(2), Some("0 1/8"));
    }
}
