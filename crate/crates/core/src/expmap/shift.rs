use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{check_ball_radius, BowenBall, Constants, ExpandingMap, InverseBranch, Region};
use crate::sft::SubshiftOfFiniteType;
use crate::{Error, Result};

/// An eventually periodic sequence `prefix cycle cycle cycle ...`, stored in
/// canonical form (primitive cycle, shortest prefix) so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftPoint {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl ShiftPoint {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        let mut p = Self { prefix, cycle };
        p.canonicalize();
        p
    }

    pub fn periodic(cycle: Vec<usize>) -> Self {
        Self::new(Vec::new(), cycle)
    }

    pub fn constant(s: usize) -> Self {
        Self::periodic(vec![s])
    }

    fn canonicalize(&mut self) {
        let n = self.cycle.len();
        if let Some(p) = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| self.cycle[i] == self.cycle[i - p])) {
            self.cycle.truncate(p);
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.cycle.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn symbol(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` symbols.
    pub fn word(&self, n: usize) -> Vec<usize> {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    pub fn shifted(&self) -> Self {
        if self.prefix.is_empty() {
            let mut c = self.cycle.clone();
            c.rotate_left(1);
            Self {
                prefix: Vec::new(),
                cycle: c,
            }
        } else {
            Self {
                prefix: self.prefix[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    pub fn prepend(&self, s: usize) -> Self {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(s);
        prefix.extend_from_slice(&self.prefix);
        Self::new(prefix, self.cycle.clone())
    }

    pub fn is_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    /// `d(a, b) = sum_n delta_n / 2^n`, exactly.
    pub fn distance(&self, other: &Self) -> BigRational {
        let m = self.prefix.len().max(other.prefix.len());
        let l = self.cycle.len().lcm(&other.cycle.len());
        let mut head = BigInt::zero();
        for i in 0..m {
            head <<= 1;
            if self.symbol(i) != other.symbol(i) {
                head += 1;
            }
        }
        let mut tail = BigInt::zero();
        for t in 0..l {
            tail <<= 1;
            if self.symbol(m + t) != other.symbol(m + t) {
                tail += 1;
            }
        }
        // head / 2^(m-1) + 2^-m * (tail / 2^(l-1)) / (1 - 2^-l)
        let two_m = BigInt::one() << m;
        let head_q = BigRational::new(head * 2, two_m.clone());
        let tail_q = BigRational::new(tail * 2, (BigInt::one() << l) - 1) / BigRational::from_integer(two_m);
        head_q + tail_q
    }
}

impl fmt::Display for ShiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[usize]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        if self.prefix.is_empty() {
            write!(f, "({})^", join(&self.cycle))
        } else {
            write!(f, "{} ({})^", join(&self.prefix), join(&self.cycle))
        }
    }
}

/// The one-sided shift on `Sigma_A^+` with `r = 1`, `lambda = c = 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMap {
    sft: SubshiftOfFiniteType,
    constants: Constants,
}

impl ShiftMap {
    pub fn new(sft: SubshiftOfFiniteType) -> Result<Self> {
        if !sft.is_essential() {
            return Err(Error::InvalidMatrix(
                "shift map needs every symbol to have a successor and a predecessor".into(),
            ));
        }
        Ok(Self {
            sft,
            constants: Constants::new(1.0, 0.5, 0.5),
        })
    }

    pub fn sft(&self) -> &SubshiftOfFiniteType {
        &self.sft
    }

    /// The point `prefix cycle cycle ...`, checked for admissibility.
    pub fn point(&self, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<ShiftPoint> {
        if cycle.is_empty() {
            return Err(Error::Inadmissible("cycle must be nonempty".into()));
        }
        let mut word = prefix.clone();
        word.extend_from_slice(&cycle);
        word.push(cycle[0]);
        if !self.sft.is_admissible(&word)? {
            return Err(Error::Inadmissible(format!("{prefix:?} ({cycle:?})^")));
        }
        Ok(ShiftPoint::new(prefix, cycle))
    }

    /// Extends an admissible word by the canonical continuation that
    /// repeatedly takes the smallest allowed successor.
    pub fn extend_word(&self, word: &[usize]) -> Result<ShiftPoint> {
        if word.is_empty() || !self.sft.is_admissible(word)? {
            return Err(Error::Inadmissible(format!("{word:?}")));
        }
        let k = self.sft.alphabet_size();
        let mut seq = word.to_vec();
        let mut seen = vec![usize::MAX; k];
        loop {
            let last = *seq.last().unwrap();
            if seen[last] != usize::MAX {
                let start = seen[last];
                let prefix = seq[..start].to_vec();
                let cycle = seq[start..seq.len() - 1].to_vec();
                return Ok(ShiftPoint::new(prefix, cycle));
            }
            seen[last] = seq.len() - 1;
            let next = (0..k).find(|&s| self.sft.allows(last, s)).unwrap();
            seq.push(next);
        }
    }
}

impl ExpandingMap for ShiftMap {
    type Point = ShiftPoint;

    fn describe(&self) -> String {
        format!("shift on {:?}", self.sft.transition().to_i64_rows().unwrap_or_default())
    }

    fn apply(&self, x: &ShiftPoint) -> ShiftPoint {
        x.shifted()
    }

    fn distance_exact(&self, x: &ShiftPoint, y: &ShiftPoint) -> BigRational {
        x.distance(y)
    }

    fn preimages(&self, x: &ShiftPoint) -> Vec<ShiftPoint> {
        let a0 = x.symbol(0);
        (0..self.sft.alphabet_size())
            .filter(|&s| self.sft.allows(s, a0))
            .map(|s| x.prepend(s))
            .collect()
    }

    fn lift(&self, anchor: &ShiftPoint, image: &ShiftPoint, y: &ShiftPoint) -> Result<ShiftPoint> {
        let d = anchor.distance(y).to_f64().unwrap();
        if d >= self.constants.r {
            return Err(Error::OutsideBranchDomain {
                distance: d,
                radius: self.constants.r,
            });
        }
        Ok(y.prepend(image.symbol(0)))
    }

    fn constants(&self) -> Constants {
        self.constants
    }

    fn lipschitz(&self) -> f64 {
        2.0
    }

    fn branch_fixed_point(&self, g: &InverseBranch<ShiftPoint>) -> Option<ShiftPoint> {
        let u = g.image().word(g.depth());
        let z = ShiftPoint::periodic(u);
        (z.distance(g.anchor()).to_f64().unwrap() < self.constants.r).then_some(z)
    }
}

/// `Some(j)` when `eps = 2^-j` with `j >= 0`.
fn dyadic_exponent(eps: &BigRational) -> Option<usize> {
    if !eps.numer().is_one() {
        return None;
    }
    let d = eps.denom();
    let j = d.bits() as usize - 1;
    (BigInt::one() << j == *d).then_some(j)
}

impl BowenBall for ShiftMap {
    /// At radius `2^-j` the ball is the cylinder of the first `n + j + 1`
    /// symbols of `x`, less the nowhere dense set of sequences that differ
    /// from `x` at every later index.
    fn dynamical_ball(&self, x: &ShiftPoint, n: usize, eps: &BigRational) -> Result<Region> {
        check_ball_radius(&self.constants, eps.to_f64().unwrap_or(f64::NAN))?;
        let j = dyadic_exponent(eps).ok_or_else(|| {
            Error::Precondition(format!("shift balls are cylinders only at radii 2^-j, got {eps}"))
        })?;
        Ok(Region::Cylinder {
            word: x.word(n + j + 1),
        })
    }

    fn region_contains(&self, region: &Region, y: &ShiftPoint) -> bool {
        match region {
            Region::Cylinder { word } => y.word(word.len()) == *word,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::SignedIntMatrix;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form() {
        let a = ShiftPoint::new(vec![0, 1, 1], vec![1, 1]);
        assert_eq!(a, ShiftPoint::new(vec![0], vec![1]));
        let b = ShiftPoint::new(vec![2, 0, 1], vec![0, 1]);
        assert_eq!(b, ShiftPoint::new(vec![2], vec![0, 1]));
        assert_eq!(b.word(6), vec![2, 0, 1, 0, 1, 0]);
        assert_eq!(ShiftPoint::periodic(vec![0, 1]).shifted(), ShiftPoint::periodic(vec![1, 0]));
    }

    #[test]
    fn exact_metric() {
        let zeros = ShiftPoint::constant(0);
        let ones = ShiftPoint::constant(1);
        assert_eq!(zeros.distance(&ones), q(2, 1));
        assert_eq!(zeros.distance(&ShiftPoint::new(vec![1], vec![0])), q(1, 1));
        assert_eq!(zeros.distance(&ShiftPoint::new(vec![0, 1], vec![0])), q(1, 2));
        // 0^ vs (01)^ differ at odd indices: sum 2^-(2i+1) = 2/3
        assert_eq!(zeros.distance(&ShiftPoint::periodic(vec![0, 1])), q(2, 3));
        assert_eq!(zeros.distance(&zeros), q(0, 1));
    }

    #[test]
    fn shift_dynamics() {
        let m = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        let ones = ShiftPoint::constant(1);
        assert_eq!(m.apply(&ones), ones);
        let g = ShiftMap::new(SubshiftOfFiniteType::golden_mean()).unwrap();
        let pre = g.preimages(&ShiftPoint::constant(0));
        assert_eq!(pre.len(), 2);
        assert!(g.distance(&pre[0], &pre[1]) >= 1.0);
        assert!(g.point(vec![1, 1], vec![0]).is_err());
        assert!(ShiftMap::new(crate::sft::zero_shift(2)).is_err());
        let lone = SubshiftOfFiniteType::new(SignedIntMatrix::from_rows(&[[0, 1], [0, 1]]).unwrap()).unwrap();
        assert!(ShiftMap::new(lone).is_err());
    }

    #[test]
    fn cylinder_balls() {
        let m = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        let x = ShiftPoint::constant(1);
        assert_eq!(
            m.dynamical_ball(&x, 2, &q(1, 1)).unwrap(),
            Region::Cylinder { word: vec![1, 1, 1] }
        );
        assert!(m.dynamical_ball(&x, 2, &q(3, 4)).is_err());
        assert!(m.dynamical_ball(&x, 2, &q(2, 1)).is_err());
    }

    #[test]
    fn canonical_extension() {
        let g = ShiftMap::new(SubshiftOfFiniteType::golden_mean()).unwrap();
        let p = g.extend_word(&[1, 0, 1]).unwrap();
        assert_eq!(p.word(5), vec![1, 0, 1, 0, 0]);
        assert!(g.extend_word(&[1, 1]).is_err());
    }

    #[test]
    fn fixed_point_of_prepend_chain() {
        let m = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        let anchor = ShiftPoint::new(vec![0, 1, 1], vec![0]);
        let g = super::super::compose_branches(&m, &anchor, 2, &[1, 0]).unwrap();
        assert_eq!(g.image().word(3), vec![0, 1, 0]);
        assert_eq!(m.branch_fixed_point(&g), Some(ShiftPoint::periodic(vec![0, 1])));
    }
}
