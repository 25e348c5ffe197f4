use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::CoverGeometry;
use crate::expmap::circle::frac;
use crate::expmap::CircleMap;
use crate::{Error, Result};

/// Closed arc `[lo, lo + len]` of `R/Z` with `0 <= lo < 1` and `0 <= len <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    lo: BigRational,
    len: BigRational,
}

impl Arc {
    /// The arc from `lo` to `hi` travelling in the positive direction.
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        let len = &hi - &lo;
        if len <= BigRational::zero() || len > BigRational::one() {
            return Err(Error::InvalidCover(format!("arc [{lo}, {hi}] needs 0 < hi - lo <= 1")));
        }
        Ok(Self { lo: frac(&lo), len })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> BigRational {
        &self.lo + &self.len
    }

    pub fn len(&self) -> &BigRational {
        &self.len
    }

    /// Closed pieces inside `[0, 1]`, with `0` and `1` both present when either is.
    fn pieces(&self) -> Vec<(BigRational, BigRational)> {
        let one = BigRational::one();
        let hi = self.hi();
        let mut out = Vec::with_capacity(3);
        if hi <= one {
            out.push((self.lo.clone(), hi.clone()));
            if hi == one {
                out.push((BigRational::zero(), BigRational::zero()));
            }
            if self.lo.is_zero() {
                out.push((one.clone(), one));
            }
        } else {
            out.push((self.lo.clone(), one.clone()));
            out.push((BigRational::zero(), hi - one));
        }
        out
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let x = frac(x);
        self.pieces().iter().any(|(a, b)| a <= &x && &x <= b)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi())
    }
}

fn shifts() -> [BigRational; 3] {
    [-BigRational::one(), BigRational::zero(), BigRational::one()]
}

/// Open arcs `(a, a + la)` and `(b, b + lb)` meet.
fn open_meet(a: &BigRational, la: &BigRational, b: &BigRational, lb: &BigRational) -> bool {
    shifts().iter().any(|t| {
        let bt = b + t;
        let lo = if a > &bt { a.clone() } else { bt.clone() };
        let ha = a + la;
        let hb = &bt + lb;
        let hi = if ha < hb { ha } else { hb };
        lo < hi
    })
}

/// `(b, b + lb)` sits inside `(a, a + la)`.
fn open_contains(a: &BigRational, la: &BigRational, b: &BigRational, lb: &BigRational) -> bool {
    shifts().iter().any(|t| {
        let bt = b + t;
        a <= &bt && &bt + lb <= a + la
    })
}

impl CircleMap {
    fn kq_rat(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.k()))
    }

    /// Open image arc of `int R`; `None` when it wraps the whole circle.
    fn image_arc(&self, r: &Arc) -> Option<(BigRational, BigRational)> {
        let l = r.len() * self.kq_rat();
        (l <= BigRational::one()).then(|| (frac(&(r.lo() * self.kq_rat())), l))
    }

    /// The partition into `m` arcs `[i/m, (i+1)/m]`.
    pub fn arcs(&self, m: usize) -> Vec<Arc> {
        (0..m)
            .map(|i| {
                Arc::new(
                    BigRational::new(BigInt::from(i), BigInt::from(m)),
                    BigRational::new(BigInt::from(i + 1), BigInt::from(m)),
                )
                .unwrap()
            })
            .collect()
    }
}

impl CoverGeometry for CircleMap {
    type Rect = Arc;

    fn uniform_rects(&self, mesh: &BigRational) -> Result<Vec<Arc>> {
        if mesh <= &BigRational::zero() {
            return Err(Error::InvalidCover(format!("mesh must be positive, got {mesh}")));
        }
        let k = BigRational::from_integer(self.k().into());
        let per = (BigRational::one() / (&k * mesh)).ceil().to_integer();
        let m = per
            .to_usize()
            .and_then(|p| p.checked_mul(self.k() as usize))
            .filter(|&m| m <= 1 << 16)
            .ok_or_else(|| Error::GuardExceeded(format!("mesh {mesh} gives too many arcs")))?;
        Ok(self.arcs(m))
    }

    fn diameter(&self, r: &Arc) -> BigRational {
        let half = BigRational::new(1.into(), 2.into());
        if r.len() < &half {
            r.len().clone()
        } else {
            half
        }
    }

    fn is_proper(&self, r: &Arc) -> bool {
        r.len() > &BigRational::zero()
    }

    fn interiors_meet(&self, a: &Arc, b: &Arc) -> bool {
        open_meet(a.lo(), a.len(), b.lo(), b.len())
    }

    fn image_meets(&self, a: &Arc, b: &Arc) -> bool {
        match self.image_arc(a) {
            Some((lo, l)) => open_meet(&lo, &l, b.lo(), b.len()),
            None => true,
        }
    }

    fn image_contains(&self, a: &Arc, b: &Arc) -> bool {
        match self.image_arc(a) {
            Some((lo, l)) => open_contains(&lo, &l, b.lo(), b.len()),
            None => true,
        }
    }

    fn covers(&self, rects: &[Arc]) -> bool {
        let mut pieces: Vec<_> = rects.iter().flat_map(|r| r.pieces()).collect();
        pieces.sort_by(|x, y| x.0.cmp(&y.0));
        let mut reach = BigRational::zero();
        for (a, b) in pieces {
            if a > reach {
                return false;
            }
            if b > reach {
                reach = b;
            }
        }
        reach >= BigRational::one()
    }

    fn common_point(&self, rects: &[&Arc]) -> bool {
        let Some((first, rest)) = rects.split_first() else {
            return true;
        };
        let mut acc = first.pieces();
        for r in rest {
            let mut next = Vec::new();
            for (a, b) in &acc {
                for (c, d) in r.pieces() {
                    let lo = if a > &c { a.clone() } else { c };
                    let hi = if b < &d { b.clone() } else { d };
                    if lo <= hi {
                        next.push((lo, hi));
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            acc = next;
        }
        true
    }

    fn rect_contains(&self, r: &Arc, x: &BigRational) -> bool {
        r.contains(x)
    }

    fn pull_back(&self, outer: &Arc, inner: &Arc) -> Result<Arc> {
        let k = self.kq_rat();
        let img_lo = outer.lo() * &k;
        let img_hi = outer.hi() * &k;
        let start: BigInt = img_lo.floor().to_integer() - 1;
        let stop: BigInt = img_hi.ceil().to_integer() + 1;
        let mut found: Vec<(BigRational, BigRational)> = Vec::new();
        let mut t = start;
        while t <= stop {
            let tq = BigRational::from_integer(t.clone());
            let a = inner.lo() + &tq;
            let b = inner.hi() + &tq;
            let lo = if img_lo > a { img_lo.clone() } else { a };
            let hi = if img_hi < b { img_hi.clone() } else { b };
            if lo < hi {
                match found.last_mut() {
                    Some(last) if last.1 == lo => last.1 = hi,
                    _ => found.push((lo, hi)),
                }
            }
            t += 1;
        }
        match found.as_slice() {
            [(lo, hi)] => Arc::new(lo / &k, hi / &k),
            [] => Err(Error::Inadmissible(format!("{outer} does not map onto {inner}"))),
            _ => Err(Error::InvalidCover(format!("preimage of {inner} in {outer} is not an arc"))),
        }
    }

    fn dump_rect(&self, r: &Arc) -> String {
        format!("{} {}", r.lo(), r.hi())
    }
}
