use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_ball_radius, BowenBall, Constants, ExpandingMap, InverseBranch, Region};
use crate::{Error, Result};

const MARGIN: f64 = 1e-9;

/// `t -> k t mod 1` on `R/Z`, with points kept as exact rationals in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMap {
    k: u32,
    constants: Constants,
}

pub fn make_circle_map(k: u32) -> Result<CircleMap> {
    if k < 2 {
        return Err(Error::Precondition(format!("circle map needs k >= 2, got {k}")));
    }
    let kf = k as f64;
    Ok(CircleMap {
        k,
        constants: Constants::new(1.0 / (2.0 * kf) - MARGIN, 1.0 / kf, 1.0 / kf - MARGIN),
    })
}

pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Signed circle difference `y - x` in `[-1/2, 1/2)`.
pub(crate) fn signed_diff(y: &BigRational, x: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    frac(&(y - x + &half)) - half
}

pub(crate) fn circle_distance(x: &BigRational, y: &BigRational) -> BigRational {
    signed_diff(y, x).abs()
}

/// The `k^n - 1` solutions `j / (k^n - 1)` of `f^n(x) = x`.
pub fn circle_periodic_points(k: u32, n: u32) -> Vec<BigRational> {
    let d: BigInt = num_traits::pow(BigInt::from(k), n as usize) - 1;
    let count = d.to_usize().expect("period too large to enumerate");
    (0..count)
        .map(|j| BigRational::new(BigInt::from(j), d.clone()))
        .collect()
}

impl CircleMap {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Exact point for an `f64` coordinate (every double is a dyadic rational).
    pub fn point(&self, x: f64) -> BigRational {
        frac(&BigRational::from_float(x).expect("finite coordinate"))
    }

    pub fn ratio(&self, n: i64, d: i64) -> BigRational {
        frac(&BigRational::new(n.into(), d.into()))
    }

    fn kq(&self) -> BigRational {
        BigRational::from_integer(self.k.into())
    }
}

impl ExpandingMap for CircleMap {
    type Point = BigRational;

    fn describe(&self) -> String {
        format!("circle x{}", self.k)
    }

    fn apply(&self, x: &BigRational) -> BigRational {
        frac(&(x * self.kq()))
    }

    fn distance_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        circle_distance(x, y)
    }

    fn preimages(&self, x: &BigRational) -> Vec<BigRational> {
        let x = frac(x);
        (0..self.k)
            .map(|j| (&x + BigRational::from_integer(j.into())) / self.kq())
            .collect()
    }

    fn lift(&self, anchor: &BigRational, image: &BigRational, y: &BigRational) -> Result<BigRational> {
        let delta = signed_diff(y, anchor);
        let dist = delta.abs().to_f64().unwrap();
        if dist >= self.constants.r {
            return Err(Error::OutsideBranchDomain {
                distance: dist,
                radius: self.constants.r,
            });
        }
        Ok(frac(&(image + delta / self.kq())))
    }

    fn constants(&self) -> Constants {
        self.constants
    }

    fn lipschitz(&self) -> f64 {
        self.k as f64
    }

    fn branch_fixed_point(&self, g: &InverseBranch<BigRational>) -> Option<BigRational> {
        // g(y) = image + (y - anchor) / k^n near the anchor; solve g(z) = z.
        let kn = num_traits::pow(self.kq(), g.depth());
        let d = signed_diff(g.image(), g.anchor());
        let delta = d * &kn / (&kn - BigRational::one());
        if delta.abs().to_f64().unwrap() >= self.constants.r {
            return None;
        }
        Some(frac(&(g.anchor() + delta)))
    }
}

impl BowenBall for CircleMap {
    fn dynamical_ball(&self, x: &BigRational, n: usize, eps: &BigRational) -> Result<Region> {
        check_ball_radius(&self.constants, eps.to_f64().unwrap_or(f64::NAN))?;
        Ok(Region::Arc {
            center: frac(x),
            half_width: eps / num_traits::pow(self.kq(), n),
        })
    }

    fn region_contains(&self, region: &Region, y: &BigRational) -> bool {
        match region {
            Region::Arc { center, half_width } => &circle_distance(center, y) < half_width,
            _ => false,
        }
    }
}

/// Denominator-aware check that `x` is one of the `j / (k^n - 1)`.
pub(crate) fn is_circle_periodic(k: u32, n: u32, x: &BigRational) -> bool {
    let d: BigInt = num_traits::pow(BigInt::from(k), n as usize) - 1;
    (x.numer() * &d).is_multiple_of(x.denom())
        && !x.is_negative()
        && x < &BigRational::one()
        && !d.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::ExpandingMap;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_and_branches() {
        let m = make_circle_map(2).unwrap();
        assert_eq!(m.apply(&q(1, 3)), q(2, 3));
        assert_eq!(m.preimages(&q(0, 1)), vec![q(0, 1), q(1, 2)]);
        assert!(m.distance(&q(0, 1), &q(1, 2)) > m.constants().c);
        assert!(make_circle_map(1).is_err());
        let c = m.constants();
        assert!((c.r - 0.25).abs() < 1e-8 && (c.lambda - 0.5).abs() < 1e-15);
        assert!(c.expansivity_eps < c.expansivity_bound());
    }

    #[test]
    fn period_two_points_of_tripling() {
        let m = make_circle_map(3).unwrap();
        let pts = circle_periodic_points(3, 2);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[1], q(1, 8));
        for p in &pts {
            assert_eq!(&m.iterate(p, 2), p);
            assert!(is_circle_periodic(3, 2, p));
        }
        assert!(!is_circle_periodic(3, 2, &q(1, 3)));
    }

    #[test]
    fn metric_wraps() {
        let m = make_circle_map(2).unwrap();
        assert_eq!(m.distance_exact(&q(1, 10), &q(9, 10)), q(1, 5));
        assert_eq!(signed_diff(&q(1, 10), &q(9, 10)), q(1, 5));
        assert_eq!(signed_diff(&q(9, 10), &q(1, 10)), q(-1, 5));
    }

    #[test]
    fn lift_rejects_points_outside_domain() {
        let m = make_circle_map(2).unwrap();
        assert!(matches!(
            m.lift(&q(0, 1), &q(1, 2), &q(3, 10)),
            Err(Error::OutsideBranchDomain { .. })
        ));
        assert_eq!(m.lift(&q(0, 1), &q(1, 2), &q(-1, 10)).unwrap(), q(9, 20));
    }

    #[test]
    fn bowen_balls() {
        let m = make_circle_map(2).unwrap();
        let eps = q(1, 10);
        assert_eq!(
            m.dynamical_ball(&q(0, 1), 0, &eps).unwrap(),
            Region::Arc { center: q(0, 1), half_width: q(1, 10) }
        );
        let ball = m.dynamical_ball(&q(0, 1), 3, &eps).unwrap();
        assert_eq!(ball, Region::Arc { center: q(0, 1), half_width: q(1, 80) });
        assert!(m.dynamical_ball(&q(0, 1), 1, &q(3, 10)).is_err());
    }

    #[test]
    fn fixed_point_of_composed_branch() {
        let m = make_circle_map(2).unwrap();
        let x = q(1, 3) + q(1, 1000);
        let o = m.orbit(&x, 2);
        let g = InverseBranch {
            chain: vec![(o[2].clone(), o[1].clone()), (o[1].clone(), o[0].clone())],
        };
        let z = m.branch_fixed_point(&g).unwrap();
        assert_eq!(z, q(1, 3));
        assert_eq!(g.eval(&m, &z).unwrap(), z);
    }
}
