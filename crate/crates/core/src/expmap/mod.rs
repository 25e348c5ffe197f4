//! Ruelle-expanding maps: forward map, metric, local contractive inverse
//! branches and the constants `r`, `lambda`, `c`.

pub(crate) mod circle;
mod shift;
mod toral;

pub use circle::{circle_periodic_points, make_circle_map, CircleMap};
pub use shift::{ShiftMap, ShiftPoint};
pub use toral::{make_toral_map, toral_count, ToralMap};

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::{Error, Result};

/// The constants of the expanding structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    /// Radius of the balls on which inverse branches are defined.
    pub r: f64,
    /// Contraction factor of every inverse branch.
    pub lambda: f64,
    /// Distinct preimages of a point are more than `c` apart.
    pub c: f64,
    /// Expansivity constant, strictly below `min{r, c / (1 + lambda)}`.
    pub expansivity_eps: f64,
}

impl Constants {
    pub fn new(r: f64, lambda: f64, c: f64) -> Self {
        let eps0 = r.min(c / (1.0 + lambda));
        Self {
            r,
            lambda,
            c,
            expansivity_eps: eps0 * (1.0 - 1e-9),
        }
    }

    /// `min{r, c / (1 + lambda)}`
    pub fn expansivity_bound(&self) -> f64 {
        self.r.min(self.c / (1.0 + self.lambda))
    }
}

pub trait ExpandingMap {
    type Point: Clone + Debug + PartialEq;

    fn describe(&self) -> String;

    fn apply(&self, x: &Self::Point) -> Self::Point;

    fn distance_exact(&self, x: &Self::Point, y: &Self::Point) -> BigRational;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64 {
        self.distance_exact(x, y).to_f64().unwrap_or(f64::NAN)
    }

    /// All preimages of `x`, in a fixed order that defines the branch indices.
    fn preimages(&self, x: &Self::Point) -> Vec<Self::Point>;

    /// Value at `y` of the branch of `f^-1` on `B_r(anchor)` that sends `anchor` to `image`.
    fn lift(&self, anchor: &Self::Point, image: &Self::Point, y: &Self::Point) -> Result<Self::Point>;

    fn constants(&self) -> Constants;

    /// A Lipschitz constant of `f` for the metric.
    fn lipschitz(&self) -> f64;

    /// Exact fixed point of a composed branch, if it lies in the branch domain.
    fn branch_fixed_point(&self, g: &InverseBranch<Self::Point>) -> Option<Self::Point>;

    fn iterate(&self, x: &Self::Point, n: usize) -> Self::Point {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.apply(&y);
        }
        y
    }

    fn orbit(&self, x: &Self::Point, n: usize) -> Vec<Self::Point> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.clone());
        for i in 0..n {
            let next = self.apply(&out[i]);
            out.push(next);
        }
        out
    }

    /// Bowen distance `d_n(x, y) = max_{0 <= j < n} d(f^j x, f^j y)`.
    fn bowen_distance(&self, x: &Self::Point, y: &Self::Point, n: usize) -> BigRational {
        let (mut a, mut b) = (x.clone(), y.clone());
        let mut best = self.distance_exact(&a, &b);
        for _ in 1..n {
            a = self.apply(&a);
            b = self.apply(&b);
            let d = self.distance_exact(&a, &b);
            if d > best {
                best = d;
            }
        }
        best
    }

    fn branches(&self, x: &Self::Point) -> Vec<InverseBranch<Self::Point>> {
        self.preimages(x)
            .into_iter()
            .map(|a| InverseBranch::single(x.clone(), a))
            .collect()
    }
}

/// A contractive branch of `f^-n`: `chain[i] = (anchor_i, image_i)` in
/// application order, so `g(y)` lifts `y` through every link in turn.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseBranch<P> {
    pub chain: Vec<(P, P)>,
}

impl<P: Clone> InverseBranch<P> {
    pub fn single(anchor: P, image: P) -> Self {
        Self {
            chain: vec![(anchor, image)],
        }
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    pub fn anchor(&self) -> &P {
        &self.chain[0].0
    }

    pub fn image(&self) -> &P {
        &self.chain.last().unwrap().1
    }

    pub fn eval<M: ExpandingMap<Point = P>>(&self, map: &M, y: &P) -> Result<P> {
        let mut v = y.clone();
        for (a, b) in &self.chain {
            v = map.lift(a, b, &v)?;
        }
        Ok(v)
    }
}

/// The branch of `f^-n` at `x` picked by `choice[i]` among the preimages at level `i`.
pub fn compose_branches<M: ExpandingMap>(
    map: &M,
    x: &M::Point,
    n: usize,
    choice: &[usize],
) -> Result<InverseBranch<M::Point>> {
    if n == 0 || choice.len() != n {
        return Err(Error::Precondition(format!(
            "need n >= 1 and one choice per level, got n = {n} and {} choices",
            choice.len()
        )));
    }
    let mut chain = Vec::with_capacity(n);
    let mut cur = x.clone();
    for &j in choice {
        let pre = map.preimages(&cur);
        let next = pre.get(j).cloned().ok_or(Error::BranchIndex {
            index: j,
            count: pre.len(),
        })?;
        chain.push((cur, next.clone()));
        cur = next;
    }
    Ok(InverseBranch { chain })
}

/// Bowen ball `B(n, eps, x) = g(B_eps(f^n x))` for the branch `g` of `f^-n` through `x`.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// Open arc of the given half-width.
    Arc { center: BigRational, half_width: BigRational },
    /// Image of the open square of half-width `eps` under `inverse`, translated to `center`.
    Parallelogram {
        center: [BigRational; 2],
        inverse: [[BigRational; 2]; 2],
        eps: BigRational,
    },
    /// Sequences beginning with `word`.
    Cylinder { word: Vec<usize> },
}

/// Maps that can describe their Bowen balls exactly.
pub trait BowenBall: ExpandingMap {
    fn dynamical_ball(&self, x: &Self::Point, n: usize, eps: &BigRational) -> Result<Region>;
    fn region_contains(&self, region: &Region, y: &Self::Point) -> bool;
}

pub(crate) fn check_ball_radius(c: &Constants, eps: f64) -> Result<()> {
    if !(eps > 0.0) || eps > c.r {
        return Err(Error::Precondition(format!(
            "ball radius {eps} must lie in (0, r = {}]",
            c.r
        )));
    }
    Ok(())
}

/// `(max preimage count, min pairwise preimage distance)` over the samples;
/// the gap is `+inf` when no sample has two preimages.
pub fn preimage_separation_bound<M: ExpandingMap>(map: &M, samples: &[M::Point]) -> (usize, f64) {
    let mut count = 0;
    let mut gap = f64::INFINITY;
    for x in samples {
        let pre = map.preimages(x);
        count = count.max(pre.len());
        for i in 0..pre.len() {
            for j in i + 1..pre.len() {
                gap = gap.min(map.distance(&pre[i], &pre[j]));
            }
        }
    }
    (count, gap)
}
