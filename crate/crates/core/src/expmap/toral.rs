use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::circle::{circle_distance, frac, signed_diff};
use super::{check_ball_radius, BowenBall, Constants, ExpandingMap, InverseBranch, Region};
use crate::exactmat::SignedIntMatrix;
use crate::{Error, Result};

const MARGIN: f64 = 1e-9;

type Q = BigRational;
type Mat2 = [[Q; 2]; 2];
type Vec2 = [Q; 2];

fn mat_vec(m: &Mat2, v: &Vec2) -> Vec2 {
    [
        &m[0][0] * &v[0] + &m[0][1] * &v[1],
        &m[1][0] * &v[0] + &m[1][1] * &v[1],
    ]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_inv(m: &Mat2) -> Option<Mat2> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return None;
    }
    Some([
        [&m[1][1] / &det, -&m[0][1] / &det],
        [-&m[1][0] / &det, &m[0][0] / &det],
    ])
}

fn mat_pow(m: &Mat2, n: usize) -> Mat2 {
    let mut acc = [[Q::one(), Q::zero()], [Q::zero(), Q::one()]];
    for _ in 0..n {
        acc = mat_mul(&acc, m);
    }
    acc
}

fn inf_norm(m: &Mat2) -> Q {
    let r0 = m[0][0].abs() + m[0][1].abs();
    let r1 = m[1][0].abs() + m[1][1].abs();
    if r0 > r1 {
        r0
    } else {
        r1
    }
}

fn torus_norm(v: &Vec2) -> Q {
    let z = Q::zero();
    let a = circle_distance(&v[0], &z);
    let b = circle_distance(&v[1], &z);
    if a > b {
        a
    } else {
        b
    }
}

fn frac2(v: &Vec2) -> Vec2 {
    [frac(&v[0]), frac(&v[1])]
}

/// `v -> M v mod 1` on the flat torus with the max-metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ToralMap {
    m: Mat2,
    inv: Mat2,
    offsets: Vec<Vec2>,
    constants: Constants,
}

fn to_q(m: &SignedIntMatrix) -> Result<Mat2> {
    if m.dim() != 2 {
        return Err(Error::InvalidMatrix(format!(
            "toral map needs a 2x2 matrix, got {0}x{0}",
            m.dim()
        )));
    }
    let e = |i, j| Q::from_integer(m.get(i, j).clone());
    Ok([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

/// Both eigenvalues of an integer 2x2 matrix lie strictly outside the unit circle.
fn eigenvalues_expanding(m: &SignedIntMatrix) -> bool {
    let t = m.trace();
    let d = m.det();
    if d.is_positive() {
        d > BigInt::one() && t.abs() < &d + 1
    } else {
        t.abs() < d.abs() - 1
    }
}

pub fn make_toral_map(m: &SignedIntMatrix) -> Result<ToralMap> {
    let mq = to_q(m)?;
    if !eigenvalues_expanding(m) {
        return Err(Error::Precondition(format!(
            "toral matrix {:?} has an eigenvalue of modulus <= 1",
            m.to_i64_rows()
        )));
    }
    let inv = mat_inv(&mq).expect("expanding matrices are invertible");
    let lambda = inf_norm(&inv).to_f64().unwrap();
    if lambda >= 1.0 {
        return Err(Error::NotExpanding(format!(
            "inverse matrix has max-norm {lambda} >= 1"
        )));
    }
    // Coset representatives of Z^2 / M Z^2, found inside the box [0, q)^2.
    let q = m.det().abs().to_i64().expect("small determinant");
    let mut offsets: Vec<Vec2> = Vec::new();
    let mut classes: Vec<Vec2> = Vec::new();
    'outer: for a in 0..q {
        for b in 0..q {
            let w = [Q::from_integer(a.into()), Q::from_integer(b.into())];
            let class = frac2(&mat_vec(&inv, &w));
            if !classes.contains(&class) {
                classes.push(class);
                offsets.push(w);
                if offsets.len() == q as usize {
                    break 'outer;
                }
            }
        }
    }
    let gap = classes
        .iter()
        .filter(|c| !c[0].is_zero() || !c[1].is_zero())
        .map(torus_norm)
        .min()
        .map(|g| g.to_f64().unwrap())
        .unwrap_or(0.5);
    let c = gap - MARGIN;
    let r = (0.25f64).min(c / 2.0) - MARGIN;
    Ok(ToralMap {
        m: mq,
        inv,
        offsets,
        constants: Constants::new(r, lambda, c),
    })
}

/// `|det(M^n - I)|`, the number of points of period `n` of the induced toral map.
pub fn toral_count(m: &SignedIntMatrix, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Precondition("period must be >= 1".into()));
    }
    let d = m.pow(n).sub(&SignedIntMatrix::identity(m.dim())).det();
    if d.is_zero() {
        return Err(Error::Precondition(format!(
            "M^{n} has eigenvalue 1, so period-{n} points are not isolated"
        )));
    }
    Ok(d.abs())
}

impl ToralMap {
    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn point(&self, x: f64, y: f64) -> Vec2 {
        [
            frac(&Q::from_float(x).expect("finite")),
            frac(&Q::from_float(y).expect("finite")),
        ]
    }

    /// Integer entries of `M`.
    pub fn int_entries(&self) -> [[i64; 2]; 2] {
        let e = |i: usize, j: usize| self.m[i][j].to_integer().to_i64().expect("small matrix entry");
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn branch_count(&self) -> usize {
        self.offsets.len()
    }
}

impl ExpandingMap for ToralMap {
    type Point = Vec2;

    fn describe(&self) -> String {
        format!(
            "toral [[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }

    fn apply(&self, x: &Vec2) -> Vec2 {
        frac2(&mat_vec(&self.m, x))
    }

    fn distance_exact(&self, x: &Vec2, y: &Vec2) -> Q {
        torus_norm(&[&y[0] - &x[0], &y[1] - &x[1]])
    }

    fn preimages(&self, x: &Vec2) -> Vec<Vec2> {
        self.offsets
            .iter()
            .map(|w| frac2(&mat_vec(&self.inv, &[&x[0] + &w[0], &x[1] + &w[1]])))
            .collect()
    }

    fn lift(&self, anchor: &Vec2, image: &Vec2, y: &Vec2) -> Result<Vec2> {
        let delta = [signed_diff(&y[0], &anchor[0]), signed_diff(&y[1], &anchor[1])];
        let dist = delta[0].abs().max(delta[1].abs()).to_f64().unwrap();
        if dist >= self.constants.r {
            return Err(Error::OutsideBranchDomain {
                distance: dist,
                radius: self.constants.r,
            });
        }
        let step = mat_vec(&self.inv, &delta);
        Ok(frac2(&[&image[0] + &step[0], &image[1] + &step[1]]))
    }

    fn constants(&self) -> Constants {
        self.constants
    }

    fn lipschitz(&self) -> f64 {
        inf_norm(&self.m).to_f64().unwrap()
    }

    fn branch_fixed_point(&self, g: &InverseBranch<Vec2>) -> Option<Vec2> {
        // g(y) = image + M^-n (y - anchor); solve (I - M^-n) delta = image - anchor.
        let (a, b) = (g.anchor(), g.image());
        let d = [signed_diff(&b[0], &a[0]), signed_diff(&b[1], &a[1])];
        let mn = mat_pow(&self.inv, g.depth());
        let ident = [[Q::one(), Q::zero()], [Q::zero(), Q::one()]];
        let lhs = [
            [&ident[0][0] - &mn[0][0], &ident[0][1] - &mn[0][1]],
            [&ident[1][0] - &mn[1][0], &ident[1][1] - &mn[1][1]],
        ];
        let delta = mat_vec(&mat_inv(&lhs)?, &d);
        let size = delta[0].abs().max(delta[1].abs()).to_f64().unwrap();
        if size >= self.constants.r {
            return None;
        }
        Some(frac2(&[&a[0] + &delta[0], &a[1] + &delta[1]]))
    }
}

impl BowenBall for ToralMap {
    fn dynamical_ball(&self, x: &Vec2, n: usize, eps: &Q) -> Result<Region> {
        check_ball_radius(&self.constants, eps.to_f64().unwrap_or(f64::NAN))?;
        Ok(Region::Parallelogram {
            center: frac2(x),
            inverse: mat_pow(&self.inv, n),
            eps: eps.clone(),
        })
    }

    fn region_contains(&self, region: &Region, y: &Vec2) -> bool {
        let Region::Parallelogram { center, inverse, eps } = region else {
            return false;
        };
        let delta = [signed_diff(&y[0], &center[0]), signed_diff(&y[1], &center[1])];
        let Some(forward) = mat_inv(inverse) else {
            return false;
        };
        let u = mat_vec(&forward, &delta);
        u[0].abs() < *eps && u[1].abs() < *eps
    }
}
