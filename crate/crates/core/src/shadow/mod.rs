//! Shadowing of pseudo-orbits by true orbits, and periodic points from
//! nearly periodic seeds.

use crate::expmap::{ExpandingMap, InverseBranch};
use crate::{Error, Result};

/// The largest jump bound usable for shadowing at `beta`:
/// `min{r - beta, (1 - lambda) / lambda * beta}`, less 1%.
pub fn max_alpha_for_beta<M: ExpandingMap>(map: &M, beta: f64) -> Result<f64> {
    let c = map.constants();
    if !(beta > 0.0) || beta >= c.r {
        return Err(Error::Precondition(format!(
            "beta = {beta} must lie in (0, r = {})",
            c.r
        )));
    }
    let bound = (c.r - beta).min((1.0 - c.lambda) / c.lambda * beta);
    Ok(bound * 0.99)
}

/// The default `tau` for [`find_periodic`]: `min{eps / 4, c / 8}`.
pub fn default_tau<M: ExpandingMap>(map: &M) -> f64 {
    let c = map.constants();
    (c.expansivity_eps / 4.0).min(c.c / 8.0)
}

/// A finite sequence with `d(f(x_i), x_{i+1}) < alpha` for every `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoOrbit<P> {
    points: Vec<P>,
    alpha: f64,
}

impl<P: Clone> PseudoOrbit<P> {
    pub fn new<M: ExpandingMap<Point = P>>(map: &M, points: Vec<P>, alpha: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("pseudo-orbit needs at least one point".into()));
        }
        if !(alpha > 0.0) {
            return Err(Error::Precondition(format!("alpha = {alpha} must be positive")));
        }
        for (i, w) in points.windows(2).enumerate() {
            let jump = map.distance(&map.apply(&w[0]), &w[1]);
            if jump >= alpha {
                return Err(Error::Precondition(format!(
                    "jump {jump} at step {i} is not below alpha = {alpha}"
                )));
            }
        }
        Ok(Self { points, alpha })
    }

    /// The pseudo-orbit with `alpha` just above its largest jump.
    pub fn measured<M: ExpandingMap<Point = P>>(map: &M, points: Vec<P>) -> Result<Self> {
        let jump = points
            .windows(2)
            .map(|w| map.distance(&map.apply(&w[0]), &w[1]))
            .fold(0.0f64, f64::max);
        let alpha = if jump == 0.0 {
            f64::MIN_POSITIVE
        } else {
            jump * (1.0 + 1e-12)
        };
        Self::new(map, points, alpha)
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A true orbit starting at `shadow` with `errors[i] = d(f^i(shadow), x_i) < beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowCertificate<P> {
    pub shadow: P,
    pub beta: f64,
    pub errors: Vec<f64>,
}

impl<P> ShadowCertificate<P> {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Re-runs the forward orbit of the certificate's point against the pseudo-orbit.
pub fn verify_certificate<M: ExpandingMap>(
    map: &M,
    po: &PseudoOrbit<M::Point>,
    cert: &ShadowCertificate<M::Point>,
) -> bool {
    if cert.errors.len() != po.len() {
        return false;
    }
    let mut z = cert.shadow.clone();
    for (i, x) in po.points().iter().enumerate() {
        if i > 0 {
            z = map.apply(&z);
        }
        let e = map.distance(&z, x);
        if !(e < cert.beta) || e != cert.errors[i] {
            return false;
        }
    }
    true
}

/// The branch of `f^-1` at `f(x)` that sends `f(x)` back to `x`, chosen as the
/// preimage nearest `x` and refused if that is farther than `c / 2`.
fn branch_through<M: ExpandingMap>(map: &M, x: &M::Point) -> Result<(M::Point, M::Point)> {
    let fx = map.apply(x);
    let pre = map.preimages(&fx);
    let (best, dist) = pre
        .into_iter()
        .map(|a| {
            let d = map.distance(&a, x);
            (a, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Shadow("point has no preimages".into()))?;
    let half_c = map.constants().c / 2.0;
    if dist > half_c {
        return Err(Error::Shadow(format!(
            "nearest preimage is {dist} away, beyond c/2 = {half_c}"
        )));
    }
    Ok((fx, best))
}

/// Backward induction `y_n = terminal`, `y_{k-1} = g_k(y_k)`; returns `y_0`'s certificate.
pub fn shadow_finite_from<M: ExpandingMap>(
    map: &M,
    po: &PseudoOrbit<M::Point>,
    beta: f64,
    terminal: M::Point,
) -> Result<ShadowCertificate<M::Point>> {
    let alpha_max = max_alpha_for_beta(map, beta)?;
    if po.alpha() > alpha_max {
        return Err(Error::Precondition(format!(
            "alpha = {} exceeds the shadowing bound {alpha_max} for beta = {beta}",
            po.alpha()
        )));
    }
    let pts = po.points();
    let n = pts.len() - 1;
    if map.distance(&terminal, &pts[n]) >= beta {
        return Err(Error::Precondition("terminal point is not within beta of x_n".into()));
    }
    let step_bound = map.constants().lambda * (po.alpha() + beta);
    let mut y = terminal;
    for k in (1..=n).rev() {
        let (anchor, image) = branch_through(map, &pts[k - 1])?;
        y = map.lift(&anchor, &image, &y)?;
        let e = map.distance(&y, &pts[k - 1]);
        if e > step_bound * (1.0 + 1e-12) {
            return Err(Error::Shadow(format!(
                "step {} error {e} exceeds lambda (alpha + beta) = {step_bound}",
                k - 1
            )));
        }
    }
    let mut errors = Vec::with_capacity(n + 1);
    let mut z = y.clone();
    for (i, x) in pts.iter().enumerate() {
        if i > 0 {
            z = map.apply(&z);
        }
        let e = map.distance(&z, x);
        if !(e < beta) {
            return Err(Error::Verification(format!(
                "forward error {e} at step {i} is not below beta = {beta}"
            )));
        }
        errors.push(e);
    }
    Ok(ShadowCertificate {
        shadow: y,
        beta,
        errors,
    })
}

/// Shadows `po` within `beta`, starting the backward pass at `x_n`.
pub fn shadow_finite<M: ExpandingMap>(
    map: &M,
    po: &PseudoOrbit<M::Point>,
    beta: f64,
) -> Result<ShadowCertificate<M::Point>> {
    let terminal = po.points().last().unwrap().clone();
    shadow_finite_from(map, po, beta, terminal)
}

/// Bits of agreement targeted when shadowing a periodic pseudo-orbit.
const RESOLUTION_BITS: f64 = 64.0;

/// The periodic point `z = f^p(z)` shadowing the orbit of `x` within `tau`.
pub fn find_periodic<M: ExpandingMap>(map: &M, x: &M::Point, p: usize, tau: f64) -> Result<M::Point> {
    if p == 0 {
        return Err(Error::Precondition("period must be >= 1".into()));
    }
    let c = map.constants();
    if !(tau < c.expansivity_eps / 2.0) {
        return Err(Error::Precondition(format!(
            "tau = {tau} must be below eps / 2 = {}",
            c.expansivity_eps / 2.0
        )));
    }
    let alpha = max_alpha_for_beta(map, tau)?;
    let orbit = map.orbit(x, p);
    let gap = map.distance(&orbit[p], x);
    if !(gap < alpha) {
        return Err(Error::Precondition(format!(
            "d(f^{p}(x), x) = {gap} is not below alpha = {alpha} for tau = {tau}"
        )));
    }
    let reps = ((RESOLUTION_BITS * std::f64::consts::LN_2) / (p as f64 * -c.lambda.ln())).ceil() as usize;
    let reps = reps.max(1);
    let points: Vec<M::Point> = (0..=reps * p).map(|i| orbit[i % p].clone()).collect();
    let po = PseudoOrbit::new(map, points, alpha)?;
    let cert = shadow_finite(map, &po, tau)?;

    // The composed branch of f^-p through the seed's orbit; its fixed point is z.
    let chain: Vec<_> = (1..=p)
        .rev()
        .map(|j| (orbit[j].clone(), orbit[j - 1].clone()))
        .collect();
    let g = InverseBranch { chain };
    let z = map
        .branch_fixed_point(&g)
        .ok_or_else(|| Error::Verification("composed branch has no fixed point in its domain".into()))?;
    if map.iterate(&z, p) != z {
        return Err(Error::Verification("f^p(z) != z".into()));
    }
    let drift = map.distance(&z, &cert.shadow);
    let allowed = 2.0 * tau * c.lambda.powi((reps * p) as i32) + f64::MIN_POSITIVE;
    if drift > allowed {
        return Err(Error::Verification(format!(
            "periodic point is {drift} from the finite shadow, beyond {allowed}"
        )));
    }
    let zo = map.orbit(&z, p);
    for (j, zj) in zo.iter().enumerate() {
        let e = map.distance(&orbit[j % p], zj);
        if !(e < tau) {
            return Err(Error::Verification(format!(
                "periodic orbit leaves the tau-tube at step {j}: {e}"
            )));
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use crate::expmap::{make_circle_map, ShiftMap, ShiftPoint};
    use crate::sft::SubshiftOfFiniteType;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn alpha_bounds() {
        let m = make_circle_map(2).unwrap();
        assert!((max_alpha_for_beta(&m, 0.1).unwrap() - 0.099).abs() < 1e-9);
        assert!(max_alpha_for_beta(&m, 1e-9).unwrap() < 1e-8);
        assert!(max_alpha_for_beta(&m, 0.3).is_err());
        let s = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        assert!((max_alpha_for_beta(&s, 0.5).unwrap() - 0.495).abs() < 1e-12);
    }

    #[test]
    fn true_orbit_shadows_itself() {
        let m = make_circle_map(2).unwrap();
        let pts = m.orbit(&q(1, 7), 20);
        let po = PseudoOrbit::measured(&m, pts.clone()).unwrap();
        let cert = shadow_finite(&m, &po, 0.01).unwrap();
        assert_eq!(cert.shadow, q(1, 7));
        assert!(cert.errors.iter().all(|&e| e == 0.0));
        assert!(verify_certificate(&m, &po, &cert));
    }

    #[test]
    fn constant_pseudo_orbit_tracks_fixed_point() {
        let m = make_circle_map(2).unwrap();
        let x = m.point(0.01);
        let po = PseudoOrbit::new(&m, vec![x; 40], 0.0100001).unwrap();
        let beta = 0.05;
        let cert = shadow_finite(&m, &po, beta).unwrap();
        assert!(m.distance(&cert.shadow, &q(0, 1)) < 1e-10);
        // The backward pass gives d(y_i, x_i) <= lambda^(n-i) (alpha + beta) plus a constant pull.
        assert!(cert.errors.iter().all(|&e| e < beta));
        assert!(verify_certificate(&m, &po, &cert));
    }

    #[test]
    fn shadows_are_unique() {
        let m = make_circle_map(2).unwrap();
        let beta = 0.02;
        let mut pts = vec![m.point(0.37)];
        for i in 1..60 {
            let kick = q(if i % 2 == 0 { 1 } else { -1 }, 1000);
            let next = m.apply(&pts[i - 1]) + kick;
            pts.push(&next - next.floor());
        }
        let po = PseudoOrbit::new(&m, pts, 0.0011).unwrap();
        let a = shadow_finite(&m, &po, beta).unwrap();
        let other = m.ratio(0, 1) + po.points().last().unwrap() + q(1, 100);
        let other = &other - other.floor();
        let b = shadow_finite_from(&m, &po, beta, other).unwrap();
        assert!(m.distance(&a.shadow, &b.shadow) < 2.0 * beta);
        assert!(m.distance(&a.shadow, &b.shadow) < 1e-15);
    }

    #[test]
    fn rejects_alpha_too_large() {
        let m = make_circle_map(2).unwrap();
        let po = PseudoOrbit::measured(&m, vec![q(0, 1), q(1, 10)]).unwrap();
        assert!(matches!(shadow_finite(&m, &po, 0.01), Err(Error::Precondition(_))));
    }

    #[test]
    fn periodic_points_from_seeds() {
        let m = make_circle_map(2).unwrap();
        assert_eq!(find_periodic(&m, &q(1, 3), 2, 0.01).unwrap(), q(1, 3));
        assert_eq!(find_periodic(&m, &m.point(0.3333), 2, 0.01).unwrap(), q(1, 3));
        let m3 = make_circle_map(3).unwrap();
        assert_eq!(find_periodic(&m3, &m3.point(0.130), 2, 0.03).unwrap(), q(1, 8));
        // At tau = 0.02 the seed is too far from periodic for the shadowing bound.
        assert!(matches!(
            find_periodic(&m3, &m3.point(0.130), 2, 0.02),
            Err(Error::Precondition(_))
        ));
        let z = find_periodic(&m, &m.point(0.1431), 3, default_tau(&m)).unwrap();
        assert_eq!(z, q(1, 7));
        assert_eq!(find_periodic(&m, &z, 3, default_tau(&m)).unwrap(), z);
    }

    #[test]
    fn periodic_points_on_the_shift() {
        let s = ShiftMap::new(SubshiftOfFiniteType::full(2)).unwrap();
        let x = ShiftPoint::new(vec![0, 1, 0, 1, 0, 1, 1, 1], vec![0]);
        let z = find_periodic(&s, &x, 2, 0.1).unwrap();
        assert_eq!(z, ShiftPoint::periodic(vec![0, 1]));
    }
}
