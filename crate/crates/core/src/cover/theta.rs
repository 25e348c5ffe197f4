use num_bigint::BigInt;

use crate::exactmat::SignedIntMatrix;
use crate::expmap::ExpandingMap;
use crate::shadow::{max_alpha_for_beta, shadow_finite, PseudoOrbit};
use crate::{Error, Result};

/// Points `p_1..p_k` with `A_ij = 1` iff `d(f(p_i), p_j) < alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseCoding<P> {
    pub points: Vec<P>,
    pub transition: SignedIntMatrix,
    pub alpha: f64,
    pub beta: f64,
}

pub fn dense_coding<M: ExpandingMap>(map: &M, points: Vec<M::Point>, beta: f64) -> Result<DenseCoding<M::Point>> {
    if points.is_empty() {
        return Err(Error::Precondition("dense point set is empty".into()));
    }
    let alpha = max_alpha_for_beta(map, beta)?;
    let n = points.len();
    let images: Vec<_> = points.iter().map(|p| map.apply(p)).collect();
    let mut entries = Vec::with_capacity(n * n);
    for fp in &images {
        for q in &points {
            entries.push(BigInt::from((map.distance(fp, q) < alpha) as i32));
        }
    }
    Ok(DenseCoding {
        points,
        transition: SignedIntMatrix::new(n, entries)?,
        alpha,
        beta,
    })
}

/// The beta-shadow of the pseudo-orbit `p_{a_0}, p_{a_1}, ...`.
pub fn theta_code<M: ExpandingMap>(map: &M, coding: &DenseCoding<M::Point>, word: &[usize]) -> Result<M::Point> {
    if word.is_empty() {
        return Err(Error::Precondition("empty symbol word".into()));
    }
    let n = coding.points.len();
    if let Some(&s) = word.iter().find(|&&s| s >= n) {
        return Err(Error::SymbolOutOfRange { symbol: s, alphabet: n });
    }
    if let Some(w) = word.windows(2).find(|w| !coding.transition.has_edge(w[0], w[1])) {
        return Err(Error::Inadmissible(format!("transition {} -> {} is not allowed", w[0], w[1])));
    }
    let points = word.iter().map(|&s| coding.points[s].clone()).collect();
    let po = PseudoOrbit::new(map, points, coding.alpha)?;
    Ok(shadow_finite(map, &po, coding.beta)?.shadow)
}
