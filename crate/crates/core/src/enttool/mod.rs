//! Entropy from separated and spanning sets, cover refinements, and the
//! comparison of entropy with the growth rate of periodic points.

mod grid;

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cover::{Arc, CoverGeometry};
use crate::expmap::{preimage_separation_bound, CircleMap, ExpandingMap, ShiftMap, ShiftPoint, ToralMap};
use crate::zetafn::CountSequence;
use crate::{Error, Result};

pub use grid::GRID_GUARD;
use grid::{Circle, Grid, LinearModel, Torus};

/// Lower and upper bounds for `s_n(eps)`, with the separated set that gives the lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedSetResult<P> {
    pub n: usize,
    pub eps: BigRational,
    pub witness: Vec<P>,
    pub lower_s_n: BigInt,
    pub upper_s_n: BigInt,
    /// Points per axis of the candidate grid, when one was used.
    pub grid: Option<u64>,
}

impl<P> SeparatedSetResult<P> {
    pub fn is_exact(&self) -> bool {
        self.lower_s_n == self.upper_s_n
    }
}

pub trait SeparatedSets: ExpandingMap {
    /// Grid size per axis used when none is given.
    fn default_grid(&self, n: usize, eps: &BigRational) -> Result<Option<u64>>;

    /// Bounds on `s_n(eps)`; the witness is materialised and re-checked only when asked.
    fn separated_bounds(
        &self,
        n: usize,
        eps: &BigRational,
        grid: Option<u64>,
        keep_witness: bool,
    ) -> Result<SeparatedSetResult<Self::Point>>;

    /// Whether `separated_bounds` can return `lower = upper`.
    fn has_exact_counts(&self) -> bool {
        false
    }
}

fn check_args(n: usize, eps: &BigRational) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Smallest power of two `N` with `1/N <= bound`.
fn pow2_at_least(bound: &BigRational) -> u64 {
    let mut n = 1u64;
    while BigRational::new(1.into(), n.into()) > *bound && n < 1 << 40 {
        n *= 2;
    }
    n
}

/// Grid spacing `1/N` needed so the spanning radius `eps/2 - L^(n-1)/(2N)` stays >= `eps/4`,
/// and also `1/N <= eps/8` (and `<= 2^-12` for the circle).
fn linear_default_grid(lip: u64, n: usize, eps: &BigRational, floor_res: Option<BigRational>) -> u64 {
    let ln = num_traits::pow(BigInt::from(lip), n - 1);
    let a = eps / BigRational::from_integer(BigInt::from(8));
    let b = eps / BigRational::from_integer(ln * 2);
    let mut bound = if a < b { a } else { b };
    if let Some(f) = floor_res {
        if f < bound {
            bound = f;
        }
    }
    pow2_at_least(&bound)
}

fn linear_bounds<L: LinearModel, P>(
    model: &L,
    lip: u64,
    n: usize,
    eps: &BigRational,
    modulus: u64,
    keep: bool,
    to_point: impl Fn([i64; 2]) -> P,
) -> Result<SeparatedSetResult<P>> {
    let nq = BigRational::from_integer(modulus.into());
    if BigRational::one() / &nq >= eps / BigRational::from_integer(4.into()) {
        return Err(Error::Grid(format!(
            "grid spacing 1/{modulus} is not below eps/4 = {}",
            eps / BigRational::from_integer(4.into())
        )));
    }
    let sep = (eps * &nq).floor().to_integer();
    // every point is within 1/(2N) of the grid, so d_n to the grid is at most L^(n-1)/(2N)
    let ln = num_traits::pow(BigInt::from(lip), n - 1);
    let span_q = eps * &nq / BigRational::from_integer(2.into()) - BigRational::new(ln, 2.into());
    if span_q.is_negative() {
        return Err(Error::Grid(format!(
            "grid 1/{modulus} too coarse for a spanning bound at n = {n}"
        )));
    }
    let span = span_q.floor().to_integer();
    let (sep, span) = match (sep.to_i64(), span.to_i64()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Grid("radius overflow".into())),
    };
    let grid = Grid::new(model, modulus)?;
    let (chosen, centers) = grid.greedy(n, sep, span);
    if chosen.len() > centers {
        return Err(Error::Verification(format!(
            "separated set of size {} exceeds spanning set of size {centers}",
            chosen.len()
        )));
    }
    let witness = if keep {
        if !grid.check_separated(&chosen, n, sep) {
            return Err(Error::Verification("greedy set is not (n, eps)-separated".into()));
        }
        chosen.iter().map(|&i| to_point(grid.coords(i))).collect()
    } else {
        Vec::new()
    };
    Ok(SeparatedSetResult {
        n,
        eps: eps.clone(),
        witness,
        lower_s_n: chosen.len().into(),
        upper_s_n: centers.into(),
        grid: Some(modulus),
    })
}

impl SeparatedSets for CircleMap {
    fn default_grid(&self, n: usize, eps: &BigRational) -> Result<Option<u64>> {
        check_args(n, eps)?;
        let floor = BigRational::new(1.into(), 4096.into());
        Ok(Some(linear_default_grid(self.k() as u64, n, eps, Some(floor))))
    }

    fn separated_bounds(
        &self,
        n: usize,
        eps: &BigRational,
        grid: Option<u64>,
        keep_witness: bool,
    ) -> Result<SeparatedSetResult<BigRational>> {
        check_args(n, eps)?;
        let modulus = match grid {
            Some(g) => g,
            None => self.default_grid(n, eps)?.unwrap(),
        };
        let model = Circle(self.k() as i64);
        linear_bounds(&model, self.k() as u64, n, eps, modulus, keep_witness, |v| {
            BigRational::new(v[0].into(), modulus.into())
        })
    }
}

impl SeparatedSets for ToralMap {
    fn default_grid(&self, n: usize, eps: &BigRational) -> Result<Option<u64>> {
        check_args(n, eps)?;
        Ok(Some(linear_default_grid(self.int_lipschitz(), n, eps, None)))
    }

    fn separated_bounds(
        &self,
        n: usize,
        eps: &BigRational,
        grid: Option<u64>,
        keep_witness: bool,
    ) -> Result<SeparatedSetResult<[BigRational; 2]>> {
        check_args(n, eps)?;
        let modulus = match grid {
            Some(g) => g,
            None => self.default_grid(n, eps)?.unwrap(),
        };
        let model = Torus(self.int_entries());
        linear_bounds(&model, self.int_lipschitz(), n, eps, modulus, keep_witness, |v| {
            [
                BigRational::new(v[0].into(), modulus.into()),
                BigRational::new(v[1].into(), modulus.into()),
            ]
        })
    }
}

impl ToralMap {
    fn int_lipschitz(&self) -> u64 {
        let m = self.int_entries();
        m.iter()
            .map(|r| r[0].unsigned_abs() + r[1].unsigned_abs())
            .max()
            .unwrap()
    }
}

/// `(j_up, j_lo)`: smallest `j` with `2^-j <= eps` and largest `j` with `2^-j >= eps`.
fn dyadic_bracket(eps: &BigRational) -> (i64, i64) {
    let two = BigRational::from_integer(2.into());
    let mut j = 0i64;
    let mut p = BigRational::one();
    while &p > eps {
        p /= &two;
        j += 1;
    }
    let lo = if &p == eps { j } else { j - 1 };
    (j, lo)
}

impl SeparatedSets for ShiftMap {
    fn default_grid(&self, n: usize, eps: &BigRational) -> Result<Option<u64>> {
        check_args(n, eps)?;
        Ok(None)
    }

    /// Two points agreeing on `n + j` symbols have `d_n <= 2^-j`, so `s_n <= W_{n+j}`
    /// (admissible words). Distinct points of period `n + j` differ again one period
    /// later, so they are `(n, 2^-j)`-separated and `s_n >= N_{n+j}`.
    fn separated_bounds(
        &self,
        n: usize,
        eps: &BigRational,
        _grid: Option<u64>,
        keep_witness: bool,
    ) -> Result<SeparatedSetResult<ShiftPoint>> {
        check_args(n, eps)?;
        let sft = self.sft();
        if eps >= &BigRational::from_integer(2.into()) {
            let witness = if keep_witness {
                vec![self.extend_word(&[0]).or_else(|_| self.extend_word(&[sft.alphabet_size() - 1]))?]
            } else {
                Vec::new()
            };
            return Ok(SeparatedSetResult {
                n,
                eps: eps.clone(),
                witness,
                lower_s_n: BigInt::one(),
                upper_s_n: BigInt::one(),
                grid: None,
            });
        }
        let (j_up, j_lo) = dyadic_bracket(eps);
        let upper = sft.word_count(n + j_up as usize);
        let (lower, witness) = if j_lo < 0 {
            (BigInt::one(), Vec::new())
        } else {
            let len = n + j_lo as usize;
            let count = sft.count_periodic_trace(len as u64)?;
            let witness = if keep_witness {
                let words = sft.closed_words(len)?;
                let pts: Vec<ShiftPoint> = words.into_iter().map(ShiftPoint::periodic).collect();
                if !is_separated(self, &pts, n, eps) {
                    return Err(Error::Verification("periodic witness is not separated".into()));
                }
                pts
            } else {
                Vec::new()
            };
            (count.max(BigInt::one()), witness)
        };
        Ok(SeparatedSetResult {
            n,
            eps: eps.clone(),
            witness,
            lower_s_n: lower,
            upper_s_n: upper,
            grid: None,
        })
    }

    fn has_exact_counts(&self) -> bool {
        true
    }
}

/// Pairwise check `d_n(x, y) > eps` by explicit iteration.
pub fn is_separated<M: ExpandingMap>(map: &M, points: &[M::Point], n: usize, eps: &BigRational) -> bool {
    let orbits: Vec<_> = points.iter().map(|p| map.orbit(p, n.saturating_sub(1))).collect();
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            let close = orbits[i]
                .iter()
                .zip(&orbits[j])
                .all(|(a, b)| &map.distance_exact(a, b) <= eps);
            if close {
                return false;
            }
        }
    }
    true
}

/// Greedy separated set with its spanning-derived upper bound; the witness is re-checked.
pub fn greedy_separated<M: SeparatedSets>(
    map: &M,
    n: usize,
    eps: &BigRational,
    grid: Option<u64>,
) -> Result<SeparatedSetResult<M::Point>> {
    map.separated_bounds(n, eps, grid, true)
}

/// `ln` of a positive integer without overflowing `f64`.
pub fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Least-squares slope through the last `ceil(m/2)` points.
pub fn tail_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len();
    if m == 0 {
        return f64::NAN;
    }
    let tail = &points[m - m.div_ceil(2)..];
    if tail.len() == 1 {
        let (x, y) = tail[0];
        return y / x;
    }
    let k = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / k;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRow {
    pub n: usize,
    pub eps: BigRational,
    pub lower_s_n: BigInt,
    pub upper_s_n: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    /// Slope of `log lower_s_n` at the smallest eps.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub eps: BigRational,
    pub rows: Vec<EntropyRow>,
}

impl EntropyEstimate {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    /// Rows at the smallest eps.
    pub fn finest_rows(&self) -> impl Iterator<Item = &EntropyRow> {
        self.rows.iter().filter(move |r| r.eps == self.eps)
    }
}

pub fn entropy_estimate<M: SeparatedSets>(
    map: &M,
    n_ladder: &[usize],
    eps_ladder: &[BigRational],
) -> Result<EntropyEstimate> {
    if n_ladder.is_empty() || eps_ladder.is_empty() {
        return Err(Error::Precondition("ladders must be nonempty".into()));
    }
    if eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("eps ladder must be strictly decreasing".into()));
    }
    if n_ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("n ladder must be strictly increasing".into()));
    }
    let mut rows = Vec::new();
    for eps in eps_ladder {
        for &n in n_ladder {
            let r = map.separated_bounds(n, eps, None, false)?;
            rows.push(EntropyRow {
                n,
                eps: eps.clone(),
                lower_s_n: r.lower_s_n,
                upper_s_n: r.upper_s_n,
            });
        }
    }
    let eps = eps_ladder.last().unwrap().clone();
    let fine: Vec<&EntropyRow> = rows.iter().filter(|r| r.eps == eps).collect();
    let lo: Vec<(f64, f64)> = fine.iter().map(|r| (r.n as f64, big_ln(&r.lower_s_n))).collect();
    let hi: Vec<(f64, f64)> = fine.iter().map(|r| (r.n as f64, big_ln(&r.upper_s_n))).collect();
    let a = tail_slope(&lo);
    let b = tail_slope(&hi);
    Ok(EntropyEstimate {
        value: a,
        lower: a.min(b),
        upper: a.max(b),
        eps,
        rows,
    })
}

/// `log` of the largest preimage count seen over `samples`.
pub fn preimage_entropy_bound<M: ExpandingMap>(map: &M, samples: &[M::Point]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Precondition("no sample points".into()));
    }
    let (count, _) = preimage_separation_bound(map, samples);
    Ok((count as f64).ln())
}

type Piece = (BigRational, BigRational);

fn open_pieces(a: &Arc) -> Vec<Piece> {
    let one = BigRational::one();
    let hi = a.hi();
    if hi <= one {
        vec![(a.lo().clone(), hi)]
    } else {
        vec![(a.lo().clone(), one.clone()), (BigRational::zero(), hi - one)]
    }
}

fn intersect(a: &[Piece], b: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::new();
    for (p, q) in a {
        for (r, s) in b {
            let lo = if p > r { p } else { r };
            let hi = if q < s { q } else { s };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
        }
    }
    out
}

/// Largest number of refinement cells `cover_count` will hold.
pub const CELL_GUARD: usize = 1 << 20;

/// Nonempty cells of `P ∨ f^-1 P ∨ ... ∨ f^-(n-1) P` for a partition `P` into arcs.
pub fn cover_count(map: &CircleMap, partition: &[Arc], n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    if partition.is_empty() || !map.covers(partition) {
        return Err(Error::InvalidCover("arcs do not cover the circle".into()));
    }
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            if map.interiors_meet(&partition[i], &partition[j]) {
                return Err(Error::InvalidCover(format!(
                    "arcs {} and {} overlap, so they are not a partition",
                    partition[i], partition[j]
                )));
            }
        }
    }
    let base: Vec<Vec<Piece>> = partition.iter().map(open_pieces).collect();
    let k = BigRational::from_integer(map.k().into());
    let mut cells = base.clone();
    for _ in 1..n {
        let mut next = Vec::new();
        for c in &cells {
            let pre: Vec<Piece> = (0..map.k())
                .flat_map(|j| {
                    let t = BigRational::from_integer(j.into());
                    c.iter().map(move |(a, b)| ((a + &t), (b + &t)))
                })
                .map(|(a, b)| (a / &k, b / &k))
                .collect();
            for p in &base {
                let cell = intersect(p, &pre);
                if !cell.is_empty() {
                    next.push(cell);
                }
            }
            if next.len() > CELL_GUARD {
                return Err(Error::GuardExceeded(format!("more than {CELL_GUARD} refinement cells")));
            }
        }
        cells = next;
    }
    Ok(cells.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Row {
    pub n: usize,
    pub count: BigInt,
    pub lower_s_n: Option<BigInt>,
    pub upper_s_n: Option<BigInt>,
    pub log_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Report {
    pub periodic_slope: f64,
    pub entropy_lower: f64,
    pub entropy_upper: f64,
    pub tolerance: f64,
    pub overlap: bool,
    pub sandwich_constant: f64,
    pub sandwich: bool,
    /// `s_{a+b}(1) <= s_a(1/2) s_b(1/2)` for `a, b <= 5`, where `s_n` is known exactly.
    pub submultiplicative: Option<bool>,
    pub rows: Vec<Theorem2Row>,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.overlap && self.sandwich && self.submultiplicative != Some(false)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,N_n,lower_s_n,upper_s_n,log_slope\n");
        let opt = |x: &Option<BigInt>| x.as_ref().map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{}",
                r.n,
                r.count,
                opt(&r.lower_s_n),
                opt(&r.upper_s_n),
                r.log_slope.map(|v| format!("{v:.6}")).unwrap_or_default()
            )
            .unwrap();
        }
        s
    }
}

/// Relative tolerance for comparing periodic growth with the entropy interval.
pub const OVERLAP_TOL: f64 = 0.05;

pub fn verify_theorem2<M: SeparatedSets>(
    map: &M,
    counts: &CountSequence,
    estimate: &EntropyEstimate,
) -> Result<Theorem2Report> {
    let m = counts.order();
    let pts: Vec<(f64, f64)> = (1..=m)
        .filter(|&n| counts.get(n).is_positive())
        .map(|n| (n as f64, big_ln(counts.get(n))))
        .collect();
    let periodic_slope = if pts.is_empty() { 0.0 } else { tail_slope(&pts) };
    let tolerance = OVERLAP_TOL * periodic_slope.abs() + 1e-9;
    let overlap = estimate.contains(periodic_slope, tolerance);

    let fine: Vec<&EntropyRow> = estimate.finest_rows().collect();
    let rows: Vec<Theorem2Row> = (1..=m)
        .map(|n| {
            let row = fine.iter().find(|r| r.n == n);
            let log_slope = (n > 1 && counts.get(n).is_positive() && counts.get(n - 1).is_positive())
                .then(|| big_ln(counts.get(n)) - big_ln(counts.get(n - 1)));
            Theorem2Row {
                n,
                count: counts.get(n).clone(),
                lower_s_n: row.map(|r| r.lower_s_n.clone()),
                upper_s_n: row.map(|r| r.upper_s_n.clone()),
                log_slope,
            }
        })
        .collect();

    // N_n >= C lower_s_n: C fitted on the first half of the tail, allowed to drop by 2 after.
    let ratios: Vec<f64> = fine
        .iter()
        .filter(|r| r.n <= m)
        .map(|r| {
            let c = counts.get(r.n);
            if c.is_positive() {
                (big_ln(c) - big_ln(&r.lower_s_n)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let tail = &ratios[ratios.len() - ratios.len().div_ceil(2)..];
    let (fit, rest) = tail.split_at(tail.len().div_ceil(2));
    let sandwich_constant = fit.iter().cloned().fold(f64::INFINITY, f64::min);
    let sandwich = !tail.is_empty()
        && sandwich_constant > 0.0
        && rest.iter().all(|&r| r >= sandwich_constant / 2.0);

    let submultiplicative = if map.has_exact_counts() {
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        let mut ok = true;
        for a in 1..=5 {
            for b in 1..=5 {
                let lhs = map.separated_bounds(a + b, &one, None, false)?;
                let sa = map.separated_bounds(a, &half, None, false)?;
                let sb = map.separated_bounds(b, &half, None, false)?;
                // certified: an upper bound on the left against lower bounds on the right
                ok &= lhs.upper_s_n <= &sa.lower_s_n * &sb.lower_s_n;
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(Theorem2Report {
        periodic_slope,
        entropy_lower: estimate.lower,
        entropy_upper: estimate.upper,
        tolerance,
        overlap,
        sandwich_constant,
        sandwich,
        submultiplicative,
        rows,
    })
}
