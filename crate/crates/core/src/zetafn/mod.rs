//! Zeta functions as exact rational functions and power series.

pub mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{char_poly_det, IntPolynomial, SignedIntMatrix};
use crate::{Error, Result};

/// `numerator / denominator`, kept reduced with a positive denominator constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: IntPolynomial,
    denominator: IntPolynomial,
}

impl RationalFunction {
    /// Builds and reduces `num / den`. Fails when the reduced denominator vanishes at 0.
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotAZetaFunction("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self {
                numerator: IntPolynomial::zero(),
                denominator: IntPolynomial::one(),
            });
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let mut d = den.div_exact(&g).expect("gcd divides denominator");
        let c = n.content().gcd(&d.content());
        n = n.div_scalar_exact(&c);
        d = d.div_scalar_exact(&c);
        let d0 = d.constant_term();
        if d0.is_zero() {
            return Err(Error::NotAZetaFunction(
                "denominator vanishes at z = 0".into(),
            ));
        }
        if d0.is_negative() {
            n = -&n;
            d = -&d;
        }
        Ok(Self {
            numerator: n,
            denominator: d,
        })
    }

    pub fn one() -> Self {
        Self {
            numerator: IntPolynomial::one(),
            denominator: IntPolynomial::one(),
        }
    }

    /// `1 / p`
    pub fn reciprocal_of(p: IntPolynomial) -> Result<Self> {
        Self::new(IntPolynomial::one(), p)
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.denominator
    }

    pub fn value_at_zero(&self) -> BigRational {
        BigRational::new(
            self.numerator.constant_term(),
            self.denominator.constant_term(),
        )
    }

    pub fn is_constant(&self) -> bool {
        self.numerator.is_constant() && self.denominator.is_constant()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Self::new(
            &self.numerator * &rhs.numerator,
            &self.denominator * &rhs.denominator,
        )
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.numerator.eval_complex(z) / self.denominator.eval_complex(z)
    }

    /// Exact power series to order `m` (coefficients `c_0..c_m`).
    pub fn series(&self, m: usize) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: series_div(&self.numerator, &self.denominator, m),
        }
    }

    /// `num: c0 c1 ... / den: c0 c1 ...`
    pub fn to_text(&self) -> String {
        format!(
            "num: {} / den: {}",
            self.numerator.to_ascending_string(),
            self.denominator.to_ascending_string()
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected \"num: ... / den: ...\", got {text:?}"));
        let (num, den) = text.split_once('/').ok_or_else(bad)?;
        let num = num.trim().strip_prefix("num:").ok_or_else(bad)?;
        let den = den.trim().strip_prefix("den:").ok_or_else(bad)?;
        Self::new(
            IntPolynomial::parse_ascending(num)?,
            IntPolynomial::parse_ascending(den)?,
        )
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &IntPolynomial| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.denominator == IntPolynomial::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
        }
    }
}

/// Exact truncated power series `c_0 + c_1 z + ... + c_m z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn from_integers(c: &[i64]) -> Self {
        Self {
            coeffs: c.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }
}

/// Periodic-point counts `N_1..N_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountSequence {
    counts: Vec<BigInt>,
}

impl CountSequence {
    pub fn new(counts: Vec<BigInt>) -> Result<Self> {
        if let Some((i, c)) = counts.iter().enumerate().find(|(_, c)| c.is_negative()) {
            return Err(Error::NotAZetaFunction(format!("N_{} = {c} is negative", i + 1)));
        }
        Ok(Self { counts })
    }

    pub fn from_u64(c: &[u64]) -> Self {
        Self {
            counts: c.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// `N_n` for `n` in `1..=order`.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.counts[n - 1]
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn truncate(&self, m: usize) -> Self {
        Self {
            counts: self.counts[..m.min(self.counts.len())].to_vec(),
        }
    }

    /// `n,N_n` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,N_n\n");
        for (i, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{},{c}\n", i + 1));
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut counts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('n') || line.starts_with('#') {
                continue;
            }
            let (n, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected n,N_n", lineno + 1)))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if n != counts.len() + 1 {
                return Err(Error::Parse(format!(
                    "line {}: expected n = {}, got {n}",
                    lineno + 1,
                    counts.len() + 1
                )));
            }
            counts.push(
                v.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
            );
        }
        Self::new(counts)
    }
}

fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Coefficients `c_0..c_m` of `a / b` as a power series; needs `b(0) != 0`.
fn series_div(a: &IntPolynomial, b: &IntPolynomial, m: usize) -> Vec<BigRational> {
    let b0 = q(&b.constant_term());
    assert!(!b0.is_zero(), "series division needs b(0) != 0");
    let mut c: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut acc = q(&a.coeff(n));
        for k in 1..=n.min(b.degree().unwrap_or(0)) {
            acc -= q(&b.coeff(k)) * &c[n - k];
        }
        c.push(acc / &b0);
    }
    c
}

/// Series of `z p'(z) / p(z)` to order `m`, as rationals.
fn log_derivative(p: &IntPolynomial, m: usize) -> Vec<BigRational> {
    let zp = IntPolynomial::new(
        std::iter::once(BigInt::zero())
            .chain(p.derivative().coeffs().iter().cloned())
            .collect(),
    );
    series_div(&zp, p, m)
}

/// Truncated `exp(sum N_n z^n / n)` to order `m`.
pub fn zeta_series_from_counts(n: &CountSequence) -> Result<TruncatedSeries> {
    let m = n.order();
    if m == 0 {
        return Err(Error::Precondition("count sequence must have order >= 1".into()));
    }
    // S' = L' S  =>  k s_k = sum_{j=1..k} N_j s_{k-j}
    let mut s = vec![BigRational::one()];
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += q(n.get(j)) * &s[k - j];
        }
        s.push(acc / BigRational::from_integer(k.into()));
    }
    Ok(TruncatedSeries { coeffs: s })
}

/// `1 / det(I - zA)`
pub fn zeta_from_sft(a: &SignedIntMatrix) -> Result<RationalFunction> {
    RationalFunction::reciprocal_of(char_poly_det(a))
}

/// `prod_{r even} det(I - z B_r) / prod_{r odd} det(I - z B_r)`, with `b[0]` as `B_1`.
pub fn zeta_from_signed_family(b: &[SignedIntMatrix]) -> Result<RationalFunction> {
    if b.is_empty() {
        return Err(Error::Precondition("signed family must be nonempty".into()));
    }
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for (i, m) in b.iter().enumerate() {
        let d = char_poly_det(m);
        if (i + 1) % 2 == 0 {
            num = &num * &d;
        } else {
            den = &den * &d;
        }
    }
    let r = RationalFunction::new(num, den)?;
    if !r.numerator.constant_term().is_one() || !r.denominator.constant_term().is_one() {
        return Err(Error::InconsistentFamily(format!(
            "reduced form {} is not normalised at z = 0",
            r.to_text()
        )));
    }
    let order = r.numerator.degree().unwrap_or(0) + r.denominator.degree().unwrap_or(0) + 1;
    counts_from_zeta(&r, order)
        .map_err(|e| Error::InconsistentFamily(format!("{}: {e}", r.to_text())))?;
    Ok(r)
}

/// `N_1..N_m` from `z R'(z)/R(z) = sum N_n z^n`.
pub fn counts_from_zeta(r: &RationalFunction, m: usize) -> Result<CountSequence> {
    if !r.value_at_zero().is_one() {
        return Err(Error::NotAZetaFunction(format!(
            "R(0) = {} but a zeta function has R(0) = 1",
            r.value_at_zero()
        )));
    }
    let ln = log_derivative(&r.numerator, m);
    let ld = log_derivative(&r.denominator, m);
    let mut counts = Vec::with_capacity(m);
    for n in 1..=m {
        let v = &ln[n] - &ld[n];
        if !v.is_integer() {
            return Err(Error::NotAZetaFunction(format!("N_{n} = {v} is not an integer")));
        }
        let v = v.to_integer();
        if v.is_negative() {
            return Err(Error::NotAZetaFunction(format!("N_{n} = {v} is negative")));
        }
        counts.push(v);
    }
    CountSequence::new(counts)
}

/// Radius of convergence and periodic entropy of a rational zeta function.
#[derive(Clone, Debug, PartialEq)]
pub enum RadiusEntropy {
    /// Constant denominator: entire, so the radius is infinite and the entropy 0.
    NoPoles,
    Pole {
        rho: f64,
        rho_lower: f64,
        rho_upper: f64,
        periodic_entropy: f64,
        /// Whether the dominant pole is real (isolated exactly) or complex (inclusion disk).
        real: bool,
    },
}

impl RadiusEntropy {
    pub fn rho(&self) -> f64 {
        match self {
            Self::NoPoles => f64::INFINITY,
            Self::Pole { rho, .. } => *rho,
        }
    }

    pub fn periodic_entropy(&self) -> f64 {
        match self {
            Self::NoPoles => 0.0,
            Self::Pole { periodic_entropy, .. } => *periodic_entropy,
        }
    }
}

pub fn radius_and_entropy(r: &RationalFunction) -> Result<RadiusEntropy> {
    match roots::min_root_modulus(&r.denominator, 1e-13)? {
        None => Ok(RadiusEntropy::NoPoles),
        Some(m) => Ok(RadiusEntropy::Pole {
            rho: m.estimate,
            rho_lower: m.lower,
            rho_upper: m.upper,
            periodic_entropy: -m.estimate.ln(),
            real: m.real,
        }),
    }
}

fn mobius(mut n: usize) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Primitive orbit counts `P_n = (1/n) sum_{d | n} mu(n/d) N_d`.
pub fn primitive_orbit_counts(n: &CountSequence) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(n.order());
    for k in 1..=n.order() {
        let mut acc = BigInt::zero();
        for d in (1..=k).filter(|d| k % d == 0) {
            let mu = mobius(k / d);
            if mu != 0 {
                acc += BigInt::from(mu) * n.get(d);
            }
        }
        let (p, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() || p.is_negative() {
            return Err(Error::NotAZetaFunction(format!(
                "primitive orbit count at period {k} is {acc}/{k}"
            )));
        }
        out.push(p);
    }
    Ok(out)
}

/// Whether `N` is exactly the count sequence of `R` up to its order.
pub fn check_recurrence(n: &CountSequence, r: &RationalFunction) -> bool {
    counts_from_zeta(r, n.order()).is_ok_and(|c| &c == n)
}

/// Checks `1 - r|z| <= |zeta(z)| <= 1/(1 - r|z|)` at each sample, using the
/// truncated logarithm `sum N_n z^n / n` with its tail folded into the tolerance.
pub fn zeta_modulus_bounds_check(n: &CountSequence, r: u64, samples: &[Complex64]) -> Result<bool> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let rb = BigInt::from(r);
    for k in 1..=n.order() {
        if n.get(k) > &num_traits::pow(rb.clone(), k) {
            return Err(Error::Precondition(format!("N_{k} exceeds {r}^{k}")));
        }
    }
    let m = n.order();
    let rf = r as f64;
    for z in samples {
        let t = rf * z.norm();
        if t >= 1.0 {
            return Err(Error::Precondition(format!(
                "sample {z} has |z| >= 1/{r}"
            )));
        }
        let mut log = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for k in 1..=m {
            zp *= z;
            log += zp * (n.get(k).to_f64().unwrap_or(f64::INFINITY) / k as f64);
        }
        let tail = t.powi(m as i32 + 1) / ((m as f64 + 1.0) * (1.0 - t));
        let slack = 1e-12;
        let lo = (1.0 - t).ln() - tail - slack;
        let hi = -(1.0 - t).ln() + tail + slack;
        if !(lo <= log.re && log.re <= hi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fits a rational zeta function to the counts by Berlekamp-Massey on the
/// exact zeta series; the fit is returned only if it reproduces every count.
pub fn fit_rational_zeta(n: &CountSequence) -> Result<RationalFunction> {
    let s = zeta_series_from_counts(n)?.coeffs;
    // Berlekamp-Massey over Q on s_0..s_m: finds C with sum_j C_j s_{i-j} = 0 for i >= L.
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = BigRational::one();
    for i in 0..s.len() {
        let mut d = s[i].clone();
        for j in 1..=l.min(c.len() - 1) {
            d += &c[j] * &s[i - j];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &last;
        let old = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, BigRational::zero());
        }
        for (j, bj) in b.iter().enumerate() {
            c[j + shift] -= &coef * bj;
        }
        if 2 * l <= i {
            l = i + 1 - l;
            b = old;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    // With Q = C, the product S Q is a polynomial of degree < L up to the known order.
    let mut p = vec![BigRational::zero(); l];
    for (i, slot) in p.iter_mut().enumerate() {
        for j in 0..=i.min(l) {
            *slot += &c[j] * &s[i - j];
        }
    }
    let lcm = c
        .iter()
        .chain(p.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let to_int = |v: &[BigRational]| {
        IntPolynomial::new(v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect())
    };
    let r = RationalFunction::new(to_int(&p), to_int(&c))?;
    if 2 * l >= s.len() || !check_recurrence(n, &r) {
        return Err(Error::NotAZetaFunction(format!(
            "counts do not determine a rational zeta function of degree <= {}",
            (s.len() - 1) / 2
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    fn cs(c: &[u64]) -> CountSequence {
        CountSequence::from_u64(c)
    }

    #[test]
    fn series_from_counts() {
        assert_eq!(
            zeta_series_from_counts(&cs(&[0, 0, 0])).unwrap(),
            TruncatedSeries::from_integers(&[1, 0, 0, 0])
        );
        assert_eq!(
            zeta_series_from_counts(&cs(&[2, 4, 8])).unwrap(),
            TruncatedSeries::from_integers(&[1, 2, 4, 8])
        );
        assert_eq!(
            zeta_series_from_counts(&cs(&[0, 2, 0, 2])).unwrap(),
            TruncatedSeries::from_integers(&[1, 0, 1, 0, 1])
        );
        assert!(zeta_series_from_counts(&cs(&[])).is_err());
    }

    #[test]
    fn reduction_is_canonical() {
        let r = RationalFunction::new(p(&[2, -2]), p(&[-2, 6, -4])).unwrap();
        // (2 - 2z)/(-2(1 - z)(1 - 2z)) = -1/(1 - 2z)
        assert_eq!(r, rf(&[-1], &[1, -2]));
        assert!(RationalFunction::new(p(&[1]), p(&[0, 1])).is_err());
        assert!(RationalFunction::new(p(&[1]), IntPolynomial::zero()).is_err());
    }

    #[test]
    fn sft_zetas() {
        let fib = SignedIntMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert_eq!(zeta_from_sft(&fib).unwrap(), rf(&[1], &[1, -1, -1]));
        assert_eq!(zeta_from_sft(&SignedIntMatrix::zeros(2)).unwrap(), RationalFunction::one());
        assert_eq!(zeta_from_sft(&SignedIntMatrix::all_ones(3)).unwrap(), rf(&[1], &[1, -3]));
    }

    #[test]
    fn signed_families() {
        let fib = SignedIntMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert_eq!(zeta_from_signed_family(&[fib]).unwrap(), rf(&[1], &[1, -1, -1]));
        let fam = [SignedIntMatrix::all_ones(2), SignedIntMatrix::identity(1)];
        assert_eq!(zeta_from_signed_family(&fam).unwrap(), rf(&[1, -1], &[1, -2]));
        let zeros = [SignedIntMatrix::zeros(2), SignedIntMatrix::zeros(3)];
        assert_eq!(zeta_from_signed_family(&zeros).unwrap(), RationalFunction::one());
        assert!(zeta_from_signed_family(&[]).is_err());
        // det(I - z[[2]]) in the numerator alone gives negative counts.
        let bad = [SignedIntMatrix::zeros(1), SignedIntMatrix::from_rows(&[[2]]).unwrap()];
        assert!(matches!(
            zeta_from_signed_family(&bad),
            Err(Error::InconsistentFamily(_))
        ));
    }

    #[test]
    fn counts_from_rational_forms() {
        let c = counts_from_zeta(&rf(&[1], &[1, -2]), 4).unwrap();
        assert_eq!(c, cs(&[2, 4, 8, 16]));
        assert_eq!(counts_from_zeta(&RationalFunction::one(), 3).unwrap(), cs(&[0, 0, 0]));
        let toral = rf(&[1, -2, 1], &[1, -3, 1]);
        assert_eq!(counts_from_zeta(&toral, 3).unwrap(), cs(&[1, 5, 16]));
        assert!(counts_from_zeta(&rf(&[1], &[1, 2]), 2).is_err());
        assert!(counts_from_zeta(&rf(&[2], &[1, 2]), 2).is_err());
    }

    #[test]
    fn toral_counts_match_closed_form() {
        let c = counts_from_zeta(&rf(&[1, -2, 1], &[1, -3, 1]), 10).unwrap();
        let (a, b) = ((3.0 + 5f64.sqrt()) / 2.0, (3.0 - 5f64.sqrt()) / 2.0);
        for n in 1..=10 {
            let expect = a.powi(n as i32) + b.powi(n as i32) - 2.0;
            assert_eq!(c.get(n).to_f64().unwrap(), expect.round());
        }
    }

    #[test]
    fn radius_examples() {
        let re = radius_and_entropy(&rf(&[1], &[1, -2])).unwrap();
        assert!((re.rho() - 0.5).abs() < 1e-12);
        assert!((re.periodic_entropy() - 2f64.ln()).abs() < 1e-12);

        let s5 = 5f64.sqrt();
        let re = radius_and_entropy(&rf(&[1], &[1, -1, -1])).unwrap();
        assert!((re.rho() - 2.0 / (1.0 + s5)).abs() < 1e-12);
        assert!((re.periodic_entropy() - ((1.0 + s5) / 2.0).ln()).abs() < 1e-12);

        let re = radius_and_entropy(&rf(&[1, -2, 1], &[1, -3, 1])).unwrap();
        assert!((re.rho() - 2.0 / (3.0 + s5)).abs() < 1e-12);

        assert_eq!(radius_and_entropy(&RationalFunction::one()).unwrap(), RadiusEntropy::NoPoles);
    }

    #[test]
    fn primitive_counts() {
        let to_u = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_u(primitive_orbit_counts(&cs(&[1, 3, 4, 7])).unwrap()), vec![1, 1, 1, 1]);
        assert_eq!(to_u(primitive_orbit_counts(&cs(&[2, 4, 8])).unwrap()), vec![2, 1, 2]);
        assert_eq!(to_u(primitive_orbit_counts(&cs(&[0, 0])).unwrap()), vec![0, 0]);
        assert!(primitive_orbit_counts(&cs(&[2, 3])).is_err());
        assert!(primitive_orbit_counts(&cs(&[3, 1])).is_err());
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn recurrence_checks() {
        let r = rf(&[1], &[1, -2]);
        assert!(check_recurrence(&cs(&[2, 4, 8, 16]), &r));
        assert!(!check_recurrence(&cs(&[2, 4, 8, 15]), &r));
        assert!(check_recurrence(&cs(&[1, 5, 16]), &rf(&[1, -2, 1], &[1, -3, 1])));
    }

    #[test]
    fn modulus_bounds() {
        let pow2: Vec<u64> = (1..=15).map(|n| 1u64 << n).collect();
        let n = cs(&pow2);
        let z = |re: f64| Complex64::new(re, 0.0);
        assert!(zeta_modulus_bounds_check(&n, 2, &[z(0.25)]).unwrap());
        assert!(zeta_modulus_bounds_check(&n, 2, &[z(-0.4)]).unwrap());
        assert!(zeta_modulus_bounds_check(&cs(&[0; 10]), 3, &[z(0.3), Complex64::new(0.0, -0.2)]).unwrap());
        assert!(zeta_modulus_bounds_check(&n, 2, &[z(0.5)]).is_err());
        assert!(zeta_modulus_bounds_check(&cs(&[5]), 2, &[z(0.1)]).is_err());
    }

    #[test]
    fn rational_fit_recovers_toral_zeta() {
        let toral = rf(&[1, -2, 1], &[1, -3, 1]);
        let c = counts_from_zeta(&toral, 10).unwrap();
        assert_eq!(fit_rational_zeta(&c).unwrap(), toral);
        let c = counts_from_zeta(&rf(&[1, -1], &[1, -2]), 6).unwrap();
        assert_eq!(fit_rational_zeta(&c).unwrap(), rf(&[1, -1], &[1, -2]));
        assert_eq!(fit_rational_zeta(&cs(&[0, 0, 0])).unwrap(), RationalFunction::one());
    }

    #[test]
    fn text_round_trip() {
        let r = rf(&[1, -2, 1], &[1, -3, 1]);
        assert_eq!(r.to_text(), "num: 1 -2 1 / den: 1 -3 1");
        assert_eq!(RationalFunction::parse(&r.to_text()).unwrap(), r);
        assert_eq!(r.to_string(), "(1 - 2z + z^2)/(1 - 3z + z^2)");
        assert_eq!(rf(&[1], &[1, -1, -1]).to_string(), "1/(1 - z - z^2)");
        assert!(RationalFunction::parse("1 / 2").is_err());
        let c = cs(&[1, 3, 4]);
        assert_eq!(CountSequence::parse_csv(&c.to_csv()).unwrap(), c);
    }
}
