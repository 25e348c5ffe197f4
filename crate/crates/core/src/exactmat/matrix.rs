use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPolynomial;
use crate::{Error, Result};

/// Square matrix over arbitrary-precision integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedIntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl SignedIntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn all_ones(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            entries: vec![BigInt::one(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    /// Entry `(i, j)` is nonzero.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        !self.get(i, j).is_zero()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Self { dim: n, entries: out }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// `A^n` by binary exponentiation; `A^0` is the identity.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = v / &prev;
                }
            }
            prev = m[k * n + k].clone();
        }
        sign * &m[(n - 1) * n + (n - 1)]
    }

    /// Entries as `i64` if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|e| e.to_i64()).collect())
            .collect()
    }

    /// Parses the text format: a line holding `dim`, then `dim` rows of `dim`
    /// whitespace-separated integers. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dim: usize = header
            .parse()
            .map_err(|e| Error::Parse(format!("dimension line {header:?}: {e}")))?;
        if dim == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("entry {t:?} in row {r}: {e}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != dim {
                return Err(Error::Parse(format!(
                    "row {r} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content {extra:?}")));
        }
        Self::new(dim, entries)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim);
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for SignedIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `tr(A^n)`, exactly.
pub fn mat_power_trace(a: &SignedIntMatrix, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Precondition("trace power needs n >= 1".into()));
    }
    Ok(a.pow(n).trace())
}

/// `det(zI - A)` by the Faddeev-LeVerrier recurrence, ascending in `z`.
///
/// Every division in the recurrence is exact over the integers.
pub fn char_poly_monic(a: &SignedIntMatrix) -> IntPolynomial {
    let n = a.dim();
    // c[n] = 1, c[n-k] = -tr(A M_k) / k, M_k = A M_{k-1} + c[n-k+1] I
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = SignedIntMatrix::zeros(n);
    let ident = SignedIntMatrix::identity(n);
    for k in 1..=n {
        m = a.mul(&m).add(&ident.scale(&c[n - k + 1]));
        let t = a.mul(&m).trace();
        let kk = BigInt::from(k);
        debug_assert!((&t % &kk).is_zero());
        c[n - k] = -(t / kk);
    }
    IntPolynomial::new(c)
}

/// `det(I - zA)`, ascending in `z`; the constant term is always 1.
pub fn char_poly_det(a: &SignedIntMatrix) -> IntPolynomial {
    // det(I - zA) = z^n det(z^{-1} I - A): coefficient of z^j is c[n-j].
    let monic = char_poly_monic(a);
    let n = a.dim();
    IntPolynomial::new((0..=n).map(|j| monic.coeff(n - j)).collect())
}

/// Strong connectivity of the directed graph of `A`, with the convention
/// that a single vertex needs a self-loop (every `(A^n)_{ii} > 0` for some `n >= 1`).
pub fn is_irreducible(a: &SignedIntMatrix) -> bool {
    let n = a.dim();
    if n == 1 {
        return a.has_edge(0, 0);
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let edge = if forward { a.has_edge(u, v) } else { a.has_edge(v, u) };
                if edge && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Collatz-Wielandt bracket around the Perron eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronBracket {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl PerronBracket {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower.to_f64().unwrap() <= x && x <= self.upper.to_f64().unwrap()
    }
}

/// Brackets the Perron eigenvalue of an irreducible nonnegative matrix by
/// iterating the all-ones vector: `min (Ax)_i/x_i <= lambda <= max (Ax)_i/x_i`.
pub fn perron_bounds(a: &SignedIntMatrix, iterations: usize) -> Result<PerronBracket> {
    if !a.is_nonnegative() || a.is_zero() || !is_irreducible(a) {
        return Err(Error::Reducible);
    }
    if iterations == 0 {
        return Err(Error::Precondition("at least one iteration required".into()));
    }
    let mut x = vec![BigInt::one(); a.dim()];
    let mut best: Option<PerronBracket> = None;
    for _ in 0..iterations {
        let y = a.mul_vec(&x);
        let ratios = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| BigRational::new(yi.clone(), xi.clone()));
        let (lo, hi) = ratios.fold((None::<BigRational>, None::<BigRational>), |(lo, hi), r| {
            let lo = Some(match lo {
                Some(l) if l <= r => l,
                _ => r.clone(),
            });
            let hi = Some(match hi {
                Some(h) if h >= r => h,
                _ => r,
            });
            (lo, hi)
        });
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        best = Some(match best {
            None => PerronBracket { lower: lo, upper: hi },
            Some(b) => PerronBracket {
                lower: if lo > b.lower { lo } else { b.lower },
                upper: if hi < b.upper { hi } else { b.upper },
            },
        });
        // Keep the integer vector small; the ratios are scale invariant.
        let g = y.iter().fold(BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
        x = if g > BigInt::one() {
            y.into_iter().map(|v| v / &g).collect()
        } else {
            y
        };
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn m(rows: &[&[i64]]) -> SignedIntMatrix {
        SignedIntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn trace_of_powers() {
        assert_eq!(mat_power_trace(&SignedIntMatrix::identity(3), 5).unwrap(), 3.into());
        assert_eq!(mat_power_trace(&m(&[&[1, 1], &[1, 0]]), 4).unwrap(), 7.into());
        assert_eq!(mat_power_trace(&SignedIntMatrix::all_ones(2), 3).unwrap(), 8.into());
        assert!(mat_power_trace(&SignedIntMatrix::identity(2), 0).is_err());
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(
            char_poly_det(&m(&[&[1, 1], &[1, 0]])),
            IntPolynomial::from_i64(&[1, -1, -1])
        );
        assert_eq!(char_poly_det(&SignedIntMatrix::zeros(4)), IntPolynomial::one());
        assert_eq!(
            char_poly_det(&m(&[&[2, 1], &[1, 1]])),
            IntPolynomial::from_i64(&[1, -3, 1])
        );
    }

    #[test]
    fn monic_char_poly_of_3x3() {
        // det(zI - A) for A = [[2,0,1],[1,3,0],[0,1,1]]: z^3 - 6z^2 + 11z - 7
        let a = m(&[&[2, 0, 1], &[1, 3, 0], &[0, 1, 1]]);
        assert_eq!(char_poly_monic(&a), IntPolynomial::from_i64(&[-7, 11, -6, 1]));
        assert_eq!(a.det(), BigInt::from(7));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&m(&[&[1, 1], &[1, 0]])));
        assert!(!is_irreducible(&SignedIntMatrix::identity(2)));
        assert!(!is_irreducible(&m(&[&[0, 1], &[0, 1]])));
        assert!(is_irreducible(&m(&[&[0, 1], &[1, 0]])));
        assert!(!is_irreducible(&m(&[&[0]])));
    }

    #[test]
    fn perron_brackets() {
        let b = perron_bounds(&SignedIntMatrix::all_ones(2), 3).unwrap();
        assert_eq!(b.lower, BigRational::from_u32(2).unwrap());
        assert_eq!(b.upper, BigRational::from_u32(2).unwrap());

        let b = perron_bounds(&m(&[&[1, 1], &[1, 0]]), 30).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(b.contains(phi));
        assert!(b.width_f64() < 1e-6);

        let b = perron_bounds(&SignedIntMatrix::identity(1), 1).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (BigRational::one(), BigRational::one()));

        assert_eq!(perron_bounds(&SignedIntMatrix::identity(2), 5), Err(Error::Reducible));
        assert_eq!(perron_bounds(&SignedIntMatrix::zeros(1), 5), Err(Error::Reducible));
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let a = m(&[&[1, -2], &[3, 0]]);
        assert_eq!(SignedIntMatrix::parse(&a.to_text()).unwrap(), a);
        assert!(SignedIntMatrix::parse("2\n1 1\n").is_err());
        assert!(SignedIntMatrix::parse("2\n1 1 1\n0 1\n").is_err());
        assert!(SignedIntMatrix::parse("0\n").is_err());
        let c = SignedIntMatrix::parse("# fib\n2\n1 1  # row\n\n1 0\n").unwrap();
        assert_eq!(c, m(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn bareiss_matches_cofactor_on_small_case() {
        let a = m(&[&[0, 2, 1], &[1, 0, 3], &[4, 1, 0]]);
        // cofactor expansion by hand: 0*(0-3) - 2*(0-12) + 1*(1-0) = 25
        assert_eq!(a.det(), BigInt::from(25));
    }
}
