use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial in `z` with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `z^i`. The vector never carries
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `1 - a z`
    pub fn one_minus(a: i64) -> Self {
        Self::from_i64(&[1, -a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `z^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Greatest common divisor of the coefficients, always nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides every coefficient by `d`, which must divide all of them.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Self {
        debug_assert!(self.coeffs.iter().all(|c| (c % d).is_zero()));
        Self::new(self.coeffs.iter().map(|c| c / d).collect())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `z^n * p(1/z)` for `n = degree`; reverses coefficient order.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    /// Pseudo-remainder of `self` by `d`: `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero polynomial");
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let Some(ra) = r.degree() else {
            return r;
        };
        if ra < dd {
            return r;
        }
        let mut steps = ra - dd + 1;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shift = rd - dd;
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, dc) in d.coeffs.iter().enumerate() {
                next[i + shift] -= &lr * dc;
            }
            r = Self::new(next);
            steps -= 1;
        }
        // Account for the steps skipped when the degree dropped by more than one.
        if steps > 0 {
            r = r.scale(&num_traits::pow(lc, steps));
        }
        r
    }

    /// Exact division; `None` when `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let Some(top) = self.degree() else {
            return Some(Self::zero());
        };
        if top < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); top - dd + 1];
        for i in (0..=top - dd).rev() {
            let num = &r[i + dd];
            let (qi, rem) = num.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qi * dc;
            }
            q[i] = qi;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// GCD over `Z[z]` via the subresultant remainder sequence, returned
    /// primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.degree() == Some(0) {
                b = Self::one();
                break;
            }
            let divisor = &g * num_traits::pow(h.clone(), delta);
            a = b;
            b = r.div_scalar_exact(&divisor);
            g = a.leading().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h.clone(), delta - 1);
                num / den
            };
        }
        b.primitive_part()
    }

    /// Coefficients as space-separated integers in ascending degree.
    pub fn to_ascending_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_ascending(text: &str) -> crate::Result<Self> {
        let coeffs = text
            .split_whitespace()
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|e| crate::Error::Parse(format!("coefficient {t:?}: {e}")))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if show_mag => write!(f, "{mag}z")?,
                1 => write!(f, "z")?,
                _ if show_mag => write!(f, "{mag}z^{i}")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}
