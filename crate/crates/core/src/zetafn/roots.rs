//! Root location for integer polynomials: Sturm isolation of real roots and
//! Aberth iteration with Weierstrass inclusion radii for the complex ones.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::IntPolynomial;
use crate::{Error, Result};

/// Squarefree part `p / gcd(p, p')`, primitive.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    if p.is_constant() {
        return p.primitive_part();
    }
    let g = p.gcd(&p.derivative());
    p.div_exact(&g)
        .expect("gcd divides its argument")
        .primitive_part()
}

struct Sturm {
    chain: Vec<IntPolynomial>,
}

impl Sturm {
    fn new(p: &IntPolynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_constant() {
                break;
            }
            // prem = lc(b)^e * rem with e = deg a - deg b + 1; keep the true sign of -rem.
            let e = a.degree().unwrap() - b.degree().unwrap() + 1;
            let lc_neg = b.leading().unwrap().is_negative() && e % 2 == 1;
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            let c = r.content();
            let mut next = r.div_scalar_exact(&c);
            if !lc_neg {
                next = -&next;
            }
            chain.push(next);
        }
        Self { chain }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in &self.chain {
            let v = p.eval_rational(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a) - self.sign_changes(b)
    }
}

/// Cauchy bound: every root has modulus below `1 + max |a_i / a_n|`.
fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let lc = p.leading().unwrap().abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::one() + BigRational::new(m, lc)
}

/// A real root bracketed by rational endpoints `lo < root <= hi`, or exact.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealRoot {
    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn modulus_bounds(&self) -> (f64, f64) {
        let lo = self.lo.to_f64().unwrap();
        let hi = self.hi.to_f64().unwrap();
        if lo >= 0.0 {
            (lo, hi)
        } else if hi <= 0.0 {
            (-hi, -lo)
        } else {
            (0.0, lo.abs().max(hi.abs()))
        }
    }
}

/// Isolates every distinct real root of `p` to intervals of width at most `tol`.
pub fn real_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = squarefree_part(p);
    if sq.is_constant() {
        return Ok(Vec::new());
    }
    let sturm = Sturm::new(&sq);
    let bound = cauchy_bound(&sq);
    let tol = BigRational::from_float(tol).expect("finite tolerance");
    let two = BigRational::from_integer(2.into());
    let mut stack = vec![(-bound.clone(), bound)];
    let mut out = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            let (mut lo, mut hi) = (a, b);
            while &hi - &lo > tol {
                let mid = (&lo + &hi) / &two;
                if sq.eval_rational(&mid).is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if sturm.count(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(RealRoot { lo, hi });
            continue;
        }
        let mid = (&a + &b) / &two;
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Approximate complex roots with a Weierstrass inclusion radius each.
#[derive(Clone, Debug)]
pub struct ComplexRoot {
    pub value: Complex64,
    pub radius: f64,
}

/// All roots of `p` (with multiplicity) by Aberth-Ehrlich iteration.
pub fn complex_roots(p: &IntPolynomial) -> Result<Vec<ComplexRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree().unwrap();
    if n == 0 {
        return Ok(Vec::new());
    }
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|x| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    let lc = c[n];
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let bound = cauchy_bound(p).to_f64().unwrap();
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / n as f64;
            Complex64::from_polar(0.5 * bound, t)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    Ok((0..n)
        .map(|i| {
            let (v, _) = eval(z[i]);
            let denom: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| z[i] - z[j])
                .product::<Complex64>()
                * lc;
            let w = (v / denom).norm();
            let radius = if w.is_finite() { n as f64 * w } else { f64::INFINITY };
            ComplexRoot {
                value: z[i],
                radius,
            }
        })
        .collect())
}

/// Bounds on the smallest root modulus of `p`.
#[derive(Clone, Debug)]
pub struct MinModulus {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub real: bool,
}

/// Smallest modulus among the roots of a nonconstant `p` with `p(0) != 0`.
///
/// Real roots come from Sturm isolation to `tol`; complex roots only enter
/// when their inclusion disks reach below the best real candidate.
pub fn min_root_modulus(p: &IntPolynomial, tol: f64) -> Result<Option<MinModulus>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = squarefree_part(p);
    if sq.is_constant() {
        return Ok(None);
    }
    let reals = real_roots(&sq, tol)?;
    let best_real = reals
        .iter()
        .map(|r| {
            let (lo, hi) = r.modulus_bounds();
            (r.midpoint().abs(), lo, hi)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let complex = complex_roots(&sq)?;
    let nonreal: Vec<&ComplexRoot> = complex
        .iter()
        .filter(|r| {
            !reals.iter().any(|rr| {
                let m = rr.midpoint();
                (r.value - Complex64::new(m, 0.0)).norm() <= r.radius.max(1e-9) * 4.0
            })
        })
        .collect();
    let best_complex = nonreal
        .iter()
        .map(|r| (r.value.norm(), (r.value.norm() - r.radius).max(0.0), r.value.norm() + r.radius))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let pick = match (best_real, best_complex) {
        (Some(r), Some(c)) if c.1 < r.1 => MinModulus {
            estimate: c.0.min(r.0),
            lower: c.1,
            upper: c.2.min(r.2),
            real: c.0 >= r.0,
        },
        (Some(r), _) => MinModulus {
            estimate: r.0,
            lower: r.1,
            upper: r.2,
            real: true,
        },
        (None, Some(c)) => MinModulus {
            estimate: c.0,
            lower: c.1,
            upper: c.2,
            real: false,
        },
        (None, None) => return Ok(None),
    };
    Ok(Some(pick))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn isolates_golden_ratio_roots() {
        let roots = real_roots(&p(&[1, -1, -1]), 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        let s5 = 5f64.sqrt();
        assert!((roots[0].midpoint() - (-(1.0 + s5) / 2.0)).abs() < 1e-11);
        assert!((roots[1].midpoint() - (s5 - 1.0) / 2.0).abs() < 1e-11);
    }

    #[test]
    fn exact_rational_root_and_repeated_factor() {
        // (1 - 2z)^2 (1 + z): real roots 1/2 and -1
        let q = &p(&[1, -2]).pow(2) * &p(&[1, 1]);
        let roots = real_roots(&q, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[1].midpoint() - 0.5).abs() < 1e-12);
        assert!((roots[0].midpoint() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots(&p(&[1, 0, 1]), 1e-12).unwrap().is_empty());
        let m = min_root_modulus(&p(&[1, 0, 1]), 1e-12).unwrap().unwrap();
        assert!(!m.real);
        assert!((m.estimate - 1.0).abs() < 1e-12);
        assert!(m.lower <= 1.0 && m.upper >= 1.0);
    }

    #[test]
    fn complex_smaller_than_real() {
        // (1 + 4z^2)(1 - z): complex pair of modulus 1/2, real root 1
        let q = &p(&[1, 0, 4]) * &p(&[1, -1]);
        let m = min_root_modulus(&q, 1e-12).unwrap().unwrap();
        assert!(!m.real);
        assert!((m.estimate - 0.5).abs() < 1e-12);
        assert!(m.lower > 0.5 - 1e-9);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(min_root_modulus(&p(&[3]), 1e-12).unwrap().is_none());
        assert!(real_roots(&IntPolynomial::zero(), 1e-12).is_err());
    }

    #[test]
    fn aberth_matches_known_roots() {
        let roots = complex_roots(&p(&[6, -5, 1])).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|r| r.value.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - 2.0).abs() < 1e-12 && (re[1] - 3.0).abs() < 1e-12);
        assert!(roots.iter().all(|r| r.radius < 1e-9));
    }
}
