//! Exact parsing of rationals and points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::expmap::ShiftPoint;
use crate::{Error, Result};

/// `"3/8"`, `"-2"`, `"0.130"`, `"1e-3"` and `"2.5E2"`, all exact.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_circle_points(text: &str) -> Result<Vec<BigRational>> {
    data_lines(text)
        .map(|(i, l)| parse_rational(l).map_err(|e| Error::Parse(format!("line {i}: {e}"))))
        .collect()
}

pub fn parse_torus_points(text: &str) -> Result<Vec<[BigRational; 2]>> {
    data_lines(text)
        .map(|(i, l)| {
            let parts: Vec<&str> = l.split([',', ' ', '\t']).filter(|p| !p.is_empty()).collect();
            match parts.as_slice() {
                [x, y] => Ok([parse_rational(x)?, parse_rational(y)?]),
                _ => Err(Error::Parse(format!("line {i}: expected two coordinates"))),
            }
        })
        .collect()
}

fn symbols(s: &str) -> Result<Vec<usize>> {
    s.split([',', ' ', '\t'])
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad symbol {p:?}"))))
        .collect()
}

/// `prefix | cycle`, e.g. `0 1 | 1 0` or `| 0 1`.
pub fn parse_shift_points(text: &str) -> Result<Vec<ShiftPoint>> {
    data_lines(text)
        .map(|(i, l)| {
            let (p, c) = l
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("line {i}: expected `prefix | cycle`")))?;
            let cycle = symbols(c)?;
            if cycle.is_empty() {
                return Err(Error::Parse(format!("line {i}: empty cycle")));
            }
            Ok(ShiftPoint::new(symbols(p)?, cycle))
        })
        .collect()
}

pub fn format_torus(p: &[BigRational; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}
