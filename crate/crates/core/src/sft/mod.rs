//! Subshifts of finite type: admissible words, periodic counts and entropy.
//!
//! Symbols are `0..k`; word `w` is admissible when `A[w_i][w_{i+1}] = 1` for every `i`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactmat::{is_irreducible, mat_power_trace, perron_bounds, SignedIntMatrix};
use crate::expmap::ShiftMap;
use crate::{Error, Result};

/// Brute-force enumeration refuses more than this many words.
pub const BRUTEFORCE_GUARD: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubshiftOfFiniteType {
    transition: SignedIntMatrix,
}

/// An entropy value bracketed as `lower <= value <= upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl EntropyValue {
    pub fn uncertainty(&self) -> f64 {
        (self.upper - self.value).max(self.value - self.lower)
    }
}

impl SubshiftOfFiniteType {
    pub fn new(transition: SignedIntMatrix) -> Result<Self> {
        if !transition.is_binary() {
            return Err(Error::InvalidMatrix(
                "transition matrix must have entries in {0, 1}".into(),
            ));
        }
        Ok(Self { transition })
    }

    pub fn full(k: usize) -> Self {
        Self {
            transition: SignedIntMatrix::all_ones(k),
        }
    }

    /// The golden-mean shift `[[1, 1], [1, 0]]`.
    pub fn golden_mean() -> Self {
        Self {
            transition: SignedIntMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.transition.dim()
    }

    pub fn transition(&self) -> &SignedIntMatrix {
        &self.transition
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.transition.has_edge(a, b)
    }

    fn check_symbols(&self, word: &[usize]) -> Result<()> {
        let k = self.alphabet_size();
        match word.iter().find(|&&s| s >= k) {
            Some(&s) => Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet: k,
            }),
            None => Ok(()),
        }
    }

    pub fn is_admissible(&self, word: &[usize]) -> Result<bool> {
        self.check_symbols(word)?;
        Ok(word.windows(2).all(|p| self.allows(p[0], p[1])))
    }

    /// Admissible including the wrap pair `(w_{n-1}, w_0)`.
    pub fn is_cyclically_admissible(&self, word: &[usize]) -> Result<bool> {
        Ok(self.is_admissible(word)?
            && word
                .last()
                .zip(word.first())
                .map_or(true, |(&a, &b)| self.allows(a, b)))
    }

    /// `N_n = tr(A^n)`.
    pub fn count_periodic_trace(&self, n: u64) -> Result<BigInt> {
        mat_power_trace(&self.transition, n)
    }

    /// Counts closed words of length `n` by enumerating all `k^n` words.
    pub fn count_periodic_bruteforce(&self, n: u32) -> Result<u64> {
        if n == 0 {
            return Err(Error::Precondition("period must be >= 1".into()));
        }
        let k = self.alphabet_size() as u64;
        let total = k
            .checked_pow(n)
            .filter(|&t| t <= BRUTEFORCE_GUARD)
            .ok_or_else(|| {
                Error::GuardExceeded(format!("{k}^{n} words exceed {BRUTEFORCE_GUARD}"))
            })?;
        let n = n as usize;
        let mut word = vec![0usize; n];
        let mut count = 0u64;
        for _ in 0..total {
            let closed = (0..n).all(|i| self.allows(word[i], word[(i + 1) % n]));
            if closed {
                count += 1;
            }
            for s in word.iter_mut() {
                *s += 1;
                if *s < k as usize {
                    break;
                }
                *s = 0;
            }
        }
        Ok(count)
    }

    /// Number of admissible words of length `len`.
    pub fn word_count(&self, len: usize) -> BigInt {
        if len == 0 {
            return BigInt::one();
        }
        self.transition
            .pow(len as u64 - 1)
            .entries()
            .iter()
            .sum()
    }

    /// Every symbol has a successor and a predecessor.
    pub fn is_essential(&self) -> bool {
        let k = self.alphabet_size();
        (0..k).all(|i| (0..k).any(|j| self.allows(i, j)) && (0..k).any(|j| self.allows(j, i)))
    }

    /// `log` of the Perron eigenvalue from a Collatz-Wielandt bracket.
    pub fn sft_entropy(&self) -> Result<EntropyValue> {
        if !is_irreducible(&self.transition) {
            return Err(Error::Reducible);
        }
        let b = perron_bounds(&self.transition, 200)?;
        let lower = b.lower.to_f64().unwrap().ln();
        let upper = b.upper.to_f64().unwrap().ln();
        Ok(EntropyValue {
            value: b.midpoint_f64().ln(),
            lower,
            upper,
        })
    }

    pub fn as_expanding_map(&self) -> Result<ShiftMap> {
        ShiftMap::new(self.clone())
    }

    /// Lists every closed word of length `n` (for small cases).
    pub fn closed_words(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        let k = self.alphabet_size() as u64;
        if k.checked_pow(n as u32).map_or(true, |t| t > BRUTEFORCE_GUARD) {
            return Err(Error::GuardExceeded(format!("{k}^{n} words")));
        }
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..k as usize).map(|s| vec![s]).collect();
        while let Some(w) = stack.pop() {
            if w.len() == n {
                if self.allows(w[n - 1], w[0]) {
                    out.push(w);
                }
                continue;
            }
            let last = *w.last().unwrap();
            for s in (0..k as usize).rev() {
                if self.allows(last, s) {
                    let mut v = w.clone();
                    v.push(s);
                    stack.push(v);
                }
            }
        }
        Ok(out)
    }
}

impl Default for SubshiftOfFiniteType {
    fn default() -> Self {
        Self::full(2)
    }
}

/// The shift on the zero matrix, which has no admissible pairs.
pub fn zero_shift(k: usize) -> SubshiftOfFiniteType {
    SubshiftOfFiniteType {
        transition: SignedIntMatrix::zeros(k),
    }
}

impl SubshiftOfFiniteType {
    pub fn trace_counts(&self, m: usize) -> Vec<BigInt> {
        let mut p = self.transition.clone();
        let mut out = Vec::with_capacity(m);
        for n in 1..=m {
            if n > 1 {
                p = p.mul(&self.transition);
            }
            out.push(p.trace());
        }
        out
    }

    pub fn has_periodic_points(&self) -> bool {
        self.trace_counts(self.alphabet_size())
            .iter()
            .any(|t| !t.is_zero())
    }
}
