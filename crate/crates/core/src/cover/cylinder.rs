use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CoverGeometry;
use crate::expmap::{ShiftMap, ShiftPoint};
use crate::sft::BRUTEFORCE_GUARD;
use crate::{Error, Result};

/// Longest of two words when one is a prefix of the other.
fn merge(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    let n = a.len().min(b.len());
    (a[..n] == b[..n]).then(|| if a.len() >= b.len() { a.to_vec() } else { b.to_vec() })
}

impl ShiftMap {
    /// Every admissible word of length `depth`, in lexicographic order.
    pub fn admissible_words(&self, depth: usize) -> Result<Vec<Vec<usize>>> {
        if depth == 0 {
            return Err(Error::InvalidCover("cylinder depth must be >= 1".into()));
        }
        let total = self.sft().word_count(depth);
        if total > BigInt::from(BRUTEFORCE_GUARD) {
            return Err(Error::GuardExceeded(format!("{total} cylinders at depth {depth}")));
        }
        let k = self.sft().alphabet_size();
        let mut words: Vec<Vec<usize>> = (0..k).map(|s| vec![s]).collect();
        for _ in 1..depth {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().unwrap();
                    (0..k).filter(move |&s| self.sft().allows(last, s)).map(move |s| {
                        let mut v = w.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        Ok(words)
    }
}

impl CoverGeometry for ShiftMap {
    type Rect = Vec<usize>;

    fn uniform_rects(&self, mesh: &BigRational) -> Result<Vec<Vec<usize>>> {
        if mesh <= &BigRational::zero() {
            return Err(Error::InvalidCover(format!("mesh must be positive, got {mesh}")));
        }
        let mut depth = 0usize;
        let mut scale = BigRational::one();
        while &scale > mesh {
            scale /= BigRational::from_integer(2.into());
            depth += 1;
        }
        self.admissible_words(depth.max(1))
    }

    /// Upper bound `sum_{i >= n} 2^-i = 2^(1-n)` for a depth-`n` cylinder.
    fn diameter(&self, r: &Vec<usize>) -> BigRational {
        BigRational::new(BigInt::from(2), BigInt::one() << r.len())
    }

    fn is_proper(&self, r: &Vec<usize>) -> bool {
        !r.is_empty() && self.sft().is_admissible(r).unwrap_or(false)
    }

    fn interiors_meet(&self, a: &Vec<usize>, b: &Vec<usize>) -> bool {
        merge(a, b).is_some()
    }

    fn image_meets(&self, a: &Vec<usize>, b: &Vec<usize>) -> bool {
        if a.len() == 1 {
            self.sft().allows(a[0], b[0])
        } else {
            merge(&a[1..], b).is_some()
        }
    }

    fn image_contains(&self, a: &Vec<usize>, b: &Vec<usize>) -> bool {
        if a.len() == 1 {
            self.sft().allows(a[0], b[0])
        } else {
            a.len() - 1 <= b.len() && a[1..] == b[..a.len() - 1]
        }
    }

    fn covers(&self, rects: &[Vec<usize>]) -> bool {
        let depth = rects.iter().map(Vec::len).max().unwrap_or(0);
        match self.admissible_words(depth) {
            Ok(words) => words
                .iter()
                .all(|w| rects.iter().any(|r| w[..r.len()] == r[..])),
            Err(_) => false,
        }
    }

    fn common_point(&self, rects: &[&Vec<usize>]) -> bool {
        let mut acc: Vec<usize> = Vec::new();
        for r in rects {
            match merge(&acc, r) {
                Some(m) => acc = m,
                None => return false,
            }
        }
        true
    }

    fn rect_contains(&self, r: &Vec<usize>, x: &ShiftPoint) -> bool {
        x.word(r.len()) == *r
    }

    fn pull_back(&self, outer: &Vec<usize>, inner: &Vec<usize>) -> Result<Vec<usize>> {
        let tail = merge(&outer[1..], inner)
            .ok_or_else(|| Error::Inadmissible(format!("{outer:?} does not map onto {inner:?}")))?;
        let mut w = vec![outer[0]];
        w.extend(tail);
        if !self.sft().is_admissible(&w)? {
            return Err(Error::Inadmissible(format!("{w:?}")));
        }
        Ok(w)
    }

    fn dump_rect(&self, r: &Vec<usize>) -> String {
        r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::SubshiftOfFiniteType;

    #[test]
    fn cylinder_algebra() {
        let m = ShiftMap::new(SubshiftOfFiniteType::golden_mean()).unwrap();
        assert_eq!(m.admissible_words(3).unwrap().len(), 5);
        assert!(m.image_contains(&vec![0, 1], &vec![1, 0]));
        assert!(!m.image_meets(&vec![1], &vec![1]));
        assert_eq!(m.pull_back(&vec![0], &vec![1, 0]).unwrap(), vec![0, 1, 0]);
        assert!(m.pull_back(&vec![1], &vec![1]).is_err());
        assert!(m.common_point(&[&vec![0], &vec![0, 1]]));
        assert!(!m.common_point(&[&vec![0, 0], &vec![0, 1]]));
    }
}
