//! Uniform grids `(Z/N)^dim` for linear maps `v -> M v mod 1`.
//!
//! For a group endomorphism with a translation-invariant metric
//! `d_n(x, y) = d_n(0, y - x)`, so one table of `d_n(0, delta)` decides every pair.

use std::collections::HashMap;

use crate::{Error, Result};

/// Largest grid the greedy passes will allocate.
pub const GRID_GUARD: usize = 1 << 24;

pub(crate) trait LinearModel {
    fn dim(&self) -> usize;
    /// One step of the integer map on `(Z/N)^dim`.
    fn step(&self, v: &mut [i64; 2], modulus: i64);
}

pub(crate) struct Circle(pub i64);

impl LinearModel for Circle {
    fn dim(&self) -> usize {
        1
    }

    fn step(&self, v: &mut [i64; 2], modulus: i64) {
        v[0] = ((v[0] as i128 * self.0 as i128).rem_euclid(modulus as i128)) as i64;
    }
}

pub(crate) struct Torus(pub [[i64; 2]; 2]);

impl LinearModel for Torus {
    fn dim(&self) -> usize {
        2
    }

    fn step(&self, v: &mut [i64; 2], modulus: i64) {
        let m = &self.0;
        let n = modulus as i128;
        let a = (m[0][0] as i128 * v[0] as i128 + m[0][1] as i128 * v[1] as i128).rem_euclid(n);
        let b = (m[1][0] as i128 * v[0] as i128 + m[1][1] as i128 * v[1] as i128).rem_euclid(n);
        *v = [a as i64, b as i64];
    }
}

fn norm(v: &[i64; 2], dim: usize, n: i64) -> i64 {
    v[..dim]
        .iter()
        .map(|&x| {
            let r = x.rem_euclid(n);
            r.min(n - r)
        })
        .max()
        .unwrap()
}

pub(crate) struct Grid<'a, L: LinearModel> {
    model: &'a L,
    modulus: i64,
    size: usize,
}

impl<'a, L: LinearModel> Grid<'a, L> {
    pub fn new(model: &'a L, modulus: u64) -> Result<Self> {
        let size = (modulus as usize)
            .checked_pow(model.dim() as u32)
            .filter(|&s| s <= GRID_GUARD && modulus >= 1)
            .ok_or_else(|| Error::GuardExceeded(format!("grid {modulus}^{} exceeds {GRID_GUARD}", model.dim())))?;
        Ok(Self {
            model,
            modulus: modulus as i64,
            size,
        })
    }


    pub fn coords(&self, idx: usize) -> [i64; 2] {
        let n = self.modulus as usize;
        [(idx % n) as i64, (idx / n % n) as i64]
    }

    fn index(&self, v: &[i64; 2]) -> usize {
        let n = self.modulus;
        let a = v[0].rem_euclid(n) as usize;
        let b = if self.model.dim() > 1 { v[1].rem_euclid(n) as usize } else { 0 };
        a + b * n as usize
    }

    fn sub(&self, a: &[i64; 2], b: &[i64; 2]) -> usize {
        self.index(&[a[0] - b[0], a[1] - b[1]])
    }

    fn add(&self, a: &[i64; 2], b: &[i64; 2]) -> usize {
        self.index(&[a[0] + b[0], a[1] + b[1]])
    }

    /// `d_n(0, delta) * N` for every `delta`, capped at `cap + 1`.
    fn table(&self, n: usize, cap: i64) -> Vec<u32> {
        let dim = self.model.dim();
        (0..self.size)
            .map(|idx| {
                let mut v = self.coords(idx);
                let mut m = 0i64;
                for i in 0..n {
                    if i > 0 {
                        self.model.step(&mut v, self.modulus);
                    }
                    m = m.max(norm(&v, dim, self.modulus));
                    if m > cap {
                        return (cap + 1) as u32;
                    }
                }
                m as u32
            })
            .collect()
    }

    /// Greedy `(n, sep)`-separated subset and `(n, span)`-spanning subset of the grid,
    /// both in increasing index order; thresholds are in units of `1/N`.
    pub fn greedy(&self, n: usize, sep: i64, span: i64) -> (Vec<usize>, usize) {
        let cap = sep.max(span);
        let table = self.table(n, cap);
        let offsets = |t: i64| -> Vec<[i64; 2]> {
            (0..self.size)
                .filter(|&d| table[d] as i64 <= t)
                .map(|d| self.coords(d))
                .collect()
        };
        let near_sep = offsets(sep);
        let mut accepted = vec![false; self.size];
        let mut chosen: Vec<usize> = Vec::new();
        let mut chosen_coords: Vec<[i64; 2]> = Vec::new();
        for a in 0..self.size {
            let ca = self.coords(a);
            let blocked = if near_sep.len() <= chosen.len() {
                near_sep.iter().any(|d| accepted[self.sub(&ca, d)])
            } else {
                chosen_coords.iter().any(|b| table[self.sub(&ca, b)] as i64 <= sep)
            };
            if !blocked {
                accepted[a] = true;
                chosen.push(a);
                chosen_coords.push(ca);
            }
        }
        let near_span = offsets(span);
        let mut covered = vec![false; self.size];
        let mut centers = 0usize;
        for a in 0..self.size {
            if covered[a] {
                continue;
            }
            centers += 1;
            let ca = self.coords(a);
            for d in &near_span {
                covered[self.add(&ca, d)] = true;
            }
        }
        (chosen, centers)
    }

    /// Re-checks by explicit orbits that no two indices are within `sep` under `d_n`.
    pub fn check_separated(&self, idxs: &[usize], n: usize, sep: i64) -> bool {
        let dim = self.model.dim();
        let orbits: Vec<Vec<[i64; 2]>> = idxs
            .iter()
            .map(|&i| {
                let mut v = self.coords(i);
                let mut o = Vec::with_capacity(n);
                for t in 0..n {
                    if t > 0 {
                        self.model.step(&mut v, self.modulus);
                    }
                    o.push(v);
                }
                o
            })
            .collect();
        let mut w = 1i64;
        while w <= sep {
            w *= 2;
        }
        let cells = (self.modulus + w - 1) / w;
        let key = |o: &[[i64; 2]]| -> [i64; 4] {
            let last = o[o.len() - 1];
            [o[0][0] / w, o[0][1] / w, last[0] / w, last[1] / w]
        };
        let mut buckets: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
        for (i, o) in orbits.iter().enumerate() {
            buckets.entry(key(o)).or_default().push(i);
        }
        let steps: Vec<i64> = if cells <= 3 { (0..cells).collect() } else { vec![cells - 1, 0, 1] };
        let active = |c: usize| c % 2 == 0 || dim > 1;
        for (i, o) in orbits.iter().enumerate() {
            let k = key(o);
            let mut seen = std::collections::HashSet::new();
            for s0 in &steps {
                for s1 in &steps {
                    for s2 in &steps {
                        for s3 in &steps {
                            let s = [*s0, *s1, *s2, *s3];
                            if (0..4).any(|c| !active(c) && s[c] != 0) {
                                continue;
                            }
                            let nk = [0, 1, 2, 3].map(|c| {
                                if cells <= 3 { s[c] } else { (k[c] + s[c]).rem_euclid(cells) }
                            });
                            if !seen.insert(nk) {
                                continue;
                            }
                            for &j in buckets.get(&nk).into_iter().flatten() {
                                if j <= i {
                                    continue;
                                }
                                let close = o.iter().zip(&orbits[j]).all(|(p, q)| {
                                    norm(&[p[0] - q[0], p[1] - q[1]], dim, self.modulus) <= sep
                                });
                                if close {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}
