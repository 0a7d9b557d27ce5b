use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A block grading: `blocks[i]` variables of degree `e_i`.
///
/// Variables are numbered block-major: the first `blocks[0]` variables belong
/// to block 0, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingConfig {
    blocks: Vec<usize>,
}

impl RingConfig {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidRing("at least one block is required".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidRing("every block needs at least one variable".into()));
        }
        Ok(Self { blocks })
    }

    /// The standard graded polynomial ring in `n` variables.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn nvars(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_standard(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Variable index range of block `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..i].iter().sum();
        start..start + self.blocks[i]
    }

    pub fn block_of(&self, var: usize) -> usize {
        let mut acc = 0;
        for (i, &m) in self.blocks.iter().enumerate() {
            acc += m;
            if var < acc {
                return i;
            }
        }
        panic!("variable {var} out of range");
    }

    /// Per-block exponent sums.
    pub fn multidegree_of(&self, exps: &[u32]) -> MultiDegree {
        MultiDegree(
            (0..self.blocks.len())
                .map(|i| self.block_range(i).map(|v| exps[v] as i64).sum())
                .collect(),
        )
    }

    pub fn var_name(&self, var: usize) -> String {
        if self.is_standard() {
            format!("x{}", var + 1)
        } else {
            let b = self.block_of(var);
            let j = var - self.block_range(b).start;
            format!("x{}_{}", b + 1, j + 1)
        }
    }

    pub fn render(&self, m: &Monomial) -> String {
        if m.degree() == 0 {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (v, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.var_name(v)),
                e => parts.push(format!("{}^{}", self.var_name(v), e)),
            }
        }
        parts.join("*")
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    pub fn var(&self, v: usize) -> Monomial {
        Monomial::var(self.nvars(), v)
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Result<Monomial> {
        if exps.len() != self.nvars() {
            return Err(Error::VariableCount {
                expected: self.nvars(),
                got: exps.len(),
            });
        }
        Ok(Monomial::new(exps))
    }
}

/// A degree vector in Z^d; compared componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn new(v: Vec<i64>) -> Self {
        Self(v)
    }

    pub fn single(j: i64) -> Self {
        Self(vec![j])
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// The all-ones vector `e_1 + ... + e_d`.
    pub fn ones(d: usize) -> Self {
        Self(vec![1; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn min_entry(&self) -> i64 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> MultiDegree {
        MultiDegree(self.0.iter().map(|a| a * k).collect())
    }

    /// All vectors `0 <= v <= self` in lexicographic order.
    pub fn box_below(&self) -> Vec<MultiDegree> {
        if !self.is_nonnegative() {
            return Vec::new();
        }
        let mut out = vec![Vec::new()];
        for &hi in &self.0 {
            let mut next = Vec::new();
            for prefix in &out {
                for a in 0..=hi {
                    let mut p = prefix.clone();
                    p.push(a);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiDegree).collect()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// A monomial, stored as its exponent vector.
///
/// `Ord` is the graded lexicographic order with the first variable largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    pub fn one(n: usize) -> Self {
        Self { exps: vec![0; n] }
    }

    pub fn var(n: usize, v: usize) -> Self {
        let mut exps = vec![0; n];
        exps[v] = 1;
        Self { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_var(&self, v: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[v] += 1;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Smallest index of a variable dividing the monomial.
    pub fn min_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Largest index of a variable dividing the monomial.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of length `n` with entries summing to `d`,
/// listed from the largest monomial to the smallest.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if pos + 1 == n {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// Binomial coefficient as u64 (saturating).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x2 = Monomial::new(vec![2, 0]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x = Monomial::new(vec![1, 0]);
        assert!(x2 > xy && xy > y2 && y2 > x);
    }

    #[test]
    fn exponent_vectors_descend() {
        let v = exponent_vectors(2, 2);
        assert_eq!(v, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(exponent_vectors(3, 4).len(), 15);
        assert_eq!(exponent_vectors(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn block_bookkeeping() {
        let r = RingConfig::new(vec![2, 3]).unwrap();
        assert_eq!(r.nvars(), 5);
        assert_eq!(r.block_range(1), 2..5);
        assert_eq!(r.block_of(4), 1);
        assert_eq!(r.multidegree_of(&[1, 0, 2, 0, 1]), MultiDegree(vec![1, 3]));
        assert_eq!(r.var_name(3), "x2_2");
        assert!(RingConfig::new(vec![]).is_err());
        assert!(RingConfig::new(vec![2, 0]).is_err());
    }

    #[test]
    fn render_monomials() {
        let r = RingConfig::standard(3).unwrap();
        assert_eq!(r.render(&Monomial::new(vec![2, 0, 1])), "x1^2*x3");
        assert_eq!(r.render(&r.one()), "1");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(10, 0), 1);
    }
}
