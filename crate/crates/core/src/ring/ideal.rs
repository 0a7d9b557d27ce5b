use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::{exponent_vectors, Monomial, MultiDegree, RingConfig};
use crate::error::{Error, Result};

/// A monomial ideal given by its minimal generators.
///
/// Generators are minimalized and sorted from the largest to the smallest in
/// the graded lexicographic order, so `gens()[0]` is `u_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialIdeal {
    ring: RingConfig,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(ring: RingConfig, gens: Vec<Monomial>) -> Result<Self> {
        let n = ring.nvars();
        for g in &gens {
            if g.nvars() != n {
                return Err(Error::VariableCount {
                    expected: n,
                    got: g.nvars(),
                });
            }
        }
        if gens.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        if gens.iter().any(|g| g.is_one()) {
            return Err(Error::UnitIdeal);
        }
        Ok(Self {
            ring,
            gens: minimalize(gens),
        })
    }

    pub fn from_exponents(ring: RingConfig, gens: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(ring, gens.into_iter().map(Monomial::new).collect())
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn contains_exps(&self, exps: &[u32]) -> bool {
        self.gens.iter().any(|g| g.exps().iter().zip(exps).all(|(a, b)| a <= b))
    }

    /// Position of `m` in the generator list.
    pub fn generator_index(&self, m: &Monomial) -> Option<usize> {
        self.gens.iter().position(|g| g == m)
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree()).min().unwrap_or(0)
    }

    pub fn generator_multidegree(&self, k: usize) -> MultiDegree {
        self.ring.multidegree_of(self.gens[k].exps())
    }

    /// Common multidegree of all generators, if any.
    pub fn equigenerated_multidegree(&self) -> Option<MultiDegree> {
        let first = self.generator_multidegree(0);
        (1..self.gens.len())
            .all(|k| self.generator_multidegree(k) == first)
            .then_some(first)
    }

    /// The ideal generated by all products of pairs of generators.
    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.ring != other.ring {
            return Err(Error::InvalidArgument("ideals live in different rings".into()));
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        MonomialIdeal::new(self.ring.clone(), gens)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| self.ring.render(g)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Drops duplicates and non-minimal elements; sorts largest first.
fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    // ascending degree: any divisor of g appears before g
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    kept
}

/// The ideal `m^c = m_1^{c_1} ... m_d^{c_d}` of a block-graded ring.
pub fn power_ideal(ring: &RingConfig, c: &MultiDegree) -> Result<MonomialIdeal> {
    if c.len() != ring.num_blocks() {
        return Err(Error::DegreeMismatch(format!(
            "power vector has {} entries for {} blocks",
            c.len(),
            ring.num_blocks()
        )));
    }
    if !c.is_nonnegative() || c.total() == 0 {
        return Err(Error::ZeroDegree);
    }
    let gens = component_basis(ring, c);
    MonomialIdeal::new(ring.clone(), gens)
}

/// All monomials of multidegree `alpha`, largest first. Empty when `alpha` has a
/// negative entry.
pub fn component_basis(ring: &RingConfig, alpha: &MultiDegree) -> Vec<Monomial> {
    component_exponents(ring, alpha)
        .into_iter()
        .map(Monomial::new)
        .collect()
}

/// Exponent vectors of [`component_basis`].
pub fn component_exponents(ring: &RingConfig, alpha: &MultiDegree) -> Vec<Vec<u32>> {
    if alpha.len() != ring.num_blocks() || !alpha.is_nonnegative() {
        return Vec::new();
    }
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (b, &m) in ring.blocks().iter().enumerate() {
        let parts = exponent_vectors(m, alpha.0[b] as u32);
        let mut next = Vec::with_capacity(out.len() * parts.len());
        for prefix in &out {
            for p in &parts {
                let mut v = prefix.clone();
                v.extend_from_slice(p);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Number of monomials of multidegree `alpha`.
pub fn component_dim(ring: &RingConfig, alpha: &MultiDegree) -> u64 {
    if alpha.len() != ring.num_blocks() || !alpha.is_nonnegative() {
        return 0;
    }
    ring.blocks()
        .iter()
        .zip(&alpha.0)
        .map(|(&m, &a)| super::monomial::binomial(a as u64 + m as u64 - 1, m as u64 - 1))
        .product()
}

/// Whether `u x_j / x_i` lies in the ideal for every generator `u`, every
/// `x_i | u` and every `j < i`.
pub fn is_strongly_stable(ideal: &MonomialIdeal) -> Result<bool> {
    let ring = ideal.ring();
    if !ring.is_standard() {
        return Err(Error::Multigraded(ring.num_blocks()));
    }
    for u in ideal.gens() {
        for i in u.support().collect::<Vec<_>>() {
            for j in 0..i {
                if !ideal.contains(&exchange(u, i, j)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn exchange(u: &Monomial, from: usize, to: usize) -> Monomial {
    let mut e = u.exps().to_vec();
    e[from] -= 1;
    e[to] += 1;
    Monomial::new(e)
}

/// The smallest strongly stable ideal containing the seed monomials.
pub fn borel_closure(ring: &RingConfig, seed: &[Monomial]) -> Result<MonomialIdeal> {
    if !ring.is_standard() {
        return Err(Error::Multigraded(ring.num_blocks()));
    }
    let mut seen: HashSet<Monomial> = seed.iter().cloned().collect();
    let mut stack: Vec<Monomial> = seed.to_vec();
    while let Some(u) = stack.pop() {
        for i in u.support().collect::<Vec<_>>() {
            for j in 0..i {
                let v = exchange(&u, i, j);
                if seen.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
    }
    MonomialIdeal::new(ring.clone(), seen.into_iter().collect())
}

/// `dim_K [S/I]_alpha`: monomials of multidegree `alpha` outside the ideal.
pub fn quotient_component_dim(ideal: &MonomialIdeal, alpha: &MultiDegree) -> usize {
    component_exponents(ideal.ring(), alpha)
        .iter()
        .filter(|e| !ideal.contains_exps(e))
        .count()
}

/// Krull dimension of `S/I`: the largest set `Y` of variables such that every
/// generator involves a variable outside `Y`. Exhaustive over subsets.
pub fn monomial_quotient_dim(ideal: &MonomialIdeal) -> usize {
    let n = ideal.ring().nvars();
    assert!(n < 32, "subset search limited to fewer than 32 variables");
    let supports: Vec<u32> = ideal
        .gens()
        .iter()
        .map(|g| g.support().fold(0u32, |acc, v| acc | (1 << v)))
        .collect();
    let mut best = 0;
    for y in 0u32..(1 << n) {
        let size = y.count_ones() as usize;
        if size <= best {
            continue;
        }
        // every generator must have support outside y
        if supports.iter().all(|&s| s & !y != 0) {
            best = size;
        }
    }
    best
}

/// Whether every monomial of total degree `k` lies in the ideal.
pub fn power_containment(ideal: &MonomialIdeal, k: u32) -> bool {
    exponent_vectors(ideal.ring().nvars(), k)
        .iter()
        .all(|e| ideal.contains_exps(e))
}

/// Smallest `k` with `m^k ⊆ I`, or `None` when `S/I` is not artinian.
pub fn artinian_exponent(ideal: &MonomialIdeal) -> Option<u32> {
    let n = ideal.ring().nvars();
    // pure powers x_v^{a_v} must be present; then m^{sum(a_v - 1) + 1} ⊆ I
    let mut pure = vec![None; n];
    for g in ideal.gens() {
        let supp: Vec<usize> = g.support().collect();
        if supp.len() == 1 {
            let v = supp[0];
            let e = g.exps()[v];
            pure[v] = Some(pure[v].map_or(e, |p: u32| p.min(e)));
        }
    }
    if pure.iter().any(|p| p.is_none()) {
        return None;
    }
    let upper: u32 = pure.iter().map(|p| p.unwrap() - 1).sum::<u32>() + 1;
    let mut k = ideal.min_degree();
    while k < upper {
        if power_containment(ideal, k) {
            return Some(k);
        }
        k += 1;
    }
    Some(upper)
}

/// JSON description of an ideal: explicit generators or a power of the
/// maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpec {
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<Vec<i64>>,
}

impl IdealSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<MonomialIdeal> {
        let ring = RingConfig::new(self.blocks.clone())?;
        match (&self.generators, &self.power) {
            (Some(g), None) => MonomialIdeal::from_exponents(ring, g.clone()),
            (None, Some(c)) => power_ideal(&ring, &MultiDegree(c.clone())),
            _ => Err(Error::Parse(
                "exactly one of \"generators\" and \"power\" must be given".into(),
            )),
        }
    }

    pub fn of(ideal: &MonomialIdeal) -> Self {
        Self {
            blocks: ideal.ring().blocks().to_vec(),
            generators: Some(ideal.gens().iter().map(|g| g.exps().to_vec()).collect()),
            power: None,
        }
    }
}

/// Distinct lcms of all nonempty generator subsets, by closure under
/// `lcm` with single generators.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> BTreeSet<Vec<u32>> {
    let gens = ideal.gens();
    let mut out: BTreeSet<Vec<u32>> = gens.iter().map(|g| g.exps().to_vec()).collect();
    let mut frontier: Vec<Monomial> = gens.to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let l = m.lcm(g);
                if out.insert(l.exps().to_vec()) {
                    next.push(l);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Distinct lcms of all generator subsets of the given size.
pub fn subset_lcms(ideal: &MonomialIdeal, size: usize) -> BTreeSet<Vec<u32>> {
    let gens = ideal.gens();
    let mut out = BTreeSet::new();
    let mut idx: Vec<usize> = Vec::new();
    fn rec(
        gens: &[Monomial],
        start: usize,
        size: usize,
        acc: Option<Monomial>,
        idx: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        if idx.len() == size {
            if let Some(a) = acc {
                out.insert(a.exps().to_vec());
            }
            return;
        }
        for k in start..gens.len() {
            let next = match &acc {
                None => gens[k].clone(),
                Some(a) => a.lcm(&gens[k]),
            };
            idx.push(k);
            rec(gens, k + 1, size, Some(next), idx, out);
            idx.pop();
        }
    }
    if size > 0 {
        rec(gens, 0, size, None, &mut idx, &mut out);
    }
    out
}
