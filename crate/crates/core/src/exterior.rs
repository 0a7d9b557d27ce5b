//! Exterior-algebra bookkeeping for Koszul complexes of monomial ideals.
//!
//! An element of `K_t(I, S) = Λ^t F ⊗ S` is a [`KoszulChain`]: a sparse sum of
//! terms `c · e_T ⊗ w`, where `T` is a `t`-subset of the generator indices of
//! `I` and `w` a monomial. The basis vector `e_{i}` of `F` has the degree of the
//! `i`-th generator `u_i`, so a term has fine degree `Σ_{i∈T} u_i + w` and
//! every map here is homogeneous of degree zero.
//!
//! Generator indices are 0-based internally and shown 1-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{binomial, Monomial, MonomialIdeal, MultiDegree};
use crate::scalars::{Field, Rationals};

/// Largest number of ideal generators an [`IndexSet`] can address.
pub const MAX_GENERATORS: usize = 64;

/// A subset of generator indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(k: usize) -> Self {
        assert!(k < MAX_GENERATORS);
        Self(1 << k)
    }

    /// From 0-based indices; duplicates are rejected.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &k in indices {
            if k >= MAX_GENERATORS {
                return Err(Error::IndexOutOfRange {
                    index: k + 1,
                    max: MAX_GENERATORS,
                });
            }
            if bits & (1 << k) != 0 {
                return Err(Error::InvalidArgument(format!("index {} repeated", k + 1)));
            }
            bits |= 1 << k;
        }
        Ok(Self(bits))
    }

    /// From 1-based indices, each in `1..=r`.
    pub fn from_one_based(indices: &[usize], r: usize) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > r {
                return Err(Error::IndexOutOfRange { index: i, max: r });
            }
            zero_based.push(i - 1);
        }
        Self::from_indices(&zero_based)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, k: usize) -> bool {
        k < MAX_GENERATORS && self.0 & (1 << k) != 0
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn insert(self, k: usize) -> IndexSet {
        IndexSet(self.0 | (1 << k))
    }

    pub fn remove(self, k: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << k))
    }

    /// Elements in increasing order (0-based).
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(k)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements strictly greater than `k`.
    fn count_above(self, k: usize) -> u32 {
        if k + 1 >= 64 {
            0
        } else {
            (self.0 >> (k + 1)).count_ones()
        }
    }

    /// All `size`-subsets of `{0, .., r-1}` in lexicographic order.
    pub fn subsets(r: usize, size: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        fn rec(start: usize, r: usize, left: usize, acc: u64, out: &mut Vec<IndexSet>) {
            if left == 0 {
                out.push(IndexSet(acc));
                return;
            }
            for k in start..=r.saturating_sub(left) {
                if r - k < left {
                    break;
                }
                rec(k + 1, r, left - 1, acc | (1 << k), out);
            }
        }
        if size <= r {
            rec(0, r, size, 0, &mut out);
        }
        out
    }
}

impl Ord for IndexSet {
    /// Lexicographic on the increasing element sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `σ(A, B) = (-1)^{#{(a, b) ∈ A × B : a > b}}`, so that `e_A e_B = σ(A, B) e_{A∪B}`.
pub fn sign(a: IndexSet, b: IndexSet) -> Result<i8> {
    if !a.is_disjoint(b) {
        return Err(Error::OverlappingIndexSets);
    }
    Ok(sign_unchecked(a, b))
}

pub(crate) fn sign_unchecked(a: IndexSet, b: IndexSet) -> i8 {
    let inversions: u32 = b.iter().map(|k| a.count_above(k)).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign and index set of the bracket `[v_1, ..., v_t]` of ideal generators,
/// i.e. `e_{k_1} ∧ ... ∧ e_{k_t}` where `v_j = u_{k_j}`; `None` when a
/// generator repeats.
pub fn bracket(ideal: &MonomialIdeal, entries: &[Monomial]) -> Result<Option<(IndexSet, i8)>> {
    let mut idx = Vec::with_capacity(entries.len());
    for v in entries {
        match ideal.generator_index(v) {
            Some(k) => idx.push(k),
            None => return Err(Error::NotAGenerator(ideal.ring().render(v))),
        }
    }
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    // parity of the sorting permutation
    let mut inversions = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    let set = IndexSet::from_indices(&idx)?;
    Ok(Some((set, if inversions % 2 == 0 { 1 } else { -1 })))
}

type Key = (IndexSet, Monomial);

/// A sparse element `Σ c · e_T ⊗ w` of `K_t(I, S)`.
#[derive(Clone)]
pub struct KoszulChain<F: Field = Rationals> {
    field: F,
    ideal: Arc<MonomialIdeal>,
    degree: usize,
    terms: BTreeMap<Key, F::Elem>,
}

impl<F: Field> PartialEq for KoszulChain<F> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.terms == other.terms && same_ideal(&self.ideal, &other.ideal)
    }
}

impl<F: Field> fmt::Debug for KoszulChain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KoszulChain[t={}]({})", self.degree, self.render())
    }
}

fn same_ideal(a: &Arc<MonomialIdeal>, b: &Arc<MonomialIdeal>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<F: Field> KoszulChain<F> {
    pub fn zero(field: F, ideal: Arc<MonomialIdeal>, degree: usize) -> Self {
        Self {
            field,
            ideal,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The single term `e_T ⊗ w`.
    pub fn basis(field: F, ideal: Arc<MonomialIdeal>, set: IndexSet, w: Monomial) -> Result<Self> {
        let one = field.one();
        let mut c = Self::zero(field, ideal, set.len());
        c.add_term(set, w, one)?;
        Ok(c)
    }

    /// `w` viewed as an element of `K_0 = S`.
    pub fn ring_element(field: F, ideal: Arc<MonomialIdeal>, w: Monomial) -> Self {
        Self::basis(field, ideal, IndexSet::EMPTY, w).expect("empty set always fits")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ideal(&self) -> &Arc<MonomialIdeal> {
        &self.ideal
    }

    /// Homological degree `t`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Monomial, &F::Elem)> {
        self.terms.iter().map(|((s, w), c)| (s, w, c))
    }

    pub fn coefficient(&self, set: IndexSet, w: &Monomial) -> F::Elem {
        self.terms
            .get(&(set, w.clone()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c · e_T ⊗ w`.
    pub fn add_term(&mut self, set: IndexSet, w: Monomial, c: F::Elem) -> Result<()> {
        if set.len() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "index set {set} in a chain of homological degree {}",
                self.degree
            )));
        }
        let r = self.ideal.num_gens();
        if let Some(top) = set.iter().last() {
            if top >= r {
                return Err(Error::IndexOutOfRange { index: top + 1, max: r });
            }
        }
        if w.nvars() != self.ideal.ring().nvars() {
            return Err(Error::VariableCount {
                expected: self.ideal.ring().nvars(),
                got: w.nvars(),
            });
        }
        self.add_term_unchecked(set, w, c);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, set: IndexSet, w: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((set, w)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_ideal(&self.ideal, &other.ideal) {
            return Err(Error::IdealMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "adding chains of homological degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for ((s, w), c) in &other.terms {
            out.add_term_unchecked(*s, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.ideal.clone(), self.degree);
        if self.field.is_zero(c) {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), self.field.mul(c, v));
        }
        out
    }

    /// Multiplies every term by the monomial `m`.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.field.clone(), self.ideal.clone(), self.degree);
        for ((s, w), c) in &self.terms {
            out.terms.insert((*s, w.mul(m)), c.clone());
        }
        out
    }

    /// Fine (Z^n) degree of a term.
    pub fn term_fine_degree(&self, set: IndexSet, w: &Monomial) -> Vec<u32> {
        let gens = self.ideal.gens();
        let mut e = w.exps().to_vec();
        for k in set.iter() {
            for (a, b) in e.iter_mut().zip(gens[k].exps()) {
                *a += b;
            }
        }
        e
    }

    /// The common fine degree of all terms, if there is one (`None` for zero).
    pub fn fine_degree(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys().map(|(s, w)| self.term_fine_degree(*s, w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits the chain into fine-homogeneous parts, ordered by fine degree.
    pub fn fine_components(&self) -> Vec<KoszulChain<F>> {
        let mut parts: BTreeMap<Vec<u32>, KoszulChain<F>> = BTreeMap::new();
        for ((s, w), c) in &self.terms {
            parts
                .entry(self.term_fine_degree(*s, w))
                .or_insert_with(|| Self::zero(self.field.clone(), self.ideal.clone(), self.degree))
                .terms
                .insert((*s, w.clone()), c.clone());
        }
        parts.into_values().collect()
    }

    /// The common block multidegree of all terms, if there is one.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let ring = self.ideal.ring();
        let mut it = self
            .terms
            .keys()
            .map(|(s, w)| ring.multidegree_of(&self.term_fine_degree(*s, w)));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.multidegree().map(|d| d.total())
    }

    /// Whether all terms share one internal multidegree (true for zero).
    pub fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.multidegree().is_some()
    }

    /// The Koszul differential `φ(e_T ⊗ w) = Σ_k (-1)^{k-1} e_{T∖i_k} ⊗ u_{i_k} w`.
    pub fn boundary(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument(
                "the differential starts in homological degree 1".into(),
            ));
        }
        let gens = self.ideal.gens();
        let mut out = Self::zero(self.field.clone(), self.ideal.clone(), self.degree - 1);
        for ((s, w), c) in &self.terms {
            for (pos, k) in s.iter().enumerate() {
                let coeff = if pos % 2 == 0 { c.clone() } else { self.field.neg(c) };
                out.add_term_unchecked(s.remove(k), gens[k].mul(w), coeff);
            }
        }
        Ok(out)
    }

    pub fn is_cycle(&self) -> bool {
        self.degree == 0 || self.boundary().map(|b| b.is_zero()).unwrap_or(false)
    }

    /// The exterior product `a.f`, extending `e_A ⊗ v . e_B ⊗ w = σ(A,B) e_{A∪B} ⊗ vw`.
    pub fn wedge(&self, f: &Self) -> Result<Self> {
        self.check_compatible(f)?;
        let mut out = Self::zero(self.field.clone(), self.ideal.clone(), self.degree + f.degree);
        if self.degree + f.degree > self.ideal.num_gens() {
            return Ok(out);
        }
        for ((a, v), c) in &self.terms {
            for ((b, w), d) in &f.terms {
                if !a.is_disjoint(*b) {
                    continue;
                }
                let mut coeff = self.field.mul(c, d);
                if sign_unchecked(*a, *b) < 0 {
                    coeff = self.field.neg(&coeff);
                }
                out.add_term_unchecked(a.union(*b), v.mul(w), coeff);
            }
        }
        Ok(out)
    }

    /// The unique decomposition `f = a + e_I.b`: no `e_J` with `J ⊇ I` appears in
    /// `a`, and no `e_S` meeting `I` appears in `b`.
    pub fn decompose(&self, set: IndexSet) -> Result<(Self, Self)> {
        if set.len() > self.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot split {} indices off a chain of degree {}",
                set.len(),
                self.degree
            )));
        }
        let mut a = Self::zero(self.field.clone(), self.ideal.clone(), self.degree);
        let mut b = Self::zero(self.field.clone(), self.ideal.clone(), self.degree - set.len());
        for ((s, w), c) in &self.terms {
            if set.is_subset(*s) {
                let rest = s.difference(set);
                // e_I . e_rest = σ(I, rest) e_S
                let coeff = if sign_unchecked(set, rest) < 0 {
                    self.field.neg(c)
                } else {
                    c.clone()
                };
                b.terms.insert((rest, w.clone()), coeff);
            } else {
                a.terms.insert((*s, w.clone()), c.clone());
            }
        }
        Ok((a, b))
    }

    /// `γ(f) = Σ_I e_I ⊗ b_I` over all `s`-subsets `I`, with `b_I` from
    /// [`KoszulChain::decompose`].
    pub fn gamma_map(&self, s: usize) -> Result<TensorChain<F>> {
        if s > self.degree {
            return Err(Error::DegreeMismatch(format!(
                "outer degree {s} exceeds chain degree {}",
                self.degree
            )));
        }
        let mut out = TensorChain::zero(self.field.clone(), self.ideal.clone(), s, self.degree - s);
        // only subsets of term index sets contribute
        let mut outer_sets: Vec<IndexSet> = Vec::new();
        for (t, _) in self.terms.keys() {
            for sub in subsets_of(*t, s) {
                outer_sets.push(sub);
            }
        }
        outer_sets.sort();
        outer_sets.dedup();
        for set in outer_sets {
            let (_, b) = self.decompose(set)?;
            out.add_component(set, b)?;
        }
        Ok(out)
    }

    /// Canonical rendering `c * [u_i1, ..., u_it] * w`, one entry per term.
    pub fn render_terms(&self) -> Vec<String> {
        let ring = self.ideal.ring();
        let gens = self.ideal.gens();
        self.terms
            .iter()
            .map(|((s, w), c)| {
                let bracket: Vec<String> = s.iter().map(|k| ring.render(&gens[k])).collect();
                format!(
                    "{} * [{}] * {}",
                    self.field.render(c),
                    bracket.join(", "),
                    ring.render(w)
                )
            })
            .collect()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            "0".into()
        } else {
            self.render_terms().join(" + ")
        }
    }
}

/// All `size`-subsets of `set`.
pub(crate) fn subsets_of(set: IndexSet, size: usize) -> Vec<IndexSet> {
    let elems = set.to_vec();
    IndexSet::subsets(elems.len(), size)
        .into_iter()
        .map(|sub| IndexSet(sub.iter().fold(0u64, |acc, i| acc | (1 << elems[i]))))
        .collect()
}

/// An element `Σ e_I ⊗ b_I` of `K_s(φ, K_t(φ, S))`.
#[derive(Clone)]
pub struct TensorChain<F: Field = Rationals> {
    field: F,
    ideal: Arc<MonomialIdeal>,
    outer: usize,
    inner: usize,
    components: BTreeMap<IndexSet, KoszulChain<F>>,
}

impl<F: Field> PartialEq for TensorChain<F> {
    fn eq(&self, other: &Self) -> bool {
        self.outer == other.outer && self.inner == other.inner && self.components == other.components
    }
}

impl<F: Field> fmt::Debug for TensorChain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(s, b)| format!("e{s} ⊗ ({})", b.render()))
            .collect();
        write!(f, "TensorChain[{},{}]({})", self.outer, self.inner, parts.join(" + "))
    }
}

impl<F: Field> TensorChain<F> {
    pub fn zero(field: F, ideal: Arc<MonomialIdeal>, outer: usize, inner: usize) -> Self {
        Self {
            field,
            ideal,
            outer,
            inner,
            components: BTreeMap::new(),
        }
    }

    pub fn outer_degree(&self) -> usize {
        self.outer
    }

    pub fn inner_degree(&self) -> usize {
        self.inner
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &KoszulChain<F>)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Adds `e_I ⊗ b`.
    pub fn add_component(&mut self, set: IndexSet, b: KoszulChain<F>) -> Result<()> {
        if set.len() != self.outer || b.degree() != self.inner {
            return Err(Error::DegreeMismatch(format!(
                "component e{set} ⊗ (degree {}) in K_{}(K_{})",
                b.degree(),
                self.outer,
                self.inner
            )));
        }
        if !same_ideal(&self.ideal, b.ideal()) {
            return Err(Error::IdealMismatch);
        }
        let merged = match self.components.remove(&set) {
            Some(old) => old.add(&b)?,
            None => b,
        };
        if !merged.is_zero() {
            self.components.insert(set, merged);
        }
        Ok(())
    }

    /// Differential of the outer Koszul complex with coefficients in `K_t`:
    /// `e_I ⊗ b ↦ Σ_k (-1)^{k-1} e_{I∖i_k} ⊗ u_{i_k} b`.
    pub fn outer_boundary(&self) -> Result<Self> {
        if self.outer == 0 {
            return Err(Error::InvalidArgument(
                "the differential starts in homological degree 1".into(),
            ));
        }
        let gens = self.ideal.gens();
        let mut out = Self::zero(self.field.clone(), self.ideal.clone(), self.outer - 1, self.inner);
        for (set, b) in &self.components {
            for (pos, k) in set.iter().enumerate() {
                let mut term = b.mul_monomial(&gens[k]);
                if pos % 2 == 1 {
                    term = term.neg();
                }
                out.add_component(set.remove(k), term)?;
            }
        }
        Ok(out)
    }

    /// Inner differential `e_I ⊗ b ↦ e_I ⊗ φ(b)`.
    pub fn inner_boundary(&self) -> Result<Self> {
        let mut out = Self::zero(
            self.field.clone(),
            self.ideal.clone(),
            self.outer,
            self.inner
                .checked_sub(1)
                .ok_or_else(|| Error::InvalidArgument("the differential starts in homological degree 1".into()))?,
        );
        for (set, b) in &self.components {
            out.add_component(*set, b.boundary()?)?;
        }
        Ok(out)
    }

    /// The multiplication map `Σ e_I ⊗ b_I ↦ Σ e_I . b_I`.
    pub fn alpha_map(&self) -> Result<KoszulChain<F>> {
        let mut out = KoszulChain::zero(self.field.clone(), self.ideal.clone(), self.outer + self.inner);
        for (set, b) in &self.components {
            let e = KoszulChain::basis(self.field.clone(), self.ideal.clone(), *set, self.ideal.ring().one())?;
            out = out.add(&e.wedge(b)?)?;
        }
        Ok(out)
    }
}

/// `C(t+s, s)` as a field element.
pub fn binomial_scalar<F: Field>(field: &F, t: usize, s: usize) -> F::Elem {
    let b = binomial((t + s) as u64, s as u64);
    let mut acc = field.zero();
    // fold in chunks to stay within i64
    let mut left = b;
    let chunk = i64::MAX as u64;
    while left > 0 {
        let step = left.min(chunk);
        acc = field.add(&acc, &field.from_i64(step as i64));
        left -= step;
    }
    acc
}
