//! Graded subquotients `N/P` of free modules and their Betti numbers.
//!
//! `Tor_i(M, K)_β` is the homology of the Koszul complex on the variables with
//! coefficients in `M`: in fine degree `β` its `i`-th term is
//! `⊕_{|V| = i} e_V ⊗ M_{β - e_V}` with `V` a set of variables.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::exterior::IndexSet;
use crate::linalg::{EchelonBasis, SparseVec};
use crate::ring::{component_exponents, MonomialIdeal, MultiDegree};
use crate::scalars::Field;

use super::betti::BettiTable;
use super::free::{position, FreeModule, ModuleMap};

/// A homogeneous element of a free module: `Σ c_g · g ⊗ x^{degree - shift(g)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F: Field> {
    pub degree: Vec<u32>,
    /// `(generator, coefficient)`, increasing in the generator.
    pub coords: Vec<(usize, F::Elem)>,
}

impl<F: Field> Element<F> {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.degree.iter().map(|&e| e as i64).sum()
    }
}

/// A graded submodule of a free module, described by how to compute it in
/// each degree.
#[derive(Clone, Debug)]
pub enum Submodule<F: Field> {
    Full,
    Zero,
    /// Kernel of a map out of the ambient module.
    Kernel(Arc<ModuleMap>),
    /// Image of a map into the ambient module.
    Image(Arc<ModuleMap>),
    /// `⊕_g J·g`: basis vectors whose monomial lies in `J`.
    Multiples(Arc<MonomialIdeal>),
    /// Submodule generated by homogeneous elements.
    Span(Arc<Vec<Element<F>>>),
    Sum(Vec<Submodule<F>>),
}

struct Piece<E> {
    num: Arc<Vec<SparseVec<E>>>,
    den: Arc<Vec<SparseVec<E>>>,
}

impl<E> Clone for Piece<E> {
    fn clone(&self) -> Self {
        Self {
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }
}

/// The graded module `N/P` inside a free module, computed lazily per fine
/// degree and cached.
pub struct GradedModule<F: Field> {
    field: F,
    ambient: Arc<FreeModule>,
    num: Submodule<F>,
    den: Submodule<F>,
    window: Option<(i64, i64)>,
    pieces: Mutex<HashMap<Vec<u32>, Piece<F::Elem>>>,
    ranks: Mutex<HashMap<(usize, Vec<u32>), usize>>,
}

/// A nonzero `Tor_i(M, K)_j` attaining the regularity.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TorWitness {
    pub i: usize,
    pub j: i64,
    pub dim: u64,
}

/// Outcome of [`GradedModule::reg_scan`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RegScan {
    /// `max (j - i)` over nonzero Tor found; `None` if nothing was found.
    pub reg: Option<i64>,
    pub witnesses: Vec<TorWitness>,
    pub cap: i64,
    /// True when a caller-supplied vanishing bound lies inside the window.
    pub certified: bool,
    pub table: BettiTable,
}

impl<F: Field> GradedModule<F> {
    pub fn new(field: F, ambient: Arc<FreeModule>, num: Submodule<F>, den: Submodule<F>) -> Result<Self> {
        for sub in [&num, &den] {
            check_sub(&ambient, sub)?;
        }
        Ok(Self {
            field,
            ambient,
            num,
            den,
            window: None,
            pieces: Mutex::new(HashMap::new()),
            ranks: Mutex::new(HashMap::new()),
        })
    }

    /// The free module itself.
    pub fn free(field: F, ambient: Arc<FreeModule>) -> Self {
        Self::new(field, ambient, Submodule::Full, Submodule::Zero).expect("full module is valid")
    }

    /// Restricts the module to total degrees `lo..=hi`; Tor queries needing
    /// anything outside fail with [`Error::InsufficientWindow`].
    pub fn with_window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient(&self) -> &Arc<FreeModule> {
        &self.ambient
    }

    pub fn nvars(&self) -> usize {
        self.ambient.ring().nvars()
    }

    fn piece(&self, beta: &[u32]) -> Piece<F::Elem> {
        if let Some(p) = self.pieces.lock().unwrap().get(beta) {
            return p.clone();
        }
        let num = Arc::new(self.subspace(&self.num, beta));
        let den = if matches!(self.den, Submodule::Zero) {
            Arc::new(Vec::new())
        } else {
            Arc::new(self.subspace(&self.den, beta))
        };
        let p = Piece { num, den };
        self.pieces.lock().unwrap().insert(beta.to_vec(), p.clone());
        p
    }

    /// A basis of the numerator in degree `beta`, in ambient coordinates.
    pub fn numerator_basis(&self, beta: &[u32]) -> Arc<Vec<SparseVec<F::Elem>>> {
        self.piece(beta).num
    }

    pub fn denominator_basis(&self, beta: &[u32]) -> Arc<Vec<SparseVec<F::Elem>>> {
        self.piece(beta).den
    }

    /// `dim M_β`.
    pub fn dim_at(&self, beta: &[u32]) -> usize {
        let p = self.piece(beta);
        p.num.len() - p.den.len()
    }

    /// `dim M_α` for a block multidegree `α`.
    pub fn dim(&self, alpha: &MultiDegree) -> usize {
        component_exponents(self.ambient.ring(), alpha)
            .iter()
            .map(|b| self.dim_at(b))
            .sum()
    }

    fn subspace(&self, sub: &Submodule<F>, beta: &[u32]) -> Vec<SparseVec<F::Elem>> {
        let field = &self.field;
        let basis = self.ambient.basis_at(beta);
        match sub {
            Submodule::Full => (0..basis.len()).map(|k| vec![(k, field.one())]).collect(),
            Submodule::Zero => Vec::new(),
            Submodule::Kernel(map) => map.matrix_at(field, beta).kernel_basis(),
            Submodule::Image(map) => {
                let m = map.matrix_at(field, beta).transpose();
                let mut e = EchelonBasis::new(field.clone(), basis.len());
                for row in m.rows() {
                    e.insert(row.clone());
                }
                e.rows().to_vec()
            }
            Submodule::Multiples(j) => basis
                .iter()
                .enumerate()
                .filter(|(_, &g)| {
                    let s = self.ambient.shift(g).exps();
                    let w: Vec<u32> = beta.iter().zip(s).map(|(b, a)| b - a).collect();
                    j.contains_exps(&w)
                })
                .map(|(k, _)| vec![(k, field.one())])
                .collect(),
            Submodule::Span(_) | Submodule::Sum(_) => {
                let mut e = EchelonBasis::new(field.clone(), basis.len());
                self.insert_generated(sub, beta, &basis, &mut e);
                e.rows().to_vec()
            }
        }
    }

    fn insert_generated(&self, sub: &Submodule<F>, beta: &[u32], basis: &[usize], e: &mut EchelonBasis<F>) {
        match sub {
            Submodule::Span(elems) => {
                for el in elems.iter() {
                    if let Some(v) = self.multiply_into(el, beta, basis) {
                        e.insert(v);
                    }
                }
            }
            Submodule::Sum(parts) => {
                for part in parts {
                    self.insert_generated(part, beta, basis, e);
                }
            }
            other => {
                for v in self.subspace(other, beta) {
                    e.insert(v);
                }
            }
        }
    }

    /// Coordinates of `x^{β - deg(el)} · el` in degree `beta`.
    fn multiply_into(&self, el: &Element<F>, beta: &[u32], basis: &[usize]) -> Option<SparseVec<F::Elem>> {
        if el.degree.iter().zip(beta).any(|(a, b)| a > b) {
            return None;
        }
        let v: SparseVec<F::Elem> = el
            .coords
            .iter()
            .filter_map(|(g, c)| position(basis, *g).map(|k| (k, c.clone())))
            .collect();
        (!v.is_empty()).then_some(v)
    }

    /// Rank of the variables-Koszul differential `C_i → C_{i-1}` on `M` in
    /// fine degree `beta`.
    fn koszul_rank(&self, i: usize, beta: &[u32]) -> usize {
        let n = self.nvars();
        if i == 0 || i > n {
            return 0;
        }
        let key = (i, beta.to_vec());
        if let Some(&r) = self.ranks.lock().unwrap().get(&key) {
            return r;
        }
        let field = &self.field;
        // target blocks: sets of size i - 1
        let targets: Vec<(IndexSet, Vec<u32>, Vec<usize>)> = IndexSet::subsets(n, i - 1)
            .into_iter()
            .filter_map(|v| shifted(beta, v).map(|g| (v, g)))
            .map(|(v, g)| {
                let basis = self.ambient.basis_at(&g);
                (v, g, basis)
            })
            .collect();
        let mut offsets = HashMap::new();
        let mut total = 0;
        for (v, _, basis) in &targets {
            offsets.insert(v.bits(), total);
            total += basis.len();
        }
        let mut ech = EchelonBasis::new(field.clone(), total);
        let mut den_count = 0;
        for (v, g, _) in &targets {
            let off = offsets[&v.bits()];
            for row in self.piece(g).den.iter() {
                ech.insert(row.iter().map(|(k, x)| (k + off, x.clone())).collect());
                den_count += 1;
            }
        }
        for v in IndexSet::subsets(n, i) {
            let Some(gamma) = shifted(beta, v) else { continue };
            let src_basis = self.ambient.basis_at(&gamma);
            let num = self.piece(&gamma).num;
            if num.is_empty() {
                continue;
            }
            // per removed variable: sign, target offset, target basis
            let parts: Vec<(bool, usize, &Vec<usize>)> = v
                .iter()
                .enumerate()
                .map(|(pos, var)| {
                    let rest = v.remove(var);
                    let (_, _, tb) = targets
                        .iter()
                        .find(|(w, _, _)| *w == rest)
                        .expect("target block exists");
                    (pos % 2 == 1, offsets[&rest.bits()], tb)
                })
                .collect();
            for vec in num.iter() {
                let mut image: Vec<(usize, F::Elem)> = Vec::new();
                for &(negate, off, tb) in &parts {
                    for (k, x) in vec {
                        let gen = src_basis[*k];
                        if let Some(pos) = position(tb, gen) {
                            let val = if negate { field.neg(x) } else { x.clone() };
                            image.push((off + pos, val));
                        }
                    }
                }
                image.sort_by_key(|e| e.0);
                // distinct blocks never share an index, so no merging is needed
                ech.insert(image);
            }
        }
        let r = ech.rank() - den_count;
        self.ranks.lock().unwrap().insert(key, r);
        r
    }

    /// A lower bound for the degrees of the numerator's generators (`None`
    /// when it is zero).
    pub fn lowest_degree(&self) -> Option<i64> {
        lowest(&self.ambient, &self.num)
    }

    /// `dim Tor_i(M, K)_β` in a fine degree.
    pub fn tor_fine(&self, i: usize, beta: &[u32]) -> usize {
        let n = self.nvars();
        if i > n {
            return 0;
        }
        let chain_dim: usize = IndexSet::subsets(n, i)
            .into_iter()
            .filter_map(|v| shifted(beta, v))
            .map(|g| self.dim_at(&g))
            .sum();
        chain_dim - self.koszul_rank(i, beta) - self.koszul_rank(i + 1, beta)
    }

    /// `dim Tor_i(M, K)_j` for a block multidegree `j`.
    pub fn tor_dims(&self, i: usize, j: &MultiDegree) -> Result<usize> {
        if let Some((lo, hi)) = self.window {
            let top = j.total();
            let bottom = top - i as i64;
            if bottom < lo {
                return Err(Error::InsufficientWindow(bottom));
            }
            if top > hi {
                return Err(Error::InsufficientWindow(top));
            }
        }
        Ok(component_exponents(self.ambient.ring(), j)
            .iter()
            .map(|b| self.tor_fine(i, b))
            .sum())
    }

    /// Scans `Tor_i(M, K)_j` for `0 ≤ i ≤ n` and total degrees `j ≤ cap + i`.
    /// With `bound` a known upper bound for the regularity, the result is
    /// certified as soon as `bound ≤ cap`.
    pub fn reg_scan(&self, cap: i64, bound: Option<i64>) -> Result<RegScan> {
        let n = self.nvars();
        let Some(min) = self.lowest_degree() else {
            return Ok(RegScan {
                reg: None,
                witnesses: Vec::new(),
                cap,
                certified: true,
                table: BettiTable::new(Some(cap)),
            });
        };
        if cap < min {
            return Err(Error::CapTooSmall { cap, min });
        }
        let certified = bound.is_some_and(|b| b <= cap);
        let mut table = BettiTable::new(Some(cap));
        for i in 0..=n {
            for j in (min + i as i64)..=(cap + i as i64) {
                let dim = self.tor_total(i, j)?;
                if dim > 0 {
                    table.set(i, j, dim as u64, certified);
                }
            }
        }
        let reg = table.reg();
        let witnesses = table
            .entries
            .iter()
            .filter(|e| Some(e.j - e.i as i64) == reg)
            .map(|e| TorWitness {
                i: e.i,
                j: e.j,
                dim: e.dim,
            })
            .collect();
        Ok(RegScan {
            reg,
            witnesses,
            cap,
            certified,
            table,
        })
    }

    /// Componentwise thresholds `a` such that multiplication by `x_v` is an
    /// isomorphism `M_γ → M_{γ + e_v}` whenever `γ_v ≥ a_v`.
    ///
    /// Every piece is cut out by which generator shifts lie below `γ` and which
    /// monomials `γ - shift` lie in the ideals involved, and both questions
    /// stop changing in direction `v` past these thresholds.
    pub fn stable_box(&self) -> Vec<u32> {
        let mut a = free_threshold(&self.ambient);
        for sub in [&self.num, &self.den] {
            sub_threshold(&self.ambient, sub, &mut a);
        }
        a
    }

    /// Number of fine degrees inside [`GradedModule::stable_box`].
    pub fn box_size(&self) -> u64 {
        self.stable_box().iter().map(|&x| x as u64 + 1).product()
    }

    /// The exact Betti table and regularity.
    ///
    /// Past the stable box the variables-Koszul complex in direction `v` is the
    /// cone of an isomorphism, so `Tor_i(M, K)_β = 0` unless `β ≤ a`. Scanning
    /// the box is therefore complete and the result is certified.
    pub fn reg_exact(&self) -> RegScan {
        let a = self.stable_box();
        let n = self.nvars();
        let mut dims: BTreeMap<(usize, i64), u64> = BTreeMap::new();
        for beta in box_points(&a) {
            let deg: i64 = beta.iter().map(|&e| e as i64).sum();
            for i in 0..=n {
                let d = self.tor_fine(i, &beta);
                if d > 0 {
                    *dims.entry((i, deg)).or_default() += d as u64;
                }
            }
        }
        let cap = a.iter().map(|&e| e as i64).sum();
        let mut table = BettiTable::new(Some(cap));
        for ((i, j), d) in dims {
            table.set(i, j, d, true);
        }
        let reg = table.reg();
        let witnesses = table
            .entries
            .iter()
            .filter(|e| Some(e.j - e.i as i64) == reg)
            .map(|e| TorWitness {
                i: e.i,
                j: e.j,
                dim: e.dim,
            })
            .collect();
        RegScan {
            reg,
            witnesses,
            cap,
            certified: true,
            table,
        }
    }

    /// `dim Tor_i(M, K)` in total degree `j`, summed over all block degrees.
    pub fn tor_total(&self, i: usize, j: i64) -> Result<usize> {
        if let Some((lo, hi)) = self.window {
            if j - (i as i64) < lo {
                return Err(Error::InsufficientWindow(j - i as i64));
            }
            if j > hi {
                return Err(Error::InsufficientWindow(j));
            }
        }
        if j < 0 {
            return Ok(0);
        }
        let n = self.nvars();
        Ok(crate::ring::exponent_vectors(n, j as u32)
            .iter()
            .map(|b| self.tor_fine(i, b))
            .sum())
    }
}

fn lowest<F: Field>(ambient: &FreeModule, sub: &Submodule<F>) -> Option<i64> {
    match sub {
        Submodule::Zero => None,
        Submodule::Multiples(j) => ambient.min_degree().map(|d| d + j.min_degree() as i64),
        Submodule::Span(elems) => elems.iter().map(|e| e.total_degree()).min(),
        Submodule::Sum(parts) => parts.iter().filter_map(|p| lowest(ambient, p)).min(),
        _ => ambient.min_degree(),
    }
}

fn free_threshold(m: &FreeModule) -> Vec<u32> {
    let n = m.ring().nvars();
    let mut a = vec![0u32; n];
    for sh in m.shifts() {
        for (x, e) in a.iter_mut().zip(sh.exps()) {
            *x = (*x).max(*e);
        }
    }
    if let Some(j) = m.quotient() {
        add_ideal(&mut a, j);
    }
    a
}

fn add_ideal(a: &mut [u32], j: &MonomialIdeal) {
    let mut top = vec![0u32; a.len()];
    for g in j.gens() {
        for (x, e) in top.iter_mut().zip(g.exps()) {
            *x = (*x).max(*e);
        }
    }
    for (x, t) in a.iter_mut().zip(top) {
        *x += t;
    }
}

fn merge(a: &mut [u32], b: &[u32]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = (*x).max(*y);
    }
}

fn sub_threshold<F: Field>(ambient: &FreeModule, sub: &Submodule<F>, a: &mut Vec<u32>) {
    match sub {
        Submodule::Full | Submodule::Zero => {}
        Submodule::Kernel(map) | Submodule::Image(map) => {
            merge(a, &free_threshold(map.source()));
            merge(a, &free_threshold(map.target()));
        }
        Submodule::Multiples(j) => {
            let mut b = free_threshold(ambient);
            add_ideal(&mut b, j);
            merge(a, &b);
        }
        Submodule::Span(elems) => {
            for el in elems.iter() {
                merge(a, &el.degree);
            }
        }
        Submodule::Sum(parts) => {
            for p in parts {
                sub_threshold(ambient, p, a);
            }
        }
    }
}

/// All exponent vectors `β ≤ a`.
fn box_points(a: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &top in a {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=top).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

/// `beta - e_V` when nonnegative.
fn shifted(beta: &[u32], v: IndexSet) -> Option<Vec<u32>> {
    let mut g = beta.to_vec();
    for var in v.iter() {
        if g[var] == 0 {
            return None;
        }
        g[var] -= 1;
    }
    Some(g)
}

fn check_sub<F: Field>(ambient: &Arc<FreeModule>, sub: &Submodule<F>) -> Result<()> {
    match sub {
        Submodule::Kernel(m) if m.source().as_ref() != ambient.as_ref() => Err(Error::InvalidArgument(
            "kernel map must start at the ambient module".into(),
        )),
        Submodule::Image(m) if m.target().as_ref() != ambient.as_ref() => Err(Error::InvalidArgument(
            "image map must end at the ambient module".into(),
        )),
        Submodule::Span(elems) => {
            for el in elems.iter() {
                for (g, _) in &el.coords {
                    if *g >= ambient.rank() || !ambient.shift(*g).exps().iter().zip(&el.degree).all(|(a, b)| a <= b) {
                        return Err(Error::DegreeMismatch(format!(
                            "generator {g} does not fit in degree {:?}",
                            el.degree
                        )));
                    }
                }
            }
            Ok(())
        }
        Submodule::Sum(parts) => parts.iter().try_for_each(|p| check_sub(ambient, p)),
        _ => Ok(()),
    }
}
