//! The Koszul complex `K(I, S/J)` of a monomial ideal, one free module per
//! homological degree, with its graded pieces, cycles and homology.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, KoszulChain, MAX_GENERATORS};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::ring::{component_exponents, Monomial, MonomialIdeal, MultiDegree};
use crate::scalars::Field;

use super::free::{position, FreeModule, ModuleMap};
use super::module::{Element, GradedModule, Submodule};

/// `K_t(I, S/J) = Λ^t F ⊗ S/J` for `t = 0..=top`, where `e_T` has degree
/// `Σ_{i∈T} deg u_i`.
pub struct KoszulComplex {
    ideal: Arc<MonomialIdeal>,
    levels: Vec<Arc<FreeModule>>,
    subsets: Vec<Vec<IndexSet>>,
    index: Vec<HashMap<IndexSet, usize>>,
    boundaries: Vec<Option<Arc<ModuleMap>>>,
}

impl KoszulComplex {
    /// Levels `0..=top` (and zero modules past the number of generators).
    pub fn new(ideal: Arc<MonomialIdeal>, top: usize) -> Result<Self> {
        Self::build(ideal, None, top)
    }

    /// The complex with coefficients in `S/J`.
    pub fn with_quotient(ideal: Arc<MonomialIdeal>, j: Arc<MonomialIdeal>, top: usize) -> Result<Self> {
        Self::build(ideal, Some(j), top)
    }

    fn build(ideal: Arc<MonomialIdeal>, quotient: Option<Arc<MonomialIdeal>>, top: usize) -> Result<Self> {
        let r = ideal.num_gens();
        if r > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                max: MAX_GENERATORS,
                got: r,
            });
        }
        let ring = ideal.ring().clone();
        let gens = ideal.gens();
        let mut levels = Vec::new();
        let mut subsets = Vec::new();
        let mut index: Vec<HashMap<IndexSet, usize>> = Vec::new();
        for t in 0..=top {
            let sets = IndexSet::subsets(r, t);
            let shifts: Vec<Monomial> = sets
                .iter()
                .map(|s| s.iter().fold(ring.one(), |acc, k| acc.mul(&gens[k])))
                .collect();
            levels.push(Arc::new(FreeModule::new(ring.clone(), shifts, quotient.clone())?));
            index.push(sets.iter().enumerate().map(|(k, s)| (*s, k)).collect());
            subsets.push(sets);
        }
        let mut boundaries = vec![None];
        for t in 1..=top {
            let images: Vec<Vec<(usize, i64)>> = subsets[t]
                .iter()
                .map(|s| {
                    s.iter()
                        .enumerate()
                        .map(|(pos, k)| {
                            let sign = if pos % 2 == 0 { 1 } else { -1 };
                            (index[t - 1][&s.remove(k)], sign)
                        })
                        .collect()
                })
                .collect();
            boundaries.push(Some(Arc::new(ModuleMap::new(
                levels[t].clone(),
                levels[t - 1].clone(),
                images,
            )?)));
        }
        Ok(Self {
            ideal,
            levels,
            subsets,
            index,
            boundaries,
        })
    }

    pub fn ideal(&self) -> &Arc<MonomialIdeal> {
        &self.ideal
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn quotient(&self) -> Option<&Arc<MonomialIdeal>> {
        self.levels[0].quotient()
    }

    fn check_level(&self, t: usize) -> Result<()> {
        if t > self.top() {
            return Err(Error::InvalidArgument(format!(
                "homological degree {t} beyond the constructed range 0..={}",
                self.top()
            )));
        }
        Ok(())
    }

    pub fn level(&self, t: usize) -> Result<&Arc<FreeModule>> {
        self.check_level(t)?;
        Ok(&self.levels[t])
    }

    /// `φ_t: K_t → K_{t-1}`.
    pub fn boundary_map(&self, t: usize) -> Result<&Arc<ModuleMap>> {
        self.check_level(t)?;
        self.boundaries[t]
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("K_0 has no outgoing differential".into()))
    }

    pub fn subset(&self, t: usize, g: usize) -> IndexSet {
        self.subsets[t][g]
    }

    /// Ordered basis of `K_t` in fine degree `beta`.
    pub fn basis_at(&self, t: usize, beta: &[u32]) -> Result<Vec<(IndexSet, Monomial)>> {
        let level = self.level(t)?;
        Ok(level
            .basis_at(beta)
            .into_iter()
            .map(|g| {
                let w = level.coefficient_monomial(g, beta).expect("present generator");
                (self.subsets[t][g], w)
            })
            .collect())
    }

    /// Matrix of `φ_t` in fine degree `beta` (rows: `K_{t-1}`, columns: `K_t`).
    pub fn boundary_matrix<F: Field>(&self, field: &F, t: usize, beta: &[u32]) -> Result<SparseMatrix<F>> {
        Ok(self.boundary_map(t)?.matrix_at(field, beta))
    }

    /// `Z_t` as a graded module.
    pub fn cycles<F: Field>(&self, field: F, t: usize) -> Result<GradedModule<F>> {
        let num = if t == 0 {
            self.check_level(0)?;
            Submodule::Full
        } else {
            Submodule::Kernel(self.boundary_map(t)?.clone())
        };
        GradedModule::new(field, self.levels[t].clone(), num, Submodule::Zero)
    }

    /// `B_t` as a graded module (needs level `t + 1`).
    pub fn boundaries<F: Field>(&self, field: F, t: usize) -> Result<GradedModule<F>> {
        let map = self.boundary_map(t + 1)?.clone();
        GradedModule::new(field, self.levels[t].clone(), Submodule::Image(map), Submodule::Zero)
    }

    /// `H_t = Z_t / B_t` as a graded module (needs level `t + 1`).
    pub fn homology<F: Field>(&self, field: F, t: usize) -> Result<GradedModule<F>> {
        let num = if t == 0 {
            Submodule::Full
        } else {
            Submodule::Kernel(self.boundary_map(t)?.clone())
        };
        let den = Submodule::Image(self.boundary_map(t + 1)?.clone());
        GradedModule::new(field, self.levels[t].clone(), num, den)
    }

    /// The submodule of `K_t` generated by chains (split into fine-homogeneous parts).
    pub fn span<F: Field>(&self, field: F, t: usize, chains: &[KoszulChain<F>]) -> Result<GradedModule<F>> {
        let mut elems = Vec::new();
        for c in chains {
            for part in c.fine_components() {
                elems.push(self.element(&part)?);
            }
        }
        GradedModule::new(
            field,
            self.level(t)?.clone(),
            Submodule::Span(Arc::new(elems)),
            Submodule::Zero,
        )
    }

    /// A fine-homogeneous chain as an element of its level.
    pub fn element<F: Field>(&self, chain: &KoszulChain<F>) -> Result<Element<F>> {
        if !Arc::ptr_eq(chain.ideal(), &self.ideal) && chain.ideal().as_ref() != self.ideal.as_ref() {
            return Err(Error::IdealMismatch);
        }
        let t = chain.degree();
        self.check_level(t)?;
        let Some(degree) = chain.fine_degree() else {
            if chain.is_zero() {
                return Err(Error::InvalidArgument("the zero chain has no degree".into()));
            }
            return Err(Error::DegreeMismatch("chain is not fine-homogeneous".into()));
        };
        let mut coords: Vec<(usize, F::Elem)> = chain.terms().map(|(s, _, c)| (self.index[t][s], c.clone())).collect();
        coords.sort_by_key(|e| e.0);
        Ok(Element { degree, coords })
    }

    /// Coordinates of a fine-homogeneous chain in the basis of its degree.
    pub fn coordinates<F: Field>(&self, chain: &KoszulChain<F>) -> Result<(Vec<u32>, SparseVec<F::Elem>)> {
        let el = self.element(chain)?;
        let basis = self.levels[chain.degree()].basis_at(&el.degree);
        let v = el
            .coords
            .iter()
            .filter_map(|(g, c)| position(&basis, *g).map(|k| (k, c.clone())))
            .collect();
        Ok((el.degree, v))
    }

    /// The chain with coordinates `v` in fine degree `beta` of `K_t`.
    pub fn chain_from<F: Field>(
        &self,
        field: &F,
        t: usize,
        beta: &[u32],
        v: &SparseVec<F::Elem>,
    ) -> Result<KoszulChain<F>> {
        let basis = self.basis_at(t, beta)?;
        let mut c = KoszulChain::zero(field.clone(), self.ideal.clone(), t);
        for (k, x) in v {
            let (s, w) = basis
                .get(*k)
                .ok_or(Error::DimensionMismatch {
                    expected: basis.len(),
                    got: k + 1,
                })?
                .clone();
            c.add_term(s, w, x.clone())?;
        }
        Ok(c)
    }

    /// `dim K_t` in block degree `alpha`.
    pub fn chain_dim(&self, t: usize, alpha: &MultiDegree) -> Result<usize> {
        let level = self.level(t)?;
        Ok(component_exponents(self.ideal.ring(), alpha)
            .iter()
            .map(|b| level.dim_at(b))
            .sum())
    }

    /// `rank φ_t` in fine degree `beta` (zero for `t = 0` or past the top).
    pub fn boundary_rank<F: Field>(&self, field: &F, t: usize, beta: &[u32]) -> Result<usize> {
        if t == 0 || t > self.ideal.num_gens() {
            return Ok(0);
        }
        Ok(self.boundary_matrix(field, t, beta)?.rank())
    }

    /// `dim H_t` in fine degree `beta`; needs level `t + 1` unless `t` is the
    /// number of generators.
    pub fn homology_dim_fine<F: Field>(&self, field: &F, t: usize, beta: &[u32]) -> Result<usize> {
        let cols = self.level(t)?.dim_at(beta);
        if cols == 0 {
            return Ok(0);
        }
        let out = self.boundary_rank(field, t, beta)?;
        let incoming = if t + 1 > self.ideal.num_gens() {
            0
        } else {
            self.boundary_rank(field, t + 1, beta)?
        };
        Ok(cols - out - incoming)
    }

    pub fn cycle_dim_fine<F: Field>(&self, field: &F, t: usize, beta: &[u32]) -> Result<usize> {
        Ok(self.level(t)?.dim_at(beta) - self.boundary_rank(field, t, beta)?)
    }
}

fn complex_for(ideal: &MonomialIdeal, top: usize) -> Result<KoszulComplex> {
    let r = ideal.num_gens();
    KoszulComplex::new(Arc::new(ideal.clone()), top.min(r))
}

/// A basis of `Z_t(I, S)_α`; for `t = 0` all of `S_α`.
pub fn cycle_space<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    t: usize,
    alpha: &MultiDegree,
) -> Result<Vec<KoszulChain<F>>> {
    let shared = Arc::new(ideal.clone());
    if t > ideal.num_gens() {
        return Ok(Vec::new());
    }
    let cx = KoszulComplex::new(shared, t)?;
    let mut out = Vec::new();
    for beta in component_exponents(ideal.ring(), alpha) {
        let vecs = if t == 0 {
            (0..cx.level(0)?.dim_at(&beta))
                .map(|k| vec![(k, field.one())])
                .collect()
        } else {
            cx.boundary_matrix(field, t, &beta)?.kernel_basis()
        };
        for v in vecs {
            out.push(cx.chain_from(field, t, &beta, &v)?);
        }
    }
    Ok(out)
}

/// `dim Z_t(I, S)_α`.
pub fn cycle_dim<F: Field>(field: &F, ideal: &MonomialIdeal, t: usize, alpha: &MultiDegree) -> Result<usize> {
    if t > ideal.num_gens() {
        return Ok(0);
    }
    let cx = complex_for(ideal, t)?;
    component_exponents(ideal.ring(), alpha)
        .iter()
        .map(|b| cx.cycle_dim_fine(field, t, b))
        .sum()
}

/// `dim H_t(I, S)_α = dim Z_t - dim B_t`.
pub fn homology_dim<F: Field>(field: &F, ideal: &MonomialIdeal, t: usize, alpha: &MultiDegree) -> Result<usize> {
    if t > ideal.num_gens() {
        return Ok(0);
    }
    let cx = complex_for(ideal, t + 1)?;
    component_exponents(ideal.ring(), alpha)
        .iter()
        .map(|b| cx.homology_dim_fine(field, t, b))
        .sum()
}

/// Result of a generation check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GenerationReport {
    pub generates: bool,
    /// The first degree (in the order checked) where the candidates fall short.
    pub first_failure: Option<MultiDegree>,
    /// `(degree, dim of candidate span, dim Z_t)` for every degree checked.
    pub degrees: Vec<(MultiDegree, usize, usize)>,
}

/// Whether the candidate cycles generate `Z_t(I, S)` in every block degree
/// `α ≤ bound`.
pub fn generates_up_to<F: Field>(
    field: &F,
    candidates: &[KoszulChain<F>],
    ideal: &MonomialIdeal,
    t: usize,
    bound: &MultiDegree,
) -> Result<GenerationReport> {
    let shared = Arc::new(ideal.clone());
    let top = t.min(ideal.num_gens());
    let cx = KoszulComplex::new(shared.clone(), top.max(t.min(ideal.num_gens())))?;
    for (k, c) in candidates.iter().enumerate() {
        if c.degree() != t || !c.is_cycle() {
            return Err(Error::NotACycle(k));
        }
    }
    if t > ideal.num_gens() {
        return Ok(GenerationReport {
            generates: true,
            first_failure: None,
            degrees: Vec::new(),
        });
    }
    let rebound: Vec<KoszulChain<F>> = candidates
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| rebind(c, &shared))
        .collect::<Result<_>>()?;
    let span = cx.span(field.clone(), t, &rebound)?;
    let mut report = GenerationReport {
        generates: true,
        first_failure: None,
        degrees: Vec::new(),
    };
    for alpha in bound.box_below() {
        let mut span_dim = 0;
        let mut cyc_dim = 0;
        for beta in component_exponents(ideal.ring(), &alpha) {
            span_dim += span.dim_at(&beta);
            cyc_dim += cx.cycle_dim_fine(field, t, &beta)?;
        }
        if span_dim != cyc_dim && report.generates {
            report.generates = false;
            report.first_failure = Some(alpha.clone());
        }
        report.degrees.push((alpha, span_dim, cyc_dim));
    }
    Ok(report)
}

/// The same chain attached to `ideal` (which must be equal to its own).
fn rebind<F: Field>(c: &KoszulChain<F>, ideal: &Arc<MonomialIdeal>) -> Result<KoszulChain<F>> {
    if c.ideal().as_ref() != ideal.as_ref() {
        return Err(Error::IdealMismatch);
    }
    let mut out = KoszulChain::zero(c.field().clone(), ideal.clone(), c.degree());
    for (s, w, x) in c.terms() {
        out.add_term(*s, w.clone(), x.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{power_ideal, RingConfig};
    use crate::scalars::Rationals;

    fn std(n: usize) -> RingConfig {
        RingConfig::standard(n).unwrap()
    }

    fn deg(j: i64) -> MultiDegree {
        MultiDegree::single(j)
    }

    #[test]
    fn cycle_space_examples() {
        let q = Rationals;
        let r1 = std(1);
        let xc = MonomialIdeal::from_exponents(r1, vec![vec![3]]).unwrap();
        for j in 0..7 {
            assert!(cycle_space(&q, &xc, 1, &deg(j)).unwrap().is_empty());
        }
        let m = power_ideal(&std(2), &deg(1)).unwrap();
        let z = cycle_space(&q, &m, 1, &deg(2)).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].render_terms().len(), 2);
        let m2 = power_ideal(&std(2), &deg(2)).unwrap();
        let z = cycle_space(&q, &m2, 1, &deg(4)).unwrap();
        // kernel oracle: 3 · dim S_2 - rank of the degree-4 boundary
        let cx = KoszulComplex::new(Arc::new(m2.clone()), 1).unwrap();
        let rank: usize = component_exponents(m2.ring(), &deg(4))
            .iter()
            .map(|b| cx.boundary_rank(&q, 1, b).unwrap())
            .sum();
        assert_eq!(z.len(), 9 - rank);
        assert!(z.iter().all(|c| c.is_cycle()));
        assert_eq!(cycle_space(&q, &m2, 0, &deg(1)).unwrap().len(), 2);
    }

    #[test]
    fn homology_dim_examples() {
        let q = Rationals;
        let m = power_ideal(&std(2), &deg(1)).unwrap();
        for j in 0..6 {
            assert_eq!(homology_dim(&q, &m, 1, &deg(j)).unwrap(), 0);
        }
        let m2 = power_ideal(&std(2), &deg(2)).unwrap();
        assert_eq!(homology_dim(&q, &m2, 1, &deg(4)).unwrap(), 1);
        let m3 = power_ideal(&std(3), &deg(2)).unwrap();
        assert_eq!(homology_dim(&q, &m3, 1, &deg(4)).unwrap(), 6);
    }

    #[test]
    fn generation_examples() {
        let q = Rationals;
        let m = power_ideal(&std(2), &deg(1)).unwrap();
        let rep = generates_up_to::<Rationals>(&q, &[], &m, 1, &deg(2)).unwrap();
        assert!(!rep.generates);
        assert_eq!(rep.first_failure, Some(deg(2)));
        let z = cycle_space(&q, &m, 1, &deg(2)).unwrap();
        assert!(generates_up_to(&q, &z, &m, 1, &deg(4)).unwrap().generates);
        let shared = z[0].ideal().clone();
        let not_cycle = KoszulChain::basis(q, shared, IndexSet::singleton(0), std(2).one()).unwrap();
        assert_eq!(
            generates_up_to(&q, &[not_cycle], &m, 1, &deg(3)).unwrap_err(),
            Error::NotACycle(0)
        );
    }

    #[test]
    fn chain_coordinates_round_trip() {
        let q = Rationals;
        let m2 = Arc::new(power_ideal(&std(2), &deg(2)).unwrap());
        let cx = KoszulComplex::new(m2.clone(), 2).unwrap();
        let e = KoszulChain::basis(
            q,
            m2,
            IndexSet::from_indices(&[0, 2]).unwrap(),
            Monomial::new(vec![0, 1]),
        )
        .unwrap();
        let (beta, v) = cx.coordinates(&e).unwrap();
        assert_eq!(beta, vec![2, 3]);
        assert_eq!(cx.chain_from(&q, 2, &beta, &v).unwrap(), e);
    }

    #[test]
    fn quotient_coefficients() {
        // K(x, y; S/(x)): e_1 survives in degree 1, e_1 ⊗ y is a boundary
        let q = Rationals;
        let r = std(2);
        let m = Arc::new(power_ideal(&r, &deg(1)).unwrap());
        let j = Arc::new(MonomialIdeal::from_exponents(r, vec![vec![1, 0]]).unwrap());
        let cx = KoszulComplex::with_quotient(m, j, 2).unwrap();
        let h1 = cx.homology(q, 1).unwrap();
        assert_eq!(h1.dim(&deg(1)), 1);
        assert_eq!(h1.dim(&deg(2)), 0);
    }
}
