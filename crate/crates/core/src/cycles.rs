//! Explicit Koszul cycles of `𝔪^𝔠` and products of them.
//!
//! * `z_b(x_j, x_k) = x_j [b x_k] - x_k [b x_j]` generate `Z_1(𝔪^𝔠, S)`;
//! * the alternating sums `Σ_σ sgn(σ) a_{σ(t+1)} [b_1 a_{σ(1)}, .., b_t a_{σ(t)}]`
//!   are cycles in `Z_t`;
//! * `Z_1^t` is spanned by `t`-fold exterior products of the `z_b`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{bracket, IndexSet, KoszulChain};
use crate::homology::{GradedModule, KoszulComplex};
use crate::linalg::{axpy, in_span, EchelonBasis, SparseVec};
use crate::ring::{
    component_basis, component_exponents, exponent_vectors, power_ideal, Monomial, MonomialIdeal, MultiDegree,
    RingConfig,
};
use crate::scalars::{Field, Rationals};

/// Above this many candidates an enumeration is flagged as oversized.
pub const FAMILY_WARN_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyLabel {
    Z1Generator,
    Symmetrized,
    Z1Power,
    Gen2Type1,
    Gen2Type2,
}

/// Parameters a family member was built from (variables are 0-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: Vec<Monomial>,
    pub b: Vec<Monomial>,
    pub vars: Vec<(usize, usize)>,
}

/// A named cycle together with the data that produced it.
#[derive(Clone, Debug)]
pub struct CycleFamily<F: Field = Rationals> {
    pub label: FamilyLabel,
    pub params: FamilyParams,
    pub chain: KoszulChain<F>,
}

impl<F: Field> CycleFamily<F> {
    /// JSON record with the canonical chain rendering.
    pub fn to_json(&self) -> serde_json::Value {
        let ring = self.chain.ideal().ring();
        serde_json::json!({
            "label": self.label,
            "a": self.params.a.iter().map(|m| ring.render(m)).collect::<Vec<_>>(),
            "b": self.params.b.iter().map(|m| ring.render(m)).collect::<Vec<_>>(),
            "vars": self.params.vars.iter().map(|(j, k)| [ring.var_name(*j), ring.var_name(*k)]).collect::<Vec<_>>(),
            "t": self.chain.degree(),
            "degree": self.chain.total_degree(),
            "terms": self.chain.render_terms(),
        })
    }
}

/// Exports a list of families as a JSON array.
pub fn families_to_json<F: Field>(families: &[CycleFamily<F>]) -> serde_json::Value {
    serde_json::Value::Array(families.iter().map(|f| f.to_json()).collect())
}

fn require_char<F: Field>(field: &F, floor: u64) -> Result<()> {
    let p = field.characteristic();
    if p != 0 && p <= floor {
        return Err(Error::CharacteristicTooSmall { p, floor });
    }
    Ok(())
}

/// `z_b(x_j, x_k) = x_j [b x_k] - x_k [b x_j]`.
pub fn z1_generator<F: Field>(
    field: &F,
    ideal: &Arc<MonomialIdeal>,
    b: &Monomial,
    j: usize,
    k: usize,
) -> Result<KoszulChain<F>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if j >= n || k >= n {
        return Err(Error::IndexOutOfRange {
            index: j.max(k) + 1,
            max: n,
        });
    }
    if j == k {
        return Err(Error::InvalidArgument("z_b needs two distinct variables".into()));
    }
    if ring.block_of(j) != ring.block_of(k) {
        return Err(Error::DegreeMismatch(format!(
            "{} and {} lie in different blocks",
            ring.var_name(j),
            ring.var_name(k)
        )));
    }
    let bk = b.mul_var(k);
    let bj = b.mul_var(j);
    let gk = ideal
        .generator_index(&bk)
        .ok_or_else(|| Error::NotAGenerator(ring.render(&bk)))?;
    let gj = ideal
        .generator_index(&bj)
        .ok_or_else(|| Error::NotAGenerator(ring.render(&bj)))?;
    let mut z = KoszulChain::zero(field.clone(), ideal.clone(), 1);
    z.add_term(IndexSet::singleton(gk), ring.var(j), field.one())?;
    z.add_term(IndexSet::singleton(gj), ring.var(k), field.from_i64(-1))?;
    Ok(z)
}

/// All `z_b(x_j, x_k)` with `j < k` in one block `i` and `b` of multidegree
/// `𝔠 - e_i`, for the ideal `𝔪^𝔠`.
pub fn z1_generators<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>) -> Result<Vec<CycleFamily<F>>> {
    let c = power_degree(ideal)?;
    let ring = ideal.ring();
    let mut out = Vec::new();
    for i in 0..ring.num_blocks() {
        if c.0[i] == 0 {
            continue;
        }
        let bdeg = c.sub(&MultiDegree::unit(c.len(), i));
        let range = ring.block_range(i);
        for b in component_basis(ring, &bdeg) {
            for j in range.clone() {
                for k in j + 1..range.end {
                    out.push(CycleFamily {
                        label: FamilyLabel::Z1Generator,
                        params: FamilyParams {
                            a: Vec::new(),
                            b: vec![b.clone()],
                            vars: vec![(j, k)],
                        },
                        chain: z1_generator(field, ideal, &b, j, k)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The degree vector `𝔠` when `ideal = 𝔪^𝔠`.
pub fn power_degree(ideal: &MonomialIdeal) -> Result<MultiDegree> {
    let c = ideal
        .equigenerated_multidegree()
        .ok_or_else(|| Error::InvalidArgument("ideal is not a power of the maximal ideals".into()))?;
    if power_ideal(ideal.ring(), &c)? != *ideal {
        return Err(Error::InvalidArgument(format!("{} is not 𝔪^{c}", ideal.render())));
    }
    Ok(c)
}

/// Permutations of `0..m` with their signs (Heap's algorithm).
pub fn signed_permutations(m: usize) -> Vec<(Vec<usize>, i64)> {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut out = vec![(perm.clone(), 1)];
    let mut sign = 1;
    let mut c = vec![0usize; m];
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `Σ_{σ ∈ S_{t+1}} sgn(σ) a_{σ(t+1)} [b_1 a_{σ(1)}, ..., b_t a_{σ(t)}]`.
///
/// The `a_i` share one multidegree `α ≤ 𝔠` and the `b_i` have multidegree
/// `𝔠 - α`. Repeated `a_i` make the sum vanish; the zero chain is returned.
pub fn symmetrized_cycle<F: Field>(
    field: &F,
    ideal: &Arc<MonomialIdeal>,
    a: &[Monomial],
    b: &[Monomial],
) -> Result<KoszulChain<F>> {
    let t = b.len();
    if t == 0 || a.len() != t + 1 {
        return Err(Error::DegreeMismatch(format!(
            "need t + 1 monomials a and t >= 1 monomials b, got {} and {t}",
            a.len()
        )));
    }
    let ring = ideal.ring();
    let alpha = ring.multidegree_of(a[0].exps());
    if a.iter().any(|m| ring.multidegree_of(m.exps()) != alpha) {
        return Err(Error::DegreeMismatch("the a_i must share one multidegree".into()));
    }
    let beta = ring.multidegree_of(b[0].exps());
    if b.iter().any(|m| ring.multidegree_of(m.exps()) != beta) {
        return Err(Error::DegreeMismatch("the b_i must share one multidegree".into()));
    }
    let mut out = KoszulChain::zero(field.clone(), ideal.clone(), t);
    for (sigma, sgn) in signed_permutations(t + 1) {
        let entries: Vec<Monomial> = (0..t).map(|i| b[i].mul(&a[sigma[i]])).collect();
        if let Some((set, s)) = bracket(ideal, &entries)? {
            out.add_term(set, a[sigma[t]].clone(), field.from_i64(sgn * s as i64))?;
        }
    }
    Ok(out)
}

/// `t`-fold exterior products of distinct members of `gens`, zeros dropped.
pub fn wedge_products<F: Field>(gens: &[KoszulChain<F>], t: usize) -> Result<Vec<(Vec<usize>, KoszulChain<F>)>> {
    let mut out = Vec::new();
    for set in IndexSet::subsets(gens.len(), t) {
        let idx = set.to_vec();
        let mut acc = gens[idx[0]].clone();
        for &k in &idx[1..] {
            acc = acc.wedge(&gens[k])?;
        }
        if !acc.is_zero() {
            out.push((idx, acc));
        }
    }
    Ok(out)
}

/// `Z_1^t ⊆ K_t(𝔪^𝔠, S)` as a graded module, spanned by products of the `z_b`.
pub fn z1_power_module<F: Field>(field: &F, cx: &KoszulComplex, t: usize) -> Result<GradedModule<F>> {
    let gens: Vec<KoszulChain<F>> = z1_generators(field, cx.ideal())?.into_iter().map(|f| f.chain).collect();
    let products: Vec<KoszulChain<F>> = if t == 0 {
        Vec::new()
    } else {
        wedge_products(&gens, t)?.into_iter().map(|(_, c)| c).collect()
    };
    cx.span(field.clone(), t, &products)
}

/// A basis of `(Z_1^t)_α` inside `K_t(𝔪^𝔠, S)`.
pub fn z1_power_component<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    t: usize,
    alpha: &MultiDegree,
) -> Result<Vec<KoszulChain<F>>> {
    if t == 0 {
        return Err(Error::InvalidArgument("Z_1^t needs t >= 1".into()));
    }
    if t > ideal.num_gens() {
        return Ok(Vec::new());
    }
    let cx = KoszulComplex::new(Arc::new(ideal.clone()), t)?;
    let module = z1_power_module(field, &cx, t)?;
    let mut out = Vec::new();
    for beta in component_exponents(ideal.ring(), alpha) {
        for v in module.numerator_basis(&beta).iter() {
            out.push(cx.chain_from(field, t, &beta, v)?);
        }
    }
    Ok(out)
}

/// `dim (Z_1^t)_j` and `dim (Z_t)_j` in total degree `j` for `𝔪^𝔠`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerComparison {
    pub j: i64,
    pub power_dim: usize,
    pub cycle_dim: usize,
}

/// Compares `Z_1^t` with `Z_t` in total degrees `from..=to`.
pub fn compare_power_with_cycles<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    t: usize,
    from: i64,
    to: i64,
) -> Result<Vec<PowerComparison>> {
    let n = ideal.ring().nvars();
    if t == 0 || t > ideal.num_gens() {
        return Ok((from..=to)
            .map(|j| PowerComparison {
                j,
                power_dim: 0,
                cycle_dim: 0,
            })
            .collect());
    }
    let cx = KoszulComplex::new(Arc::new(ideal.clone()), t)?;
    let power = z1_power_module(field, &cx, t)?;
    let mut out = Vec::new();
    for j in from..=to {
        let (mut p, mut z) = (0, 0);
        if j >= 0 {
            for beta in exponent_vectors(n, j as u32) {
                p += power.dim_at(&beta);
                z += cx.cycle_dim_fine(field, t, &beta)?;
            }
        }
        out.push(PowerComparison {
            j,
            power_dim: p,
            cycle_dim: z,
        });
    }
    Ok(out)
}

/// One instance `(u+1)! a_{u+1} ∏_j z_{a_j}(y_{0j}, y_{1j})` of the product in
/// block `block`, with `u = c_block`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multi2Trial {
    pub block: usize,
    pub extra: Monomial,
    /// `(a_j, y_0j, y_1j)`
    pub factors: Vec<(Monomial, usize, usize)>,
}

/// Membership verdict with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multi2Verdict {
    pub member: bool,
    /// Fine degree of the product.
    pub degree: Vec<u32>,
    /// True when the product itself is zero (trivially a member).
    pub zero_product: bool,
    /// Number of spanning vectors of `(𝔪_i^u Z_u + B_u)_β`.
    pub spanning_vectors: usize,
    /// Nonzero coefficients `(vector index, value)` expressing the product.
    pub certificate: Option<Vec<(usize, String)>>,
}

/// All trials for block `block` of `𝔪^𝔠`: every `u`-subset of distinct `z`
/// generators of `U_block` (repeats give zero) and every extra monomial.
pub fn multi2_trials(ring: &RingConfig, c: &MultiDegree, block: usize) -> Result<Vec<Multi2Trial>> {
    if block >= ring.num_blocks() || c.len() != ring.num_blocks() {
        return Err(Error::DegreeMismatch(format!("block {block} for degree {c}")));
    }
    let u = c.0[block];
    if u < 1 {
        return Err(Error::ZeroDegree);
    }
    let bdeg = c.sub(&MultiDegree::unit(c.len(), block));
    let basis = component_basis(ring, &bdeg);
    let range = ring.block_range(block);
    let mut zs = Vec::new();
    for a in &basis {
        for j in range.clone() {
            for k in j + 1..range.end {
                zs.push((a.clone(), j, k));
            }
        }
    }
    let mut out = Vec::new();
    for set in IndexSet::subsets(zs.len(), u as usize) {
        let factors: Vec<_> = set.iter().map(|k| zs[k].clone()).collect();
        for extra in &basis {
            out.push(Multi2Trial {
                block,
                extra: extra.clone(),
                factors: factors.clone(),
            });
        }
    }
    Ok(out)
}

fn factorial(k: u64) -> i64 {
    (1..=k as i64).product()
}

/// Tests `(u+1)! a_{u+1} ∏ z_{a_j}(y_{0j}, y_{1j}) ∈ (𝔪_i^u Z_u + B_u)_β`.
pub fn multi2_membership<F: Field>(
    field: &F,
    ring: &RingConfig,
    c: &MultiDegree,
    trial: &Multi2Trial,
) -> Result<Multi2Verdict> {
    let i = trial.block;
    if i >= ring.num_blocks() || c.len() != ring.num_blocks() {
        return Err(Error::DegreeMismatch(format!("block {i} for degree {c}")));
    }
    let u = c.0[i];
    if u < 1 {
        return Err(Error::ZeroDegree);
    }
    require_char(field, u as u64 + 1)?;
    if trial.factors.len() != u as usize {
        return Err(Error::DegreeMismatch(format!(
            "expected {u} factors, got {}",
            trial.factors.len()
        )));
    }
    let bdeg = c.sub(&MultiDegree::unit(c.len(), i));
    let check = |m: &Monomial| -> Result<()> {
        if ring.multidegree_of(m.exps()) != bdeg {
            return Err(Error::DegreeMismatch(format!(
                "{} does not have degree {bdeg}",
                ring.render(m)
            )));
        }
        Ok(())
    };
    check(&trial.extra)?;
    let ideal = Arc::new(power_ideal(ring, c)?);
    let u = u as usize;
    let mut product = KoszulChain::ring_element(field.clone(), ideal.clone(), trial.extra.clone())
        .scale(&field.from_i64(factorial(u as u64 + 1)));
    for (a, y0, y1) in &trial.factors {
        check(a)?;
        if ring.block_of(*y0) != i || ring.block_of(*y1) != i {
            return Err(Error::DegreeMismatch("z variables must lie in the chosen block".into()));
        }
        product = product.wedge(&z1_generator(field, &ideal, a, *y0, *y1)?)?;
    }
    let degree = {
        let mut d = trial.extra.exps().to_vec();
        for (a, y0, y1) in &trial.factors {
            for (v, e) in a.exps().iter().enumerate() {
                d[v] += e;
            }
            d[*y0] += 1;
            d[*y1] += 1;
        }
        d
    };
    if product.is_zero() {
        return Ok(Multi2Verdict {
            member: true,
            degree,
            zero_product: true,
            spanning_vectors: 0,
            certificate: Some(Vec::new()),
        });
    }
    let cx = KoszulComplex::new(ideal.clone(), (u + 1).min(ideal.num_gens()))?;
    let (beta, target) = cx.coordinates(&product)?;
    let level = cx.level(u)?;
    let basis = level.basis_at(&beta);
    let mut vectors: Vec<SparseVec<F::Elem>> = Vec::new();
    // 𝔪_i^u · Z_u: monomials of degree u in the block times cycles
    let range = ring.block_range(i);
    for m in exponent_vectors(range.len(), u as u32) {
        let mut gamma = beta.clone();
        let mut fits = true;
        for (off, e) in m.iter().enumerate() {
            let v = range.start + off;
            if gamma[v] < *e {
                fits = false;
                break;
            }
            gamma[v] -= e;
        }
        if !fits {
            continue;
        }
        let small = level.basis_at(&gamma);
        for z in cx.boundary_matrix(field, u, &gamma)?.kernel_basis() {
            let mut v: SparseVec<F::Elem> = z
                .iter()
                .map(|(k, x)| {
                    (
                        crate::homology::position(&basis, small[*k]).expect("generator stays present"),
                        x.clone(),
                    )
                })
                .collect();
            v.sort_by_key(|e| e.0);
            vectors.push(v);
        }
    }
    if u < ideal.num_gens() {
        let incoming = cx.boundary_matrix(field, u + 1, &beta)?.transpose();
        for row in incoming.rows() {
            if !row.is_empty() {
                vectors.push(row.clone());
            }
        }
    }
    let coeffs = in_span(field, basis.len(), &vectors, &target)?;
    let certificate = match &coeffs {
        Some(cs) => {
            // replay the certificate
            let mut rebuilt: SparseVec<F::Elem> = Vec::new();
            for (v, x) in vectors.iter().zip(cs) {
                rebuilt = axpy(field, &rebuilt, &field.neg(x), v);
            }
            if rebuilt != target {
                return Err(Error::InvalidArgument("span certificate failed to replay".into()));
            }
            Some(
                cs.iter()
                    .enumerate()
                    .filter(|(_, x)| !field.is_zero(x))
                    .map(|(k, x)| (k, field.render(x)))
                    .collect(),
            )
        }
        None => None,
    };
    Ok(Multi2Verdict {
        member: coeffs.is_some(),
        degree,
        zero_product: false,
        spanning_vectors: vectors.len(),
        certificate,
    })
}

/// The two generating families of `Z_2(𝔪^c, S)` in `n` variables: alternating
/// sums of degree `2c+1` and products `z_a(x_i,x_j) z_b(x_h,x_k)` of degree
/// `2c+2`. Zero and duplicate (up to sign) members are dropped.
pub fn gen2_families<F: Field>(field: &F, n: usize, c: u32) -> Result<Vec<CycleFamily<F>>> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTooSmall { p: 2, floor: 2 });
    }
    let ring = RingConfig::standard(n)?;
    let ideal = Arc::new(power_ideal(&ring, &MultiDegree::single(c as i64))?);
    let mut out: Vec<CycleFamily<F>> = Vec::new();
    let mut seen: HashMap<String, ()> = HashMap::new();
    let mut push = |fam: CycleFamily<F>, out: &mut Vec<CycleFamily<F>>| {
        if fam.chain.is_zero() {
            return;
        }
        let key = canonical_key(&fam.chain);
        if seen.insert(key, ()).is_none() {
            out.push(fam);
        }
    };
    // type (1): a's are three distinct variables, b's a multiset of degree c - 1
    let bs = component_basis(&ring, &MultiDegree::single(c as i64 - 1));
    for vars in IndexSet::subsets(n, 3) {
        let a: Vec<Monomial> = vars.iter().map(|v| ring.var(v)).collect();
        for p in 0..bs.len() {
            for q in p..bs.len() {
                let b = vec![bs[p].clone(), bs[q].clone()];
                let chain = symmetrized_cycle(field, &ideal, &a, &b)?;
                push(
                    CycleFamily {
                        label: FamilyLabel::Gen2Type1,
                        params: FamilyParams {
                            a: a.clone(),
                            b,
                            vars: Vec::new(),
                        },
                        chain,
                    },
                    &mut out,
                );
            }
        }
    }
    // type (2): products of two z generators
    let z1 = z1_generators(field, &ideal)?;
    let chains: Vec<KoszulChain<F>> = z1.iter().map(|f| f.chain.clone()).collect();
    for (idx, chain) in wedge_products(&chains, 2)? {
        let (f, g) = (&z1[idx[0]], &z1[idx[1]]);
        push(
            CycleFamily {
                label: FamilyLabel::Gen2Type2,
                params: FamilyParams {
                    a: Vec::new(),
                    b: vec![f.params.b[0].clone(), g.params.b[0].clone()],
                    vars: vec![f.params.vars[0], g.params.vars[0]],
                },
                chain,
            },
            &mut out,
        );
    }
    Ok(out)
}

/// Rendering of `±chain` normalised so the first coefficient is positive.
fn canonical_key<F: Field>(chain: &KoszulChain<F>) -> String {
    let first = chain.terms().next().map(|(_, _, c)| chain.field().render(c));
    if first.is_some_and(|s| s.starts_with('-')) {
        chain.neg().render()
    } else {
        chain.render()
    }
}

/// Degreewise comparison for the multiplication `Z_1 ⊗ Z_t → Z_{1+t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeDegree {
    pub j: i64,
    /// `dim (Z_1 · Z_t)_j`
    pub image_dim: usize,
    /// `dim (Z_{1+t})_j`
    pub target_dim: usize,
    /// `dim Tor_1(S/I, Z_t)_j`
    pub tor1_dim: usize,
}

impl SurgeDegree {
    pub fn surjective(&self) -> bool {
        self.image_dim == self.target_dim
    }

    /// Surjectivity and Tor vanishing agree in this degree.
    pub fn matches(&self) -> bool {
        self.surjective() == (self.tor1_dim == 0)
    }
}

/// For every total degree `j ≤ max_degree`: the image of `Z_1 ⊗ Z_t → Z_{1+t}`
/// and `Tor_1(K_0/B_0, Z_t) = Tor_1(S/I, Z_t)`, both in degree `j`.
///
/// Tor is computed from the presentation of `I` by its pairwise relations:
/// it is the kernel of `⊕_k Z_t(-u_k) → Z_t` modulo the image of the
/// relations `(L/u_i) e_i - (L/u_j) e_j`, `L = lcm(u_i, u_j)`.
pub fn surge_degrees<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    t: usize,
    max_degree: i64,
) -> Result<Vec<SurgeDegree>> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let shared = Arc::new(ideal.clone());
    let top = (t + 1).min(ideal.num_gens());
    let cx = KoszulComplex::new(shared, top)?;
    let n = ideal.ring().nvars();
    type Basis<E> = Arc<Vec<SparseVec<E>>>;
    let mut kernels: HashMap<(usize, Vec<u32>), Basis<F::Elem>> = HashMap::new();
    let mut kernel = |cx: &KoszulComplex, s: usize, beta: &[u32]| -> Result<Basis<F::Elem>> {
        if s > cx.top() {
            return Ok(Arc::new(Vec::new()));
        }
        let key = (s, beta.to_vec());
        if let Some(k) = kernels.get(&key) {
            return Ok(k.clone());
        }
        let k = Arc::new(cx.boundary_matrix(field, s, beta)?.kernel_basis());
        kernels.insert(key, k.clone());
        Ok(k)
    };
    let gens = ideal.gens();
    let mut out = Vec::new();
    for j in 0..=max_degree {
        let mut row = SurgeDegree {
            j,
            image_dim: 0,
            target_dim: 0,
            tor1_dim: 0,
        };
        for beta in exponent_vectors(n, j as u32) {
            // image of Z_1 ⊗ Z_t in Z_{1+t}
            if t < cx.top() {
                let target_basis = cx.level(t + 1)?.basis_at(&beta);
                row.target_dim += kernel(&cx, t + 1, &beta)?.len();
                let mut ech = EchelonBasis::new(field.clone(), target_basis.len());
                for gamma in crate::ring::MultiDegree::new(beta.iter().map(|&e| e as i64).collect()).box_below() {
                    let g: Vec<u32> = gamma.0.iter().map(|&e| e as u32).collect();
                    let rest: Vec<u32> = beta.iter().zip(&g).map(|(a, b)| a - b).collect();
                    let z1 = kernel(&cx, 1, &g)?;
                    if z1.is_empty() {
                        continue;
                    }
                    let zt = kernel(&cx, t, &rest)?;
                    for a in z1.iter() {
                        let ca = cx.chain_from(field, 1, &g, a)?;
                        for b in zt.iter() {
                            let prod = ca.wedge(&cx.chain_from(field, t, &rest, b)?)?;
                            if prod.is_zero() {
                                continue;
                            }
                            let (_, v) = cx.coordinates(&prod)?;
                            ech.insert(v);
                        }
                    }
                }
                row.image_dim += ech.rank();
            }
            // Tor_1(S/I, Z_t) in degree beta
            let amb = cx.level(t)?;
            let full = amb.basis_at(&beta);
            let mut blocks: Vec<(usize, usize, Vec<u32>)> = Vec::new(); // (generator, offset, degree)
            let mut total = 0;
            let mut chain_rows: Vec<SparseVec<F::Elem>> = Vec::new();
            let mut map_rank = EchelonBasis::new(field.clone(), full.len());
            for (k, u) in gens.iter().enumerate() {
                let Some(w) = u.quotient_of(&Monomial::new(beta.clone())) else {
                    continue;
                };
                let gamma = w.exps().to_vec();
                let small = amb.basis_at(&gamma);
                let zt = kernel(&cx, t, &gamma)?;
                for v in zt.iter() {
                    // u_k · v lands in degree beta
                    let mut img: SparseVec<F::Elem> = v
                        .iter()
                        .map(|(p, x)| (crate::homology::position(&full, small[*p]).expect("present"), x.clone()))
                        .collect();
                    img.sort_by_key(|e| e.0);
                    map_rank.insert(img);
                    let mut shifted: SparseVec<F::Elem> = v.iter().map(|(p, x)| (p + total, x.clone())).collect();
                    shifted.sort_by_key(|e| e.0);
                    chain_rows.push(shifted);
                }
                blocks.push((k, total, gamma));
                total += small.len();
            }
            let kernel_dim = chain_rows.len() - map_rank.rank();
            let mut rel = EchelonBasis::new(field.clone(), total);
            for x in 0..blocks.len() {
                for y in x + 1..blocks.len() {
                    let (kx, ox, gx) = &blocks[x];
                    let (ky, oy, gy) = &blocks[y];
                    let l = gens[*kx].lcm(&gens[*ky]);
                    let Some(w) = l.quotient_of(&Monomial::new(beta.clone())) else {
                        continue;
                    };
                    let gl = w.exps().to_vec();
                    let small = amb.basis_at(&gl);
                    let bx = amb.basis_at(gx);
                    let by = amb.basis_at(gy);
                    for v in kernel(&cx, t, &gl)?.iter() {
                        let mut r: SparseVec<F::Elem> = Vec::new();
                        for (p, val) in v {
                            let g = small[*p];
                            r.push((ox + crate::homology::position(&bx, g).expect("present"), val.clone()));
                            r.push((oy + crate::homology::position(&by, g).expect("present"), field.neg(val)));
                        }
                        r.sort_by_key(|e| e.0);
                        rel.insert(r);
                    }
                }
            }
            row.tor1_dim += kernel_dim - rel.rank();
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{cycle_space, generates_up_to};

    fn q() -> Rationals {
        Rationals
    }

    fn m_power(n: usize, c: i64) -> Arc<MonomialIdeal> {
        Arc::new(power_ideal(&RingConfig::standard(n).unwrap(), &MultiDegree::single(c)).unwrap())
    }

    #[test]
    fn z1_generator_examples() {
        let i = m_power(2, 2);
        let x = Monomial::new(vec![1, 0]);
        let z = z1_generator(&q(), &i, &x, 0, 1).unwrap();
        assert_eq!(z.render(), "-1 * [x1^2] * x2 + 1 * [x1*x2] * x1");
        assert!(z.is_cycle());
        assert_eq!(z1_generator(&q(), &i, &x, 1, 0).unwrap(), z.neg());
        assert!(z1_generator(&q(), &i, &Monomial::new(vec![2, 0]), 0, 1).is_err());
        assert!(z1_generator(&q(), &i, &x, 0, 0).is_err());
        let seg = Arc::new(power_ideal(&RingConfig::new(vec![2, 2]).unwrap(), &MultiDegree::new(vec![1, 1])).unwrap());
        assert!(matches!(
            z1_generator(&q(), &seg, &Monomial::new(vec![0, 0, 1, 0]), 0, 2),
            Err(Error::DegreeMismatch(_))
        ));
    }

    #[test]
    fn z1_generators_span_degree_three() {
        let i = m_power(2, 2);
        let gens: Vec<_> = z1_generators(&q(), &i).unwrap().into_iter().map(|f| f.chain).collect();
        assert_eq!(gens.len(), 2);
        let z3 = cycle_space(&q(), &i, 1, &MultiDegree::single(3)).unwrap();
        let rep = generates_up_to(&q(), &gens, &i, 1, &MultiDegree::single(6)).unwrap();
        assert!(rep.generates);
        assert_eq!(z3.len(), 2);
    }

    #[test]
    fn symmetrized_examples() {
        let i = m_power(2, 2);
        let (x, y) = (Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1]));
        let one = Monomial::one(2);
        // t = 1: a_2 [b a_1] - a_1 [b a_2]
        let s = symmetrized_cycle(&q(), &i, &[x.clone(), y.clone()], std::slice::from_ref(&x)).unwrap();
        assert_eq!(s, z1_generator(&q(), &i, &x, 1, 0).unwrap());
        assert!(
            symmetrized_cycle(&q(), &i, &[x.clone(), x.clone()], std::slice::from_ref(&y))
                .unwrap()
                .is_zero()
        );
        // t = 2 with α = 2
        let a = [
            Monomial::new(vec![2, 0]),
            Monomial::new(vec![1, 1]),
            Monomial::new(vec![0, 2]),
        ];
        let s = symmetrized_cycle(&q(), &i, &a, &[one.clone(), one]).unwrap();
        assert_eq!(s.num_terms(), 3);
        assert!(s.is_cycle());
        assert!(symmetrized_cycle(&q(), &i, &a[..2], &[x]).is_err());
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, s) in &perms {
            let inv = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(*s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn z1_power_examples() {
        let i = m_power(2, 2);
        let z = z1_power_component(&q(), &i, 1, &MultiDegree::single(4)).unwrap();
        assert_eq!(
            z.len(),
            cycle_space(&q(), &i, 1, &MultiDegree::single(4)).unwrap().len()
        );
        let cmp = compare_power_with_cycles(&q(), &i, 2, 6, 7).unwrap();
        assert!(cmp.iter().all(|c| c.power_dim == c.cycle_dim));
        assert!(z1_power_component(&q(), &i, 4, &MultiDegree::single(9))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn multi2_small_cases() {
        let ring = RingConfig::standard(2).unwrap();
        let c = MultiDegree::single(1);
        let trials = multi2_trials(&ring, &c, 0).unwrap();
        assert_eq!(trials.len(), 1);
        assert!(multi2_membership(&q(), &ring, &c, &trials[0]).unwrap().member);
        let seg = RingConfig::new(vec![2, 2]).unwrap();
        let c = MultiDegree::new(vec![1, 1]);
        for i in 0..2 {
            for trial in multi2_trials(&seg, &c, i).unwrap() {
                let v = multi2_membership(&q(), &seg, &c, &trial).unwrap();
                assert!(v.member, "{trial:?}");
            }
        }
        let p2 = crate::scalars::PrimeField::new(2).unwrap();
        assert!(multi2_membership(&p2, &seg, &c, &multi2_trials(&seg, &c, 0).unwrap()[0]).is_err());
    }

    #[test]
    fn gen2_for_the_conic() {
        let fams = gen2_families(&q(), 2, 2).unwrap();
        assert!(fams
            .iter()
            .all(|f| f.label == FamilyLabel::Gen2Type2 && f.chain.is_cycle()));
        let i = fams[0].chain.ideal().clone();
        let chains: Vec<_> = fams.iter().map(|f| f.chain.clone()).collect();
        assert!(
            generates_up_to(&q(), &chains, &i, 2, &MultiDegree::single(6))
                .unwrap()
                .generates
        );
        let json = families_to_json(&fams);
        assert_eq!(json.as_array().unwrap().len(), fams.len());
        let p2 = crate::scalars::PrimeField::new(2).unwrap();
        assert!(gen2_families(&p2, 2, 2).is_err());
    }

    #[test]
    fn surge_on_the_conic() {
        let i = m_power(2, 2);
        for d in surge_degrees(&q(), &i, 1, 8).unwrap() {
            assert!(d.matches(), "{d:?}");
            assert!(d.surjective());
        }
    }
}
