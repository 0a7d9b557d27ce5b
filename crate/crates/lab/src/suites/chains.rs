//! The sign identity and the chain-level maps of the Koszul complex.

use std::sync::Arc;

use koszul_core::exterior::binomial_scalar;
use koszul_core::ring::IdealSpec;
use koszul_core::{sign, Field, IndexSet, KoszulChain, Monomial, MonomialIdeal};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Outcome, Plan, RunConfig, Suite};
use crate::corpus::{case_rng, random_ideal, Shape};
use crate::report::{CaseInput, Corpus};
use crate::LabError;

const UNIVERSE: usize = 6;

pub(super) fn plan_signs(cfg: &RunConfig) -> Plan {
    let cases: Vec<CaseInput> = (0u64..1 << UNIVERSE)
        .map(|bits| CaseInput::Signs {
            a: IndexSet::from_bits(bits).iter().map(|k| k + 1).collect(),
        })
        .take(cfg.size_for(Suite::Signs))
        .collect();
    Plan {
        corpus: Corpus {
            seed: cfg.seed,
            size: cases.len(),
            description: "sigma(A u B, C) sigma(B, A) = sigma(B, A u C) sigma(A, C) over disjoint triples in [1,6]; one case per A".into(),
            ranges: json!({ "universe": [1, UNIVERSE] }),
        },
        cases,
        char_floor: 0,
    }
}

/// `(-1)^{#{(a, b) : a > b}}`, straight from the definition.
fn sigma_oracle(a: IndexSet, b: IndexSet) -> i8 {
    let inversions = a.iter().map(|x| b.iter().filter(|&y| x > y).count()).sum::<usize>();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(super) fn run_signs(input: &CaseInput) -> Result<Outcome, LabError> {
    let CaseInput::Signs { a } = input else {
        return Err(LabError::Usage("signs expects a set A".into()));
    };
    if a.iter().any(|&k| k == 0 || k > UNIVERSE) {
        return Err(LabError::Usage(format!("A must lie in [1,{UNIVERSE}]")));
    }
    let a_set = IndexSet::from_indices(&a.iter().map(|k| k - 1).collect::<Vec<_>>())?;
    let rest = IndexSet::from_bits(((1u64 << UNIVERSE) - 1) & !a_set.bits());
    let mut checked = 0usize;
    let mut failures = Vec::new();
    // every element of the complement goes to B, to C or to neither
    let free: Vec<usize> = rest.iter().collect();
    for code in 0..3usize.pow(free.len() as u32) {
        let (mut b, mut c) = (IndexSet::default(), IndexSet::default());
        let mut x = code;
        for &k in &free {
            match x % 3 {
                1 => b = b.insert(k),
                2 => c = c.insert(k),
                _ => {}
            }
            x /= 3;
        }
        let lhs = sign(a_set.union(b), c)? * sign(b, a_set)?;
        let rhs = sign(b, a_set.union(c))? * sign(a_set, c)?;
        let oracle_ok = [(a_set.union(b), c), (b, a_set), (b, a_set.union(c)), (a_set, c)]
            .iter()
            .all(|&(p, q)| sign(p, q) == Ok(sigma_oracle(p, q)));
        checked += 1;
        if lhs != rhs || !oracle_ok {
            failures.push(json!({
                "B": b.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "C": c.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "lhs": lhs,
                "rhs": rhs,
            }));
        }
    }
    let observed = json!({ "triples": checked, "failures": failures });
    Ok(Outcome::judged(failures_empty(&observed), None, observed))
}

fn failures_empty(v: &serde_json::Value) -> bool {
    v["failures"].as_array().is_some_and(|f| f.is_empty())
}

/// Ideals with `2 ≤ r ≤ 8` generators in at most three variables.
const CHAIN_SHAPE: Shape = Shape {
    min_vars: 1,
    max_vars: 3,
    min_gens: 2,
    max_gens: 8,
    min_degree: 1,
    max_degree: 3,
    min_power: 1,
    max_power: 3,
};

pub(super) fn plan_maps(cfg: &RunConfig) -> Result<Plan, LabError> {
    let size = cfg.size_for(Suite::Maps);
    let mut cases = Vec::with_capacity(size);
    for index in 0..size {
        let mut rng = case_rng(cfg.seed, index);
        let ideal = loop {
            let n = rng.gen_range(CHAIN_SHAPE.min_vars..=CHAIN_SHAPE.max_vars);
            let i = random_ideal(&mut rng, n, &CHAIN_SHAPE)?;
            if i.num_gens() >= 2 {
                break i;
            }
        };
        let top = ideal.num_gens().min(4);
        let s = rng.gen_range(1..top);
        let t = rng.gen_range(1..=top - s);
        cases.push(CaseInput::Chains {
            ideal: IdealSpec::of(&ideal),
            s,
            t,
            seed: rng.gen(),
        });
    }
    Ok(Plan {
        corpus: Corpus {
            seed: cfg.seed,
            size,
            description: "random homogeneous chains: phi^2 = 0, Leibniz, gamma chain map, alpha gamma = C(t+s,s), alpha beta on cycles".into(),
            ranges: json!({ "vars": [1, 3], "generators": [2, 8], "s_plus_t_max": 4, "coefficients": [-3, 3] }),
        },
        cases,
        char_floor: 0,
    })
}

fn random_chain<F: Field>(
    field: &F,
    ideal: &Arc<MonomialIdeal>,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KoszulChain<F>, LabError> {
    let r = ideal.num_gens();
    let n = ideal.ring().nvars();
    let mut f = KoszulChain::zero(field.clone(), ideal.clone(), degree);
    for _ in 0..rng.gen_range(1..=5) {
        let mut pool: Vec<usize> = (0..r).collect();
        for i in (1..r).rev() {
            pool.swap(i, rng.gen_range(0..=i));
        }
        let set = IndexSet::from_indices(&pool[..degree])?;
        let w = Monomial::new((0..n).map(|_| rng.gen_range(0..=2)).collect());
        f.add_term(set, w, field.from_i64(rng.gen_range(-3..=3)))?;
    }
    Ok(f)
}

/// The first fine-homogeneous piece.
fn homogeneous<F: Field>(f: KoszulChain<F>) -> KoszulChain<F> {
    f.fine_components().into_iter().next().unwrap_or(f)
}

pub(super) fn run_maps<F: Field>(field: &F, input: &CaseInput) -> Result<Outcome, LabError> {
    let CaseInput::Chains { ideal, s, t, seed } = input else {
        return Err(LabError::Usage("maps expects a chains case".into()));
    };
    let (s, t) = (*s, *t);
    let ideal = Arc::new(ideal.build()?);
    let r = ideal.num_gens();
    if s == 0 || t == 0 || s + t > r {
        return Err(LabError::Usage(format!("need 1 <= s, t and s + t <= {r}")));
    }
    let mut rng = case_rng(*seed, 0);
    let a = homogeneous(random_chain(field, &ideal, s, &mut rng)?);
    let f = homogeneous(random_chain(field, &ideal, t, &mut rng)?);
    let g = homogeneous(random_chain(field, &ideal, s + t, &mut rng)?);
    let binom = binomial_scalar(field, t, s);

    let square_zero = g.boundary()?.boundary()?.is_zero();

    let mut second = a.wedge(&f.boundary()?)?;
    if s % 2 == 1 {
        second = second.neg();
    }
    let leibniz = a.wedge(&f)?.boundary()? == a.boundary()?.wedge(&f)?.add(&second)?;

    let chain_map = g.boundary()?.gamma_map(s - 1)? == g.gamma_map(s)?.outer_boundary()?;

    let recombination = g.gamma_map(s)?.alpha_map()? == g.scale(&binom);
    let mut reassembly = true;
    for set in IndexSet::subsets(r, s) {
        let (rest, b) = g.decompose(set)?;
        let e = KoszulChain::basis(field.clone(), ideal.clone(), set, ideal.ring().one())?;
        reassembly &= rest.add(&e.wedge(&b)?)? == g;
    }

    // alpha after beta on a boundary, which is a cycle
    let on_cycles = if s + t < r {
        let h = homogeneous(random_chain(field, &ideal, s + t + 1, &mut rng)?);
        let z = h.boundary()?;
        let beta = z.gamma_map(s)?;
        let ok = z.is_cycle()
            && beta.components().all(|(_, b)| b.is_cycle())
            && beta.outer_boundary()?.is_zero()
            && beta.alpha_map()? == z.scale(&binom);
        Some(ok)
    } else {
        None
    };
    let checks = json!({
        "boundary_squared_zero": square_zero,
        "leibniz": leibniz,
        "gamma_chain_map": chain_map,
        "alpha_gamma_binomial": recombination,
        "decomposition": reassembly,
        "alpha_beta_on_cycles": on_cycles,
        "chains": 3 + on_cycles.is_some() as usize,
    });
    let ok = square_zero && leibniz && chain_map && recombination && reassembly && on_cycles.unwrap_or(true);
    Ok(Outcome::judged(ok, None, checks))
}
