//! Random monomial ideals for the falsification suites.
//!
//! Every case draws from its own ChaCha stream keyed by `(seed, index)`, so a
//! case can be regenerated without replaying the ones before it.

use koszul_core::ring::{borel_closure, monomial_quotient_dim, IdealSpec};
use koszul_core::{Monomial, MonomialIdeal, Result, RingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Bounds for random generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub min_vars: usize,
    pub max_vars: usize,
    pub min_gens: usize,
    pub max_gens: usize,
    pub min_degree: u32,
    pub max_degree: u32,
    /// Exponent range used when adding pure powers.
    pub min_power: u32,
    pub max_power: u32,
}

impl Default for Shape {
    fn default() -> Self {
        // linear generators and first powers only cut down the number of
        // variables, so the defaults start at degree 2
        Self {
            min_vars: 2,
            max_vars: 3,
            min_gens: 2,
            max_gens: 4,
            min_degree: 2,
            max_degree: 3,
            min_power: 2,
            max_power: 3,
        }
    }
}

/// Post-processing applied to the random antichain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// No post-processing.
    Any,
    /// Pure powers of every variable are added: `dim S/I = 0`.
    Artinian,
    /// Pure powers are added until `dim S/I ≤ 1`.
    DimAtMostOne,
    /// Closure under the Borel moves.
    StronglyStable,
    /// Resampled until `dim S/I ≥ 1`.
    NotPrimary,
}

pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn random_monomial(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> Monomial {
    let mut exps = vec![0u32; n];
    for _ in 0..degree {
        exps[rng.gen_range(0..n)] += 1;
    }
    Monomial::new(exps)
}

/// Minimal generators of a random ideal in `n` variables (an antichain, since
/// [`MonomialIdeal::new`] discards redundant generators).
pub fn random_ideal(rng: &mut ChaCha8Rng, n: usize, shape: &Shape) -> Result<MonomialIdeal> {
    let ring = RingConfig::standard(n)?;
    let k = rng.gen_range(shape.min_gens..=shape.max_gens);
    let gens = (0..k)
        .map(|_| {
            let d = rng.gen_range(shape.min_degree..=shape.max_degree);
            random_monomial(rng, n, d)
        })
        .collect();
    MonomialIdeal::new(ring, gens)
}

fn with_power(ideal: &MonomialIdeal, v: usize, e: u32) -> Result<MonomialIdeal> {
    let mut gens = ideal.gens().to_vec();
    let mut p = vec![0; ideal.ring().nvars()];
    p[v] = e;
    gens.push(Monomial::new(p));
    MonomialIdeal::new(ideal.ring().clone(), gens)
}

fn has_pure_power(ideal: &MonomialIdeal, v: usize) -> bool {
    ideal.gens().iter().any(|g| g.support().eq(std::iter::once(v)))
}

/// Adds `x_v^e` with random `e` in the shape's power range for each variable lacking a pure
/// power, visiting variables in random order until `dim S/I ≤ target`.
pub fn cut_dimension(
    rng: &mut ChaCha8Rng,
    ideal: MonomialIdeal,
    target: usize,
    shape: &Shape,
) -> Result<MonomialIdeal> {
    let n = ideal.ring().nvars();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut ideal = ideal;
    for v in order {
        if monomial_quotient_dim(&ideal) <= target {
            break;
        }
        if !has_pure_power(&ideal, v) {
            let e = rng.gen_range(shape.min_power..=shape.max_power);
            ideal = with_power(&ideal, v, e)?;
        }
    }
    Ok(ideal)
}

/// One random ideal satisfying `hyp`.
pub fn sample(rng: &mut ChaCha8Rng, shape: &Shape, hyp: Hypothesis) -> Result<MonomialIdeal> {
    let lo = match hyp {
        Hypothesis::NotPrimary => shape.min_vars.max(2),
        _ => shape.min_vars,
    };
    let n = rng.gen_range(lo..=shape.max_vars.max(lo));
    match hyp {
        Hypothesis::Any => random_ideal(rng, n, shape),
        Hypothesis::Artinian => {
            let ideal = random_ideal(rng, n, shape)?;
            cut_dimension(rng, ideal, 0, shape)
        }
        Hypothesis::DimAtMostOne => {
            let ideal = random_ideal(rng, n, shape)?;
            cut_dimension(rng, ideal, 1, shape)
        }
        Hypothesis::StronglyStable => {
            let seed = random_ideal(rng, n, shape)?;
            borel_closure(seed.ring(), seed.gens())
        }
        Hypothesis::NotPrimary => loop {
            let ideal = random_ideal(rng, n, shape)?;
            if monomial_quotient_dim(&ideal) >= 1 {
                return Ok(ideal);
            }
        },
    }
}

/// Serializable description of a sampled ideal, for embedding in reports.
pub fn spec_of(ideal: &MonomialIdeal) -> IdealSpec {
    IdealSpec::of(ideal)
}
