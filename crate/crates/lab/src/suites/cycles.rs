//! Cycle generation for powers of the (multigraded) maximal ideal.

use std::sync::Arc;

use koszul_core::cycles::{
    compare_power_with_cycles, gen2_families, multi2_membership, multi2_trials, surge_degrees, z1_generators,
};
use koszul_core::homology::{cycle_space, generates_up_to, GradedModule, KoszulComplex};
use koszul_core::ring::power_ideal;
use koszul_core::{Field, KoszulChain, MonomialIdeal, MultiDegree, RingConfig};
use serde_json::json;

use super::regularity::BOX_CEILING;
use super::{truncate, Outcome, Plan, RunConfig, Suite};
use crate::report::{CaseInput, Corpus, Window};
use crate::LabError;

/// Degrees checked for the surge equivalence.
pub const SURGE_MAX_DEGREE: i64 = 10;

fn power(blocks: &[usize], c: &[i64], t: usize) -> CaseInput {
    CaseInput::Power {
        blocks: blocks.to_vec(),
        c: c.to_vec(),
        t,
    }
}

fn multi_cases() -> Vec<CaseInput> {
    let mut out = Vec::new();
    for (blocks, c, tmax) in [
        (vec![2], vec![1], 2),
        (vec![2], vec![2], 3),
        (vec![3], vec![1], 3),
        (vec![2, 2], vec![1, 1], 3),
        (vec![2, 2], vec![1, 2], 2),
        (vec![3], vec![2], 2),
    ] {
        for t in 1..=tmax {
            out.push(power(&blocks, &c, t));
        }
    }
    out
}

fn maincyc_cases() -> Vec<CaseInput> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for c in [1i64, 2] {
            for t in 1..=3usize {
                // t beyond the number of generators leaves nothing to compare
                let r = koszul_core::ring::binomial((n as u64) + c as u64 - 1, c as u64);
                if t as u64 <= r {
                    out.push(power(&[n], &[c], t));
                }
            }
        }
    }
    out
}

fn multi2_cases() -> Result<Vec<CaseInput>, LabError> {
    let mut out = Vec::new();
    for (blocks, c, block_list) in [(vec![3], vec![2], vec![0]), (vec![2, 2], vec![1, 1], vec![0, 1])] {
        let ring = RingConfig::new(blocks.clone())?;
        for block in block_list {
            for trial in multi2_trials(&ring, &MultiDegree::new(c.clone()), block)? {
                out.push(CaseInput::Multi2 {
                    blocks: blocks.clone(),
                    c: c.clone(),
                    trial,
                });
            }
        }
    }
    Ok(out)
}

pub(super) fn plan(suite: Suite, cfg: &RunConfig) -> Result<Plan, LabError> {
    let (cases, text, floor) = match suite {
        Suite::Multi => (
            multi_cases(),
            "m^c in block rings: cycles of degree <= tc + (t-1)(1,..,1) together with U_i^t generate Z_t",
            0,
        ),
        Suite::Multi2 => (
            multi2_cases()?,
            "(c_i+1)! m^b U_i^(c_i) inside m_i^(c_i) Z_(c_i) + B_(c_i), one case per product",
            3,
        ),
        Suite::Maincyc => (
            maincyc_cases(),
            "(Z_1^t)_j = (Z_t)_j for j >= t(c+1), m^c in 2 or 3 variables",
            3,
        ),
        Suite::Gen2 => (
            vec![power(&[2], &[2], 2), power(&[2], &[3], 2), power(&[3], &[2], 2)],
            "the two gen2 families generate Z_2(m^c, S)",
            2,
        ),
        Suite::Surge => (
            vec![
                power(&[2], &[2], 1),
                power(&[2], &[1], 1),
                power(&[2], &[3], 1),
                power(&[3], &[1], 1),
            ],
            "Z_1 x Z_t -> Z_(1+t) onto in degree j iff Tor_1(S/I, Z_t)_j = 0, all j <= 10",
            0,
        ),
        _ => return Err(LabError::Usage(format!("{suite} is not a cycle suite"))),
    };
    let cases = truncate(cases, cfg, suite);
    Ok(Plan {
        corpus: Corpus {
            seed: cfg.seed,
            size: cases.len(),
            description: text.into(),
            ranges: json!({ "enumerated": true }),
        },
        cases,
        char_floor: floor,
    })
}

fn power_of(blocks: &[usize], c: &[i64]) -> Result<Arc<MonomialIdeal>, LabError> {
    let ring = RingConfig::new(blocks.to_vec())?;
    Ok(Arc::new(power_ideal(&ring, &MultiDegree::new(c.to_vec()))?))
}

/// Block degree of every fine degree in the stable box, or `None` when the
/// box is over the ceiling.
fn box_block_degree<F: Field>(m: &GradedModule<F>, ring: &RingConfig) -> Option<MultiDegree> {
    if m.box_size() > BOX_CEILING {
        return None;
    }
    Some(ring.multidegree_of(&m.stable_box()))
}

/// Largest total degree of a minimal generator, found exactly.
fn exact_generator_degree<F: Field>(m: &GradedModule<F>) -> Option<Option<i64>> {
    (m.box_size() <= BOX_CEILING).then(|| m.reg_exact().table.t(0))
}

pub(super) fn run<F: Field>(field: &F, suite: Suite, input: &CaseInput, cap: i64) -> Result<Outcome, LabError> {
    if let CaseInput::Multi2 { blocks, c, trial } = input {
        let ring = RingConfig::new(blocks.clone())?;
        let v = multi2_membership(field, &ring, &MultiDegree::new(c.clone()), trial)?;
        let observed = serde_json::to_value(&v).map_err(|e| LabError::Usage(e.to_string()))?;
        return Ok(Outcome::judged(v.member, None, observed));
    }
    let CaseInput::Power { blocks, c, t } = input else {
        return Err(LabError::Usage(format!("{suite} expects a power case")));
    };
    let t = *t;
    let ideal = power_of(blocks, c)?;
    match suite {
        Suite::Multi => multi(field, &ideal, t, cap),
        Suite::Maincyc => maincyc(field, &ideal, t, cap),
        Suite::Gen2 => gen2(field, &ideal, t),
        Suite::Surge => surge(field, &ideal, t),
        _ => Err(LabError::Usage(format!("{suite} is not a cycle suite"))),
    }
}

fn single_degree(ideal: &MonomialIdeal) -> Result<i64, LabError> {
    match ideal.equigenerated_multidegree() {
        Some(d) if d.len() == 1 => Ok(d.0[0]),
        _ => Err(LabError::Usage(
            "expected a power of the maximal ideal of a standard graded ring".into(),
        )),
    }
}

fn multi<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64) -> Result<Outcome, LabError> {
    let ring = ideal.ring();
    let d = ring.num_blocks();
    let c = ideal
        .equigenerated_multidegree()
        .ok_or_else(|| LabError::Usage("expected m^c".into()))?;
    let ones = MultiDegree::ones(d);
    let bound = c.scale(t as i64).add(&ones.scale(t as i64 - 1));
    let mut candidates: Vec<KoszulChain<F>> = Vec::new();
    for alpha in bound.box_below() {
        candidates.extend(cycle_space(field, ideal, t, &alpha)?);
    }
    let z1 = z1_generators(field, ideal)?;
    let mut u_products = 0;
    for i in 0..d {
        let target = c.add(&MultiDegree::unit(d, i));
        let u: Vec<KoszulChain<F>> = z1
            .iter()
            .filter(|f| f.chain.multidegree().as_ref() == Some(&target))
            .map(|f| f.chain.clone())
            .collect();
        for (_, p) in koszul_core::cycles::wedge_products(&u, t)? {
            if !p.is_zero() {
                candidates.push(p);
                u_products += 1;
            }
        }
    }
    // scanning the stable box of Z_t covers every minimal generator
    let cx = KoszulComplex::new(ideal.clone(), t)?;
    let z = cx.cycles(field.clone(), t)?;
    let capped = bound.add(&ones.scale(cap));
    let (window_top, certified) = match box_block_degree(&z, ring) {
        Some(b) => (
            MultiDegree::new(b.0.iter().zip(&capped.0).map(|(x, y)| *x.max(y)).collect()),
            true,
        ),
        None => (capped, false),
    };
    let rep = generates_up_to(field, &candidates, ideal, t, &window_top)?;
    let observed = json!({
        "bound": bound.0,
        "window_top": window_top.0,
        "candidates": candidates.len(),
        "u_products": u_products,
        "first_failure": rep.first_failure.map(|a| a.0),
    });
    let window = Window {
        lo: 0,
        hi: window_top.total(),
        certified,
        basis: if certified {
            "block degrees of the stable box of Z_t".into()
        } else {
            "bound + slack".into()
        },
    };
    Ok(Outcome::judged(rep.generates, Some(window), observed))
}

fn maincyc<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64) -> Result<Outcome, LabError> {
    let c = single_degree(ideal)?;
    if field.characteristic() != 0 && field.characteristic() <= t as u64 {
        return Err(LabError::Usage(format!("maincyc needs characteristic 0 or > {t}")));
    }
    let start = t as i64 * (c + 1);
    let cx = KoszulComplex::new(ideal.clone(), t)?;
    let z = cx.cycles(field.clone(), t)?;
    // once Z_t is generated in degrees <= D, equality at max(D, start) carries
    // over to every higher degree
    let gen_degree = exact_generator_degree(&z);
    let certified = gen_degree.is_some();
    let top = gen_degree.flatten().unwrap_or(start).max(start) + cap.max(1);
    let rows = compare_power_with_cycles(field, ideal, t, start, top)?;
    let ok = rows.iter().all(|r| r.power_dim == r.cycle_dim);
    let observed = json!({
        "generator_degree_Z_t": gen_degree.flatten(),
        "rows": rows,
    });
    let window = Window {
        lo: start,
        hi: top,
        certified,
        basis: if certified {
            "exact generator degree of Z_t".into()
        } else {
            "slack above t(c+1)".into()
        },
    };
    Ok(Outcome::judged(ok, Some(window), observed))
}

fn gen2<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize) -> Result<Outcome, LabError> {
    if t != 2 {
        return Err(LabError::Usage("gen2 concerns Z_2".into()));
    }
    let c = single_degree(ideal)?;
    let n = ideal.ring().nvars();
    let fams = gen2_families(field, n, c as u32)?;
    let chains: Vec<KoszulChain<F>> = fams.iter().map(|f| f.chain.clone()).collect();
    let cx = KoszulComplex::new(ideal.clone(), 2)?;
    let gen_degree = exact_generator_degree(&cx.cycles(field.clone(), 2)?);
    let stated = 2 * c + 2;
    let top = gen_degree.flatten().unwrap_or(stated).max(stated);
    let rep = generates_up_to(field, &chains, fams[0].chain.ideal(), 2, &MultiDegree::single(top))?;
    let counts = |label| fams.iter().filter(|f| f.label == label).count();
    let observed = json!({
        "type1": counts(koszul_core::cycles::FamilyLabel::Gen2Type1),
        "type2": counts(koszul_core::cycles::FamilyLabel::Gen2Type2),
        "generator_degree_Z_2": gen_degree.flatten(),
        "first_failure": rep.first_failure.map(|a| a.0),
        "degrees": rep.degrees.iter().map(|(a, s, z)| json!([a.0, s, z])).collect::<Vec<_>>(),
    });
    let window = Window {
        lo: 0,
        hi: top,
        certified: gen_degree.is_some(),
        basis: "exact generator degree of Z_2".into(),
    };
    Ok(Outcome::judged(rep.generates, Some(window), observed))
}

fn surge<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize) -> Result<Outcome, LabError> {
    let rows = surge_degrees(field, ideal, t, SURGE_MAX_DEGREE)?;
    let ok = rows.iter().all(|r| r.matches());
    let observed = json!({ "rows": rows });
    let window = Window {
        lo: 0,
        hi: SURGE_MAX_DEGREE,
        certified: false,
        basis: "every degree up to 10".into(),
    };
    Ok(Outcome::judged(ok, Some(window), observed))
}
