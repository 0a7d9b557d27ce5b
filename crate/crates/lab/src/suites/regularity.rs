//! Regularity bounds for Koszul cycles and homology of random monomial ideals.

use std::sync::Arc;

use koszul_core::homology::{GradedModule, KoszulComplex, RegScan};
use koszul_core::ring::{
    artinian_exponent, monomial_quotient_dim, power_containment, quotient_component_dim, reg_monomial_ideal, IdealSpec,
};
use koszul_core::{Field, MonomialIdeal, MultiDegree, RingConfig};
use serde_json::{json, Value};

use super::{Outcome, Plan, RunConfig, Suite};
use crate::corpus::{case_rng, sample, Hypothesis, Shape};
use crate::report::{CaseInput, Corpus, Window};
use crate::LabError;

/// Largest stable box scanned exactly; bigger modules get a capped scan.
pub const BOX_CEILING: u64 = 60_000;

/// Regularity of a module with the window that produced it.
#[derive(Clone, Debug)]
pub struct Regularity {
    pub scan: RegScan,
    pub window: Window,
}

impl Regularity {
    pub fn reg(&self) -> Option<i64> {
        self.scan.reg
    }

    /// Largest degree of a minimal generator.
    pub fn generator_degree(&self) -> Option<i64> {
        self.scan.table.t(0)
    }

    pub fn summary(&self) -> Value {
        json!({
            "reg": self.scan.reg,
            "witnesses": self.scan.witnesses,
            "certified": self.window.certified,
        })
    }
}

/// `reg` of a fine-graded module: exact over the stable box when it is small
/// enough, otherwise scanned up to `fallback_cap`.
pub fn module_regularity<F: Field>(m: &GradedModule<F>, fallback_cap: i64) -> Result<Regularity, LabError> {
    let lo = m.lowest_degree().unwrap_or(0);
    if m.box_size() <= BOX_CEILING {
        let scan = m.reg_exact();
        let window = Window {
            lo,
            hi: scan.cap,
            certified: true,
            basis: "stable box: Tor vanishes outside it".into(),
        };
        return Ok(Regularity { scan, window });
    }
    let cap = fallback_cap.max(lo);
    let scan = m.reg_scan(cap, None)?;
    let window = Window {
        lo,
        hi: cap,
        certified: false,
        basis: "capped at bound + slack".into(),
    };
    Ok(Regularity { scan, window })
}

fn description(suite: Suite) -> (&'static str, Hypothesis) {
    match suite {
        Suite::Regb => (
            "artinian ideals; reg Z_t <= t(c+1), reg H_t <= t(c+1)+c-1, and the reg(I) form",
            Hypothesis::Artinian,
        ),
        Suite::Thm1 => (
            "ideals with dim S/I <= 1; reg Z_t <= t(reg I + 1)",
            Hypothesis::DimAtMostOne,
        ),
        Suite::Greeny => (
            "artinian ideals; reg Z_t <= t(c+1)+v, reg H_t <= t(c+1)+v+c-1 with v = dim [S/I]_c",
            Hypothesis::Artinian,
        ),
        Suite::RemarkB => ("artinian ideals; m^(c+v) contained in I", Hypothesis::Artinian),
        Suite::Piper => (
            "strongly stable ideals; Z_t generated in degree <= t(reg I + 1)",
            Hypothesis::StronglyStable,
        ),
        Suite::Sato => (
            "strongly stable I, J; reg Z_t(I, S/J) <= t(reg I + 1) + reg S/J",
            Hypothesis::StronglyStable,
        ),
        _ => (
            "ideals outside the theorems; candidates for reg Z_t > t(reg I + 1)",
            Hypothesis::NotPrimary,
        ),
    }
}

/// Squarefree ideal of `K[a..f]` with `reg(I) = 3` and `reg(I^2) = 7`.
pub fn square_example() -> MonomialIdeal {
    let ring = RingConfig::standard(6).expect("six variables");
    let sets: [&[usize]; 8] = [
        &[3, 4, 5],
        &[2, 4, 5],
        &[2, 3, 5],
        &[2, 3, 4],
        &[1, 4, 5],
        &[1, 2, 3],
        &[0, 2, 5],
        &[0, 3, 4],
    ];
    let gens = sets
        .iter()
        .map(|s| (0..6).map(|v| s.contains(&v) as u32).collect())
        .collect();
    MonomialIdeal::from_exponents(ring, gens).expect("valid ideal")
}

pub(super) fn plan(suite: Suite, cfg: &RunConfig) -> Result<Plan, LabError> {
    let mut shape = Shape::default();
    if matches!(suite, Suite::Thm1 | Suite::ProbeQ1) {
        // without pure powers the generator count is all that makes t > 1 interesting
        shape.max_gens = 6;
    }
    let (text, default_hyp) = description(suite);
    let hyp = if suite == Suite::ProbeQ1 {
        cfg.probe_class
    } else {
        default_hyp
    };
    let size = cfg.size_for(suite);
    let mut cases = Vec::with_capacity(size);
    for index in 0..size {
        let mut rng = case_rng(cfg.seed, index);
        let ideal = sample(&mut rng, &shape, hyp)?;
        let quotient = if suite == Suite::Sato {
            // J lives in the same ring as I
            let n = ideal.ring().nvars();
            let pinned = Shape {
                min_vars: n,
                max_vars: n,
                ..shape
            };
            Some(IdealSpec::of(&sample(&mut rng, &pinned, Hypothesis::StronglyStable)?))
        } else {
            None
        };
        // t cycles through 1..=3; over S the top Koszul cycles Z_r vanish, so
        // t stays below the number r of generators unless S/J is involved
        let r = ideal.num_gens();
        let t_max = if suite == Suite::Sato { r } else { r.saturating_sub(1) }.clamp(1, 3);
        let t = 1 + (index % 3) % t_max;
        cases.push(CaseInput::Ideal {
            ideal: IdealSpec::of(&ideal),
            t,
            quotient,
        });
    }
    if suite == Suite::ProbeQ1 && cfg.probe_square {
        cases.push(CaseInput::Square {
            ideal: IdealSpec::of(&square_example()),
        });
    }
    let char_floor = if suite == Suite::Thm1 { 3 } else { 0 };
    Ok(Plan {
        corpus: Corpus {
            seed: cfg.seed,
            size: cases.len(),
            description: text.into(),
            ranges: json!({
                "hypothesis": hyp,
                "vars": [shape.min_vars, shape.max_vars],
                "generators": [shape.min_gens, shape.max_gens],
                "generator_degree": [shape.min_degree, shape.max_degree],
                "pure_power": [shape.min_power, shape.max_power],
                "t": [1, 3],
            }),
        },
        cases,
        char_floor,
    })
}

fn ideal_of(spec: &IdealSpec) -> Result<Arc<MonomialIdeal>, LabError> {
    Ok(Arc::new(spec.build()?))
}

fn require_standard(ideal: &MonomialIdeal) -> Result<(), LabError> {
    if !ideal.ring().is_standard() {
        return Err(LabError::Usage("regularity suites need a standard graded ring".into()));
    }
    Ok(())
}

pub(super) fn run<F: Field>(field: &F, suite: Suite, input: &CaseInput, cap: i64) -> Result<Outcome, LabError> {
    if let CaseInput::Square { ideal } = input {
        return square(ideal);
    }
    let CaseInput::Ideal { ideal, t, quotient } = input else {
        return Err(LabError::Usage(format!("{suite} expects an ideal case")));
    };
    let t = *t;
    let ideal = ideal_of(ideal)?;
    require_standard(&ideal)?;
    if field.characteristic() != 0 && suite == Suite::Thm1 && field.characteristic() <= t as u64 {
        return Err(LabError::Usage(format!("thm1 needs characteristic 0 or > {t}")));
    }
    match suite {
        Suite::Regb => regb(field, &ideal, t, cap),
        Suite::Thm1 => thm1(field, &ideal, t, cap, false),
        Suite::ProbeQ1 => thm1(field, &ideal, t, cap, true),
        Suite::Greeny => greeny(field, &ideal, t, cap),
        Suite::RemarkB => remark_b(&ideal),
        Suite::Piper => piper(field, &ideal, t, cap),
        Suite::Sato => {
            let j = quotient
                .as_ref()
                .ok_or_else(|| LabError::Usage("sato needs a quotient ideal".into()))?;
            sato(field, &ideal, &ideal_of(j)?, t, cap)
        }
        _ => Err(LabError::Usage(format!("{suite} is not a regularity suite"))),
    }
}

fn exceeds(reg: Option<i64>, bound: i64) -> bool {
    reg.is_some_and(|r| r > bound)
}

/// Merges two windows into the one covering both; certified only if both are.
fn join(a: &Window, b: &Window) -> Window {
    Window {
        lo: a.lo.min(b.lo),
        hi: a.hi.max(b.hi),
        certified: a.certified && b.certified,
        basis: if a.basis == b.basis {
            a.basis.clone()
        } else {
            format!("{}; {}", a.basis, b.basis)
        },
    }
}

fn cycles_and_homology<F: Field>(
    field: &F,
    cx: &KoszulComplex,
    t: usize,
    z_cap: i64,
    h_cap: i64,
) -> Result<(Regularity, Regularity), LabError> {
    let z = module_regularity(&cx.cycles(field.clone(), t)?, z_cap)?;
    let h = module_regularity(&cx.homology(field.clone(), t)?, h_cap)?;
    Ok((z, h))
}

fn regb<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64) -> Result<Outcome, LabError> {
    let Some(power) = artinian_exponent(ideal) else {
        return Err(LabError::Usage("regb needs an artinian quotient".into()));
    };
    let c = power.max(ideal.max_degree()) as i64;
    let reg_i = reg_monomial_ideal(ideal)?.reg;
    let ti = t as i64;
    let (bz, bh) = (ti * (c + 1), ti * (c + 1) + c - 1);
    let (bz2, bh2) = (ti * (reg_i + 1), ti * (reg_i + 1) + reg_i - 1);
    let cx = KoszulComplex::new(ideal.clone(), t + 1)?;
    let (z, h) = cycles_and_homology(field, &cx, t, bz + cap, bh + cap)?;
    let ok = !exceeds(z.reg(), bz) && !exceeds(h.reg(), bh) && !exceeds(z.reg(), bz2) && !exceeds(h.reg(), bh2);
    let observed = json!({
        "c": c,
        "reg_I": reg_i,
        "Z": z.summary(),
        "H": h.summary(),
        "bound_Z": bz,
        "bound_H": bh,
        "bound_Z_reg_I": bz2,
        "bound_H_reg_I": bh2,
    });
    Ok(Outcome::judged(ok, Some(join(&z.window, &h.window)), observed))
}

fn thm1<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64, probe: bool) -> Result<Outcome, LabError> {
    let dim = monomial_quotient_dim(ideal);
    if !probe && dim > 1 {
        return Err(LabError::Usage("thm1 needs dim S/I <= 1".into()));
    }
    let reg_i = reg_monomial_ideal(ideal)?.reg;
    let bound = t as i64 * (reg_i + 1);
    let cx = KoszulComplex::new(ideal.clone(), t)?;
    let z = module_regularity(&cx.cycles(field.clone(), t)?, bound + cap)?;
    let gap = z.reg().map(|r| r - bound);
    let observed = json!({
        "dim_S_over_I": dim,
        "reg_I": reg_i,
        "Z": z.summary(),
        "bound": bound,
        "gap": gap,
    });
    let ok = !exceeds(z.reg(), bound);
    let out = Outcome::judged(ok, Some(z.window.clone()), observed);
    Ok(if probe && !ok {
        out.with_message("candidate counterexample to reg Z_t(I,S) <= t(reg I + 1)")
    } else {
        out
    })
}

fn greeny<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64) -> Result<Outcome, LabError> {
    if artinian_exponent(ideal).is_none() {
        return Err(LabError::Usage("greeny needs an artinian quotient".into()));
    }
    let c = ideal.max_degree() as i64;
    let v = quotient_component_dim(ideal, &MultiDegree::single(c)) as i64;
    let ti = t as i64;
    let (bz, bh) = (ti * (c + 1) + v, ti * (c + 1) + v + c - 1);
    let cx = KoszulComplex::new(ideal.clone(), t + 1)?;
    let (z, h) = cycles_and_homology(field, &cx, t, bz + cap, bh + cap)?;
    let ok = !exceeds(z.reg(), bz) && !exceeds(h.reg(), bh);
    let observed = json!({
        "c": c,
        "v": v,
        "Z": z.summary(),
        "H": h.summary(),
        "bound_Z": bz,
        "bound_H": bh,
    });
    Ok(Outcome::judged(ok, Some(join(&z.window, &h.window)), observed))
}

fn remark_b(ideal: &MonomialIdeal) -> Result<Outcome, LabError> {
    let Some(k) = artinian_exponent(ideal) else {
        return Err(LabError::Usage("remark_b needs an artinian quotient".into()));
    };
    let c = ideal.max_degree();
    let v = quotient_component_dim(ideal, &MultiDegree::single(c as i64)) as u32;
    let contained = power_containment(ideal, c + v);
    let observed = json!({
        "c": c,
        "v": v,
        "contained": contained,
        "smallest_power_inside": k,
    });
    let window = Window {
        lo: (c + v) as i64,
        hi: (c + v) as i64,
        certified: true,
        basis: "every monomial of degree c+v tested".into(),
    };
    // containment of one power forces all higher ones, and the smallest such
    // power is computed independently
    Ok(Outcome::judged(contained && k <= c + v, Some(window), observed))
}

fn piper<F: Field>(field: &F, ideal: &Arc<MonomialIdeal>, t: usize, cap: i64) -> Result<Outcome, LabError> {
    let reg_i = reg_monomial_ideal(ideal)?.reg;
    let bound = t as i64 * (reg_i + 1);
    let cx = KoszulComplex::new(ideal.clone(), t)?;
    let z = module_regularity(&cx.cycles(field.clone(), t)?, bound + cap)?;
    let top = z.generator_degree();
    let observed = json!({
        "reg_I": reg_i,
        "generator_degree": top,
        "Z": z.summary(),
        "bound": bound,
    });
    Ok(Outcome::judged(!exceeds(top, bound), Some(z.window), observed))
}

fn sato<F: Field>(
    field: &F,
    ideal: &Arc<MonomialIdeal>,
    j: &Arc<MonomialIdeal>,
    t: usize,
    cap: i64,
) -> Result<Outcome, LabError> {
    let reg_i = reg_monomial_ideal(ideal)?.reg;
    // reg S/J = reg J - 1, and J is strongly stable
    let reg_q = reg_monomial_ideal(j)?.reg - 1;
    let bound = t as i64 * (reg_i + 1) + reg_q;
    let cx = KoszulComplex::with_quotient(ideal.clone(), j.clone(), t)?;
    let z = module_regularity(&cx.cycles(field.clone(), t)?, bound + cap)?;
    let observed = json!({
        "reg_I": reg_i,
        "reg_S_over_J": reg_q,
        "Z": z.summary(),
        "bound": bound,
    });
    Ok(Outcome::judged(!exceeds(z.reg(), bound), Some(z.window), observed))
}

/// Replays the mechanism that rules out the bound without the dimension
/// hypothesis: `reg(I^2) > 2 reg(I)` forces `reg Z_1(I, I) > 2 reg(I) + 1`.
fn square(spec: &IdealSpec) -> Result<Outcome, LabError> {
    let ideal = spec.build()?;
    let r1 = reg_monomial_ideal(&ideal)?.reg;
    let r2 = reg_monomial_ideal(&ideal.product(&ideal)?)?.reg;
    let exhibited = r2 > 2 * r1;
    let observed = json!({
        "reg_I": r1,
        "reg_I_squared": r2,
        "forced_lower_bound_reg_Z1_I_I": r2 + 1,
        "bound_with_M_equal_I": 2 * r1 + 1,
        "mechanism_exhibited": exhibited,
    });
    let msg = if exhibited {
        "reg(I^2) > 2 reg(I), so reg Z_1(I, I) exceeds reg(I) + 1 + reg(I)"
    } else {
        "reg(I^2) <= 2 reg(I) for this ideal"
    };
    Ok(Outcome::judged(true, None, observed).with_message(msg))
}
