//! Green-Lazarsfeld index of Segre-Veronese rings.

use koszul_core::veronese::{betti_entry, np_check, SegreVeroneseSpec};
use koszul_core::Field;
use serde_json::json;

use super::{truncate, Outcome, Plan, RunConfig, Suite};
use crate::report::{CaseInput, Corpus, Window};
use crate::LabError;

const SPOT_CHECKS: usize = 10;
const SPOT_OFFSETS: i64 = 6;

const SPECS: [(&[usize], &[i64]); 5] = [
    (&[3], &[2]),
    (&[2, 2], &[1, 1]),
    (&[2], &[2]),
    (&[2], &[3]),
    (&[2, 3], &[1, 1]),
];

pub(super) fn plan(cfg: &RunConfig) -> Result<Plan, LabError> {
    let cases: Vec<CaseInput> = SPECS
        .iter()
        .map(|(b, c)| CaseInput::Veronese {
            blocks: b.to_vec(),
            c: c.to_vec(),
        })
        .collect();
    let cases = truncate(cases, cfg, Suite::Check);
    let floor = cases
        .iter()
        .filter_map(|c| match c {
            CaseInput::Veronese { c, .. } => c.iter().min().map(|m| 1 + *m as u64),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    Ok(Plan {
        corpus: Corpus {
            seed: cfg.seed,
            size: cases.len(),
            description: "index of S^(c) is at least min(c) + 1; Betti numbers past the vanishing line are zero".into(),
            ranges: json!({ "enumerated": true }),
        },
        cases,
        char_floor: floor,
    })
}

pub(super) fn run<F: Field>(field: &F, input: &CaseInput) -> Result<Outcome, LabError> {
    let CaseInput::Veronese { blocks, c } = input else {
        return Err(LabError::Usage("check expects a Segre-Veronese case".into()));
    };
    let spec = SegreVeroneseSpec::new(blocks.clone(), c.clone())?;
    let u = spec.min_c();
    let p = field.characteristic();
    if p != 0 && p <= 1 + u as u64 {
        return Err(LabError::Usage(format!("check needs characteristic 0 or > {}", 1 + u)));
    }
    let target = (u + 1) as usize;
    let (holds, report) = np_check(field, &spec, target)?;
    // the SPOT_CHECKS forced zeros nearest the vanishing line, computed anyway
    let mut spots = Vec::new();
    let mut spots_ok = true;
    'outer: for offset in 1..=SPOT_OFFSETS {
        for i in 1..=target {
            if spots.len() == SPOT_CHECKS {
                break 'outer;
            }
            let j = spec.window_end(i) + offset;
            let forced = spec.forced_zero(i, j);
            match betti_entry(field, &spec, i, j) {
                Ok(dim) => {
                    spots_ok &= forced && dim == 0;
                    spots.push(json!({ "i": i, "j": j, "dim": dim, "forced_zero": forced }));
                }
                Err(koszul_core::Error::Infeasible { .. }) => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let observed = json!({
        "spec": spec.to_string(),
        "target": target,
        "index": report.to_string(),
        "table": report.table.entries,
        "spot_checks": spots,
    });
    let window = Window {
        lo: 1,
        hi: target as i64,
        certified: true,
        basis: "rows past (j-i-1)min(c) >= i vanish".into(),
    };
    Ok(Outcome::judged(holds && spots_ok, Some(window), observed))
}
