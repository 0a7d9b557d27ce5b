//! Verification suites: planning a corpus, running cases in parallel and
//! assembling a deterministic report.

mod chains;
mod cycles;
mod regularity;
mod veronese;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use koszul_core::{field_context, Field, FieldContext, FieldKind, Rationals};
use rayon::prelude::*;
use serde_json::Value;

use crate::corpus::Hypothesis;
use crate::report::{CaseInput, CaseRecord, Corpus, SuiteReport, Verdict, Window};
use crate::LabError;

pub use regularity::{module_regularity, Regularity, BOX_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Signs,
    Maps,
    Regb,
    Thm1,
    Greeny,
    RemarkB,
    Piper,
    Sato,
    Multi,
    Multi2,
    Maincyc,
    Gen2,
    Check,
    Surge,
    ProbeQ1,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Signs,
        Suite::Maps,
        Suite::Regb,
        Suite::Thm1,
        Suite::Greeny,
        Suite::RemarkB,
        Suite::Piper,
        Suite::Sato,
        Suite::Multi,
        Suite::Multi2,
        Suite::Maincyc,
        Suite::Gen2,
        Suite::Check,
        Suite::Surge,
        Suite::ProbeQ1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Signs => "signs",
            Suite::Maps => "maps",
            Suite::Regb => "regb",
            Suite::Thm1 => "thm1",
            Suite::Greeny => "greeny",
            Suite::RemarkB => "remark_b",
            Suite::Piper => "piper",
            Suite::Sato => "sato",
            Suite::Multi => "multi",
            Suite::Multi2 => "multi2",
            Suite::Maincyc => "maincyc",
            Suite::Gen2 => "gen2",
            Suite::Check => "check",
            Suite::Surge => "surge",
            Suite::ProbeQ1 => "probe_q1",
        }
    }

    /// Number of cases when `--size` is not given.
    pub fn default_size(self) -> usize {
        match self {
            Suite::Maps => 200,
            Suite::Regb | Suite::Thm1 | Suite::Greeny | Suite::RemarkB | Suite::Piper | Suite::Sato => 50,
            Suite::ProbeQ1 => 40,
            _ => usize::MAX,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "regb1" | "regb2" => "regb",
            "remarkb" => "remark_b",
            "probeq1" | "q1" => "probe_q1",
            other => other,
        }
        .to_string();
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == key)
            .ok_or_else(|| LabError::Usage(format!("unknown suite {s:?}")))
    }
}

/// Parameters of one suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// `None` runs the default size (every case for enumerated suites).
    pub size: Option<usize>,
    /// Slack added to bounds for capped scans.
    pub cap: i64,
    pub field: FieldKind,
    /// Corpus class for `probe_q1`.
    pub probe_class: Hypothesis,
    /// Whether `probe_q1` replays the square example.
    pub probe_square: bool,
    /// Record wall time in the report (breaks byte-identical reruns).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            size: None,
            cap: 2,
            field: FieldKind::Rationals,
            probe_class: Hypothesis::NotPrimary,
            probe_square: true,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn size_for(&self, suite: Suite) -> usize {
        self.size.unwrap_or(suite.default_size())
    }
}

/// What a suite will run.
pub(crate) struct Plan {
    pub corpus: Corpus,
    pub cases: Vec<CaseInput>,
    /// The field characteristic must be zero or exceed this.
    pub char_floor: u64,
}

/// Result of running one case.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub verdict: Verdict,
    pub window: Option<Window>,
    pub observed: Value,
    pub message: Option<String>,
}

impl Outcome {
    pub fn judged(ok: bool, window: Option<Window>, observed: Value) -> Self {
        Self {
            verdict: if ok { Verdict::Pass } else { Verdict::Violation },
            window,
            observed,
            message: None,
        }
    }

    pub fn with_message(mut self, m: impl Into<String>) -> Self {
        self.message = Some(m.into());
        self
    }
}

fn plan(suite: Suite, cfg: &RunConfig) -> Result<Plan, LabError> {
    match suite {
        Suite::Signs => Ok(chains::plan_signs(cfg)),
        Suite::Maps => chains::plan_maps(cfg),
        Suite::Regb | Suite::Thm1 | Suite::Greeny | Suite::RemarkB | Suite::Piper | Suite::Sato | Suite::ProbeQ1 => {
            regularity::plan(suite, cfg)
        }
        Suite::Multi | Suite::Multi2 | Suite::Maincyc | Suite::Gen2 | Suite::Surge => cycles::plan(suite, cfg),
        Suite::Check => veronese::plan(cfg),
    }
}

fn run_case<F: Field>(field: &F, suite: Suite, input: &CaseInput, cap: i64) -> Result<Outcome, LabError> {
    match suite {
        Suite::Signs => chains::run_signs(input),
        Suite::Maps => chains::run_maps(field, input),
        Suite::Regb | Suite::Thm1 | Suite::Greeny | Suite::RemarkB | Suite::Piper | Suite::Sato | Suite::ProbeQ1 => {
            regularity::run(field, suite, input, cap)
        }
        Suite::Multi | Suite::Multi2 | Suite::Maincyc | Suite::Gen2 | Suite::Surge => {
            cycles::run(field, suite, input, cap)
        }
        Suite::Check => veronese::run(field, input),
    }
}

fn dispatch(ctx: &FieldContext, suite: Suite, input: &CaseInput, cap: i64) -> Outcome {
    let result = match ctx {
        FieldContext::Rationals(f) => run_case(f, suite, input, cap),
        FieldContext::Prime(f) => run_case(f, suite, input, cap),
    };
    result.unwrap_or_else(|e| Outcome {
        verdict: Verdict::Infeasible,
        window: None,
        observed: Value::Null,
        message: Some(e.to_string()),
    })
}

/// Runs one case; a violation over a prime field is recomputed over the
/// rationals, and only a rational violation stands.
pub fn run_record(suite: Suite, index: usize, input: &CaseInput, ctx: &FieldContext, cap: i64) -> CaseRecord {
    let out = dispatch(ctx, suite, input, cap);
    let mut record = CaseRecord {
        index,
        verdict: out.verdict,
        field: ctx.kind().to_string(),
        input: input.clone(),
        window: out.window,
        observed: out.observed,
        message: out.message,
        rational_recheck: None,
    };
    if record.verdict == Verdict::Violation && matches!(ctx, FieldContext::Prime(_)) {
        let exact = dispatch(&FieldContext::Rationals(Rationals), suite, input, cap);
        record.rational_recheck = Some(exact.verdict);
        if exact.verdict != Verdict::Violation {
            record.verdict = exact.verdict;
            record.message = Some(format!(
                "prime-field artifact: the rational recomputation gives {}",
                exact.verdict.as_str()
            ));
        }
    }
    record
}

/// Reruns a single embedded case.
pub fn replay(suite: Suite, input: &CaseInput, field: FieldKind, cap: i64) -> Result<CaseRecord, LabError> {
    let ctx = field_context(field, 0)?;
    Ok(run_record(suite, 0, input, &ctx, cap))
}

/// Worker count from `KOSZUL_THREADS`, if set.
pub fn thread_limit() -> Option<usize> {
    std::env::var("KOSZUL_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport, LabError> {
    let plan = plan(suite, cfg)?;
    let ctx = field_context(cfg.field, plan.char_floor).map_err(|e| LabError::Usage(format!("{suite}: {e}")))?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| LabError::Usage(e.to_string()))?;
    let records: Vec<CaseRecord> = pool.install(|| {
        plan.cases
            .par_iter()
            .enumerate()
            .map(|(i, input)| run_record(suite, i, input, &ctx, cfg.cap))
            .collect()
    });
    let mut report = SuiteReport::assemble(suite.name(), ctx.kind().to_string(), cfg.cap, plan.corpus, records);
    if cfg.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

pub(crate) fn truncate<T>(mut cases: Vec<T>, cfg: &RunConfig, suite: Suite) -> Vec<T> {
    cases.truncate(cfg.size_for(suite));
    cases
}
