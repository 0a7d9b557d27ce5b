//! Suite reports and their JSON and table renderings.

use std::fmt::Write as _;

use koszul_core::cycles::Multi2Trial;
use koszul_core::ring::IdealSpec;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one case, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Infeasible,
    Violation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Infeasible => "infeasible",
            Verdict::Violation => "violation",
        }
    }

    /// Process exit code for a run ending in this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Violation => 1,
            Verdict::Infeasible => 3,
        }
    }
}

/// Everything needed to rerun a case in isolation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseInput {
    /// All disjoint pairs `B, C` of `[1,6] \ A`.
    Signs {
        a: Vec<usize>,
    },
    /// Random chains drawn from `seed` for the ideal, in degrees `s` and `t`.
    Chains {
        ideal: IdealSpec,
        s: usize,
        t: usize,
        seed: u64,
    },
    /// `Z_t` and `H_t` of `I` over `S` or over `S/J`.
    Ideal {
        ideal: IdealSpec,
        t: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quotient: Option<IdealSpec>,
    },
    /// `𝔪^𝔠` in the block ring with degree `t` of the Koszul complex.
    Power {
        blocks: Vec<usize>,
        c: Vec<i64>,
        t: usize,
    },
    Multi2 {
        blocks: Vec<usize>,
        c: Vec<i64>,
        trial: Multi2Trial,
    },
    Veronese {
        blocks: Vec<usize>,
        c: Vec<i64>,
    },
    /// An ideal whose square has regularity above twice its own.
    Square {
        ideal: IdealSpec,
    },
}

/// Degree range a case inspected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    /// True when vanishing outside the window is proven, not assumed.
    pub certified: bool,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub index: usize,
    pub verdict: Verdict,
    pub field: String,
    pub input: CaseInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    /// Exact dimensions and bounds found.
    pub observed: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Verdict of the rational recomputation after a prime-field violation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_recheck: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub seed: u64,
    pub size: usize,
    pub description: String,
    pub ranges: Value,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub violation: usize,
    pub infeasible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub field: String,
    pub cap: i64,
    pub corpus: Corpus,
    pub verdict: Verdict,
    pub summary: Summary,
    pub cases: Vec<CaseRecord>,
    /// Only filled on request; it would break byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn assemble(suite: &str, field: String, cap: i64, corpus: Corpus, cases: Vec<CaseRecord>) -> Self {
        let mut summary = Summary::default();
        for c in &cases {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Violation => summary.violation += 1,
                Verdict::Infeasible => summary.infeasible += 1,
            }
        }
        let verdict = cases.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
        Self {
            suite: suite.to_string(),
            field,
            cap,
            corpus,
            verdict,
            summary,
            cases,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Cases that are not passes, in index order.
    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| c.verdict != Verdict::Pass)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} field {} seed {} size {} cap {}",
            self.suite, self.field, self.corpus.seed, self.corpus.size, self.cap
        );
        let _ = writeln!(out, "corpus: {}", self.corpus.description);
        let _ = writeln!(out, "{:>5}  {:<10}  {:<14}  observed", "case", "verdict", "window");
        for c in &self.cases {
            let window = c
                .window
                .as_ref()
                .map(|w| format!("[{},{}]{}", w.lo, w.hi, if w.certified { "" } else { "*" }))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{:>5}  {:<10}  {:<14}  {}",
                c.index,
                c.verdict.as_str(),
                window,
                c.observed
            );
            if let Some(m) = &c.message {
                let _ = writeln!(out, "       {m}");
            }
        }
        let _ = writeln!(
            out,
            "{}: {} pass, {} violation, {} infeasible (* = capped window)",
            self.verdict.as_str().to_uppercase(),
            self.summary.pass,
            self.summary.violation,
            self.summary.infeasible
        );
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "wall time {ms} ms");
        }
        out
    }
}
