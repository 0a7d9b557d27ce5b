//! Verification suites, random corpora and reports behind the `koszul-lab`
//! command line.

pub mod corpus;
pub mod report;
pub mod suites;

pub use report::{CaseInput, CaseRecord, SuiteReport, Verdict};
pub use suites::{replay, run_suite, RunConfig, Suite};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] koszul_core::Error),
}

impl LabError {
    /// Exit code: usage problems are 2, computations out of reach are 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) => 2,
            LabError::Core(koszul_core::Error::Infeasible { .. }) => 3,
            LabError::Core(_) => 2,
        }
    }
}
