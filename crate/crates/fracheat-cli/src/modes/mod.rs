//! Experiment modes: each runs end to end, writes its artifacts into the
//! output directory, and returns the list of check verdicts that decide
//! the exit code.

pub mod excitation;
pub mod hoelder;
pub mod kernel_verify;
pub mod moment_oracle;
pub mod simulate_mode;

use crate::manifest::{CheckResult, OutputFile};

pub struct ModeOutcome {
    pub outputs: Vec<OutputFile>,
    pub checks: Vec<CheckResult>,
}

impl ModeOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
