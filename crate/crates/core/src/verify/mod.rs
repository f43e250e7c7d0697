//! Seeded property checks over every module, plus report-only experiments.
//!
//! A suite either asserts (cases, passes, failures with a replayable `nct`
//! command) or observes (`observations`, never failing). Reports depend only
//! on the suite name and the seed.

mod oracle;
mod suites;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub use oracle::{dyadic_interval, interval_compare, matrix_panel, sampled_height, theta_panel};

pub const SUITES: [&str; 8] = [
    "exact",
    "modular",
    "halfplane",
    "dimension",
    "ext",
    "moduli",
    "height-invariance",
    "composition-audit",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub property: String,
    pub input: String,
    pub replay: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub name: String,
    pub summary: String,
    pub data: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub passes: u64,
    pub failures: Vec<Failure>,
    pub observations: Vec<Observation>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}): {}/{} passed",
            self.suite, self.seed, self.passes, self.cases
        )?;
        for fail in &self.failures {
            writeln!(f, "  FAIL {}: {}", fail.property, fail.input)?;
            writeln!(f, "    replay: {}", fail.replay)?;
        }
        for obs in &self.observations {
            writeln!(f, "  observed {}: {}", obs.name, obs.summary)?;
        }
        Ok(())
    }
}

/// Accumulates one report.
pub(crate) struct Runner {
    pub(crate) rng: ChaCha8Rng,
    report: SuiteReport,
}

impl Runner {
    fn new(suite: &str, seed: u64) -> Self {
        Runner {
            rng: ChaCha8Rng::seed_from_u64(seed),
            report: SuiteReport {
                suite: suite.to_string(),
                seed,
                cases: 0,
                passes: 0,
                failures: Vec::new(),
                observations: Vec::new(),
            },
        }
    }

    /// Records one case; `input` and `replay` are built only on failure.
    pub(crate) fn check(
        &mut self,
        ok: bool,
        property: &str,
        input: impl FnOnce() -> String,
        replay: impl FnOnce() -> String,
    ) {
        self.report.cases += 1;
        if ok {
            self.report.passes += 1;
        } else {
            self.report.failures.push(Failure {
                property: property.to_string(),
                input: input(),
                replay: replay(),
            });
        }
    }

    pub(crate) fn observe(&mut self, name: &str, summary: String, data: serde_json::Value) {
        self.report.observations.push(Observation {
            name: name.to_string(),
            summary,
            data,
        });
    }

    /// Replay command for checks without a dedicated subcommand.
    pub(crate) fn suite_replay(&self) -> String {
        format!("nct verify --suite {} --seed {}", self.report.suite, self.report.seed)
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut runner = Runner::new(name, seed);
    match name {
        "exact" => suites::exact(&mut runner),
        "modular" => suites::modular(&mut runner),
        "halfplane" => suites::halfplane(&mut runner),
        "dimension" => suites::dimension(&mut runner),
        "ext" => suites::ext(&mut runner),
        "moduli" => suites::moduli(&mut runner),
        "height-invariance" => suites::height_invariance(&mut runner),
        "composition-audit" => suites::composition_audit(&mut runner),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }
    Ok(runner.report)
}

/// Every suite in [`SUITES`] order.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed).expect("known suite"))
        .collect()
}
