//! Seeded property suites over every module, with deterministic JSON reports.

mod algebraic;
mod analytic;
mod fixtures;

pub use fixtures::{FanFixture, Fixtures};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Names accepted by `--suite`, in run order.
pub const SUITES: &[&str] = &[
    "ideals",
    "depth",
    "congruence",
    "psh",
    "superadditivity",
    "volume",
    "lelong",
    "thresholds",
    "precise_invariance",
    "resolution",
    "metric",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Smallest slack over all cases; negative exactly when a case failed
    /// for suites measured by an inequality.
    pub worst_margin: Option<f64>,
    /// First few failing cases, plus suite-specific facts.
    pub notes: Vec<String>,
}

/// Accumulates cases for one suite.
pub(crate) struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: Option<f64>,
    notes: Vec<String>,
}

const MAX_FAILURE_NOTES: usize = 8;

impl Tally {
    pub(crate) fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, worst: None, notes: Vec::new() }
    }

    pub(crate) fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.failures <= MAX_FAILURE_NOTES {
                self.notes.push(format!("FAIL {}", describe()));
            }
        }
    }

    pub(crate) fn margin(&mut self, m: f64) {
        self.worst = Some(match self.worst {
            Some(w) if w <= m => w,
            _ => m,
        });
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn error(&mut self, context: &str, e: &Error) {
        self.check(false, || format!("{context}: {e}"));
    }

    pub(crate) fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            worst_margin: self.worst,
            notes: self.notes,
        }
    }
}

/// Per-suite generator: the seed mixed with the suite name and a stream index.
pub(crate) fn rng_for(seed: u64, suite: &str, stream: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Subset of [`SUITES`]; all when empty.
    pub suites: Vec<String>,
    pub fixtures: Fixtures,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        VerifyConfig { seed, suites: Vec::new(), fixtures: Fixtures::builtin() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

pub fn run_suite(name: &str, seed: u64, fixtures: &Fixtures) -> Result<SuiteResult> {
    Ok(match name {
        "ideals" => algebraic::ideals(seed),
        "depth" => algebraic::depth(seed),
        "congruence" => algebraic::congruence(seed),
        "psh" => analytic::psh(),
        "superadditivity" => algebraic::superadditivity(seed),
        "volume" => analytic::volume(&fixtures.curves),
        "lelong" => algebraic::lelong(seed),
        "thresholds" => analytic::thresholds(),
        "precise_invariance" => analytic::precise_invariance(seed),
        "resolution" => algebraic::resolution(&fixtures.fans),
        "metric" => analytic::metric(seed),
        other => {
            return Err(Error::InvalidInput(format!("unknown suite {other:?}; known: {}", SUITES.join(", "))));
        }
    })
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    for s in &config.suites {
        if !SUITES.contains(&s.as_str()) {
            return Err(Error::InvalidInput(format!("unknown suite {s:?}; known: {}", SUITES.join(", "))));
        }
    }
    let selected: Vec<&str> = SUITES
        .iter()
        .copied()
        .filter(|s| config.suites.is_empty() || config.suites.iter().any(|x| x == s))
        .collect();
    let suites = selected
        .iter()
        .map(|s| run_suite(s, config.seed, &config.fixtures))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { seed: config.seed, passed: suites.iter().all(|s| s.passed), suites })
}
