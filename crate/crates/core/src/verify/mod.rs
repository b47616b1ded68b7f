//! Seeded verification runs over a chart of the zoo.
//!
//! A [`RunConfig`] names a chart, its parameters and a list of suites. [`run`]
//! samples the points, evaluates every suite and collects the outcome in a
//! [`VerificationReport`] whose content, apart from the timing field, depends
//! only on the configuration.

pub mod algebra;
pub mod calibrate;
pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metriczoo::{by_name, ZooEntry};

pub use calibrate::{calibrate, CalibrationReport};
pub use report::{IdentitySummary, PointRecord, SuiteFailure, Timing, VerificationReport, SCHEMA_VERSION};
pub use suites::{list_suites, Suite, SuiteInfo};

/// Seed used when neither the configuration nor the environment gives one.
pub const DEFAULT_SEED: u64 = 20240611;
/// Environment variable overriding [`DEFAULT_SEED`].
pub const SEED_ENV: &str = "QKVERIFY_SEED";
pub const DEFAULT_POINTS: usize = 10;

/// Default seed, honouring [`SEED_ENV`].
pub fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub chart: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub seed: u64,
    pub points: usize,
    /// Random cases of the algebra suite.
    pub cases: usize,
    /// Tolerance applied to every identity unless overridden below.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Per-identity tolerances.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Suites to run; empty selects every chart suite.
    #[serde(default)]
    pub suites: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            chart: "hp".into(),
            n: 2,
            p: None,
            nu: None,
            seed: DEFAULT_SEED,
            points: DEFAULT_POINTS,
            cases: algebra::DEFAULT_CASES,
            tolerance: None,
            tolerances: BTreeMap::new(),
            suites: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn new(chart: &str, n: usize) -> Self {
        RunConfig {
            chart: chart.into(),
            n,
            ..Default::default()
        }
    }

    pub fn with_suites(mut self, suites: &[&str]) -> Self {
        self.suites = suites.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Parsed suite list, with the default selection filled in.
    pub fn resolved_suites(&self) -> Result<Vec<Suite>> {
        if self.suites.is_empty() {
            return Ok(Suite::CHART_DEFAULT.to_vec());
        }
        let mut out = Vec::new();
        for name in &self.suites {
            let s: Suite = name.parse()?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Check the configuration and build its chart.
    pub fn validate(&self) -> Result<ZooEntry> {
        if self.points == 0 {
            return Err(Error::InvalidParameter("at least one sample point is required".into()));
        }
        if self.cases == 0 {
            return Err(Error::InvalidParameter(
                "the algebra suite needs at least one case".into(),
            ));
        }
        for (name, t) in self
            .tolerance
            .iter()
            .map(|t| ("tolerance", t))
            .chain(self.tolerances.iter().map(|(k, v)| (k.as_str(), v)))
        {
            if !(t.is_finite() && *t >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tolerance `{name}` must be finite and non-negative"
                )));
            }
        }
        self.resolved_suites()?;
        for k in self.tolerances.keys() {
            if !suites::known_identity(k) {
                return Err(Error::InvalidParameter(format!("no identity named `{k}`")));
            }
        }
        by_name(&self.chart, self.n, self.p, self.nu)
    }

    /// Tolerance for `identity`: per-identity override, then the global one, then `default`.
    pub fn tolerance_for(&self, identity: &str, default: f64) -> f64 {
        self.tolerances
            .get(identity)
            .copied()
            .or(self.tolerance)
            .unwrap_or(default)
    }
}

/// Execute a verification run.
pub fn run(config: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let entry = config.validate()?;
    let selected = config.resolved_suites()?;
    let points = entry.chart.sample_points(config.seed, config.points)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut timing = BTreeMap::new();
    for suite in selected {
        let t0 = Instant::now();
        match suites::execute(suite, &entry, &points, config) {
            Ok(rs) => records.extend(rs),
            Err(e @ Error::SuiteNotApplicable { .. }) => skipped.push(SuiteFailure {
                suite: suite.name().to_string(),
                message: e.to_string(),
            }),
            Err(e) => failures.push(SuiteFailure {
                suite: suite.name().to_string(),
                message: e.to_string(),
            }),
        }
        timing.insert(suite.name().to_string(), t0.elapsed().as_secs_f64());
    }
    let uses_points = records.iter().any(|r| r.point_index.is_some());
    let report = VerificationReport::assemble(
        config.clone(),
        if uses_points {
            points.into_iter().map(|p| p.coords).collect()
        } else {
            Vec::new()
        },
        records,
        failures,
        skipped,
        Timing {
            total_seconds: start.elapsed().as_secs_f64(),
            suites: timing,
        },
    );
    Ok(report)
}
