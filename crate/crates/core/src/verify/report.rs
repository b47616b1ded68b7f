//! Report layout and serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::Result;
use crate::geoengine::CheckStatus;

/// Version of the JSON layout below.
pub const SCHEMA_VERSION: u32 = 1;

/// One identity evaluated at one sample point (`point_index` is `None` for pointless suites).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub suite: String,
    pub identity: String,
    pub point_index: Option<usize>,
    pub residual: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub suite: String,
    pub identity: String,
    pub evaluated: usize,
    pub failed: usize,
    pub skipped_degenerate: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Range of the measured value, for identities that report one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_range: Option<[f64; 2]>,
}

/// A suite that was not evaluated, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub suite: String,
    pub message: String,
}

/// Wall-clock figures; excluded from the deterministic part of the report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub suites: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub engine_version: String,
    pub config: RunConfig,
    pub overall_pass: bool,
    pub summary: Vec<IdentitySummary>,
    /// Suites aborted by an error; each one fails the run.
    pub suite_failures: Vec<SuiteFailure>,
    /// Suites that do not apply to the chart; these do not affect the outcome.
    pub suites_not_applicable: Vec<SuiteFailure>,
    pub sample_points: Vec<Vec<f64>>,
    pub results: Vec<PointRecord>,
    pub timing: Timing,
}

impl VerificationReport {
    pub fn assemble(
        config: RunConfig,
        sample_points: Vec<Vec<f64>>,
        mut results: Vec<PointRecord>,
        suite_failures: Vec<SuiteFailure>,
        suites_not_applicable: Vec<SuiteFailure>,
        timing: Timing,
    ) -> Self {
        // suite order is the run order; within a suite, point order then identity order
        let order: Vec<String> = results.iter().fold(Vec::new(), |mut acc, r| {
            if !acc.contains(&r.suite) {
                acc.push(r.suite.clone());
            }
            acc
        });
        let rank = |s: &str| order.iter().position(|o| o == s).unwrap_or(usize::MAX);
        results.sort_by(|a, b| {
            rank(&a.suite)
                .cmp(&rank(&b.suite))
                .then(a.point_index.cmp(&b.point_index))
        });

        let mut summary: Vec<IdentitySummary> = Vec::new();
        for r in &results {
            let pos = summary
                .iter()
                .position(|s| s.suite == r.suite && s.identity == r.identity);
            let s = match pos {
                Some(i) => &mut summary[i],
                None => {
                    summary.push(IdentitySummary {
                        suite: r.suite.clone(),
                        identity: r.identity.clone(),
                        evaluated: 0,
                        failed: 0,
                        skipped_degenerate: 0,
                        max_residual: 0.0,
                        tolerance: r.tolerance,
                        pass: true,
                        value_range: None,
                    });
                    summary.last_mut().expect("just pushed")
                }
            };
            match r.status {
                CheckStatus::SkippedDegenerate => s.skipped_degenerate += 1,
                status => {
                    s.evaluated += 1;
                    if status == CheckStatus::Fail {
                        s.failed += 1;
                        s.pass = false;
                    }
                    if r.residual.is_nan() || r.residual > s.max_residual {
                        s.max_residual = if r.residual.is_nan() { f64::INFINITY } else { r.residual };
                    }
                    s.tolerance = s.tolerance.min(r.tolerance);
                    if let Some(v) = r.value {
                        s.value_range = Some(match s.value_range {
                            None => [v, v],
                            Some([lo, hi]) => [lo.min(v), hi.max(v)],
                        });
                    }
                }
            }
        }
        let overall_pass = suite_failures.is_empty() && summary.iter().all(|s| s.pass);
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            overall_pass,
            summary,
            suite_failures,
            suites_not_applicable,
            sample_points,
            results,
            timing,
        }
    }

    /// Full report as pretty-printed JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report without its timing field: byte-identical for identical configurations.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = self.to_json()?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }

    /// Short plain-text rendering, one line per identity.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "chart {} (n = {}), seed {}, {} point(s)\n",
            self.config.chart, self.config.n, self.config.seed, self.config.points
        ));
        for s in &self.summary {
            let status = if s.pass { "PASS" } else { "FAIL" };
            let mut line = format!(
                "{status}  {:<12} {:<26} max {:>10.3e}  tol {:>8.1e}",
                s.suite, s.identity, s.max_residual, s.tolerance
            );
            if s.skipped_degenerate > 0 {
                line.push_str(&format!("  ({} degenerate)", s.skipped_degenerate));
            }
            if let Some([lo, hi]) = s.value_range {
                if (hi - lo).abs() <= 1e-9 * hi.abs().max(1.0) {
                    line.push_str(&format!("  value {lo:.9}"));
                } else {
                    line.push_str(&format!("  value [{lo:.6}, {hi:.6}]"));
                }
            }
            out.push_str(&line);
            out.push('\n');
        }
        for f in &self.suites_not_applicable {
            out.push_str(&format!("SKIP  {:<12} {}\n", f.suite, f.message));
        }
        for f in &self.suite_failures {
            out.push_str(&format!("FAIL  {:<12} {}\n", f.suite, f.message));
        }
        out.push_str(if self.overall_pass {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}
