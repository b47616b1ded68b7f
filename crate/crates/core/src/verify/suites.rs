//! Suite catalogue and per-suite evaluation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::report::PointRecord;
use super::{algebra, RunConfig};
use crate::error::{Error, Result};
use crate::geoengine::check::{
    check_brackets, check_closed_lee_suite, check_connection_curvature, check_connection_lee, check_hk_potential,
    check_lee_closed_form, check_lee_hessian, check_rprime, check_structure_equations, einstein_residual, point_nu,
    APPROX_TOL, EXACT_TOL,
};
use crate::geoengine::fd::fd_oracle;
use crate::geoengine::transform::chart_nu;
use crate::geoengine::{
    check_roundtrip, to_hyperkahler, ChartPoint, CheckResult, CheckStatus, MetricChart, PointGeometry,
};
use crate::metriczoo::ZooEntry;

/// Tolerance of `|φ|² + ν = 0` on charts predicting it.
pub const LEE_NORM_TOL: f64 = 1e-9;
/// Tolerance of the metric round trip, relative to `‖g‖_max`.
pub const ROUNDTRIP_TOL: f64 = 1e-9;
/// Flatness of the hyper-Kähler image, `‖R‖_max / max(1, ‖g‖_max)`.
pub const FLATNESS_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Nu,
    Lee,
    Structure,
    LeeHessian,
    Rprime,
    ClosedLee,
    Brackets,
    Hkpot,
    Roundtrip,
    Algebra,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Nu,
        Suite::Lee,
        Suite::Structure,
        Suite::LeeHessian,
        Suite::Rprime,
        Suite::ClosedLee,
        Suite::Brackets,
        Suite::Hkpot,
        Suite::Roundtrip,
        Suite::Algebra,
        Suite::Oracle,
    ];

    /// Selection used when a configuration names no suite.
    pub const CHART_DEFAULT: [Suite; 9] = [
        Suite::Nu,
        Suite::Lee,
        Suite::Structure,
        Suite::LeeHessian,
        Suite::Rprime,
        Suite::ClosedLee,
        Suite::Brackets,
        Suite::Hkpot,
        Suite::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        self.info().name
    }

    pub fn info(self) -> SuiteInfo {
        let (name, summary, identities): (&str, &str, &[&str]) = match self {
            Suite::Nu => (
                "nu",
                "reduced scalar curvature ν = s/(4n(n+2)) against the chart's value; Einstein condition Ric = (s/4n)g",
                &["nu", "einstein"],
            ),
            Suite::Lee => (
                "lee",
                "Lee form φ = ½ I d*Ω_I against its closed form; connection forms a = Iφ, b = Jφ, c = Kφ; \
                 |φ|² + ν = 0 where the chart predicts it",
                &["lee-closed-form", "connection-forms", "lee-norm-plus-nu"],
            ),
            Suite::Structure => (
                "structure",
                "structure equations dΩ_I = Ω_J∧c − Ω_K∧b (cyclic) for ∇I = cJ − bK, ∇J = aK − cI, ∇K = bI − aJ; \
                 curvature of the connection forms da + b∧c = −νΩ_I (cyclic)",
                &["structure-equations", "connection-curvature"],
            ),
            Suite::LeeHessian => (
                "lee-hessian",
                "∇φ = ½((−1 + L)φ⊗φ − νg) + ½dφ and d*φ = 2nν − |φ|²",
                &["lee-hessian", "lee-codifferential"],
            ),
            Suite::Rprime => (
                "rprime",
                "R′ = R − ¼νR₀ is a hyper-Kähler curvature tensor; R′(X, Y, Z, ξ) = 0 for the Lee field ξ",
                &["rprime-hyperkahler", "rprime-xi"],
            ),
            Suite::ClosedLee => (
                "closed-lee",
                "for dφ = 0: ∇(Iφ) = ½(−φ⊗Iφ − Iφ⊗φ − Jφ∧Kφ − νΩ_I) (cyclic); d(|φ|² + ν) = −(|φ|² + ν)φ; \
                 (|φ|² + ν)e^f = C; ∇ψ = ½e^f((1 + L)φ⊗φ − νg) and ∇(Iψ) = ½e^f(φ∧Iφ − Jφ∧Kφ − νΩ_I) for ψ = e^f φ; \
                 ∇_ξ ξ = −½(|φ|² + ν)ξ",
                &[
                    "closed-lee.nabla-a-phi",
                    "closed-lee.norm-gradient",
                    "closed-lee.constant",
                    "closed-lee.nabla-psi",
                    "closed-lee.nabla-i-psi",
                    "closed-lee.xi-geodesic",
                ],
            ),
            Suite::Brackets => (
                "brackets",
                "η = e^f ξ: [η, Iη] = [η, Jη] = [η, Kη] = 0 and [Iη, Jη] = CKη (cyclic), with C against the chart's value",
                &["brackets", "bracket-constant"],
            ),
            Suite::Hkpot => (
                "hkpot",
                "hyper-Kähler potential: ∇dμ = g₀, ½d(Idμ) = Ω_I (and J, K), d(g₀(dμ, dμ)) = 2dμ; for ν ≠ 0 on \
                 g₀ = ν⁻²(|φ|² + ν)((1 + L)φ⊗φ + νg) with μ = 2ν⁻²(|φ|² + ν), plus flatness of g₀ where expected",
                &["hk.hessian", "hk.kahler-potential", "hk.gradient-norm", "hk.flat"],
            ),
            Suite::Roundtrip => (
                "roundtrip",
                "g = g_p with p = ν/4 after passing through g₀, or g₀ recovered from g_p for hyper-Kähler charts",
                &["roundtrip"],
            ),
            Suite::Algebra => (
                "algebra",
                "randomized flat-model algebra, no chart: L² = 2L + 3, the ℍ-Hermitian projector ¼(1 + L), \
                 Π, τ, π, πτ, π_hτ, the terms A₁, A₂, A₃ and R₀",
                &[
                    "l-squared",
                    "hhermitian-projector",
                    "big-pi-pair-skew",
                    "tau-order-three",
                    "pi-project",
                    "pi-tau-outer",
                    "pi-h-tau-outer",
                    "a-terms-hyperkahler",
                    "linearity",
                    "r0-scalar-curvature",
                ],
            ),
            Suite::Oracle => (
                "oracle",
                "exact derivatives of g and Γ against fourth-order central differences with step 1e-3",
                &["fd-oracle"],
            ),
        };
        SuiteInfo {
            name,
            summary,
            identities: identities.to_vec(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub identities: Vec<&'static str>,
}

pub fn list_suites() -> Vec<SuiteInfo> {
    Suite::ALL.iter().map(|s| s.info()).collect()
}

pub fn known_identity(name: &str) -> bool {
    Suite::ALL.iter().any(|s| s.info().identities.contains(&name))
}

fn record(suite: Suite, index: Option<usize>, r: CheckResult, config: &RunConfig) -> PointRecord {
    let tolerance = config.tolerance_for(&r.identity, r.tolerance);
    let status = match r.status {
        CheckStatus::SkippedDegenerate => CheckStatus::SkippedDegenerate,
        _ if r.residual <= tolerance => CheckStatus::Pass,
        _ => CheckStatus::Fail,
    };
    PointRecord {
        suite: suite.name().to_string(),
        identity: r.identity,
        point_index: index,
        residual: r.residual,
        tolerance,
        status,
        value: r.value,
    }
}

fn per_point<F>(suite: Suite, points: &[ChartPoint], config: &RunConfig, f: F) -> Result<Vec<PointRecord>>
where
    F: Fn(&ChartPoint) -> Result<Vec<CheckResult>> + Sync,
{
    let nested: Vec<Vec<PointRecord>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| Ok(f(p)?.into_iter().map(|r| record(suite, Some(i), r, config)).collect()))
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn require_riemannian(suite: Suite, chart: &MetricChart) -> Result<()> {
    if chart.riemannian {
        Ok(())
    } else {
        Err(Error::SuiteNotApplicable {
            suite: suite.name().into(),
            chart: chart.name.clone(),
            reason: "the metric is indefinite".into(),
        })
    }
}

fn nu_suite(entry: &ZooEntry, points: &[ChartPoint], config: &RunConfig) -> Result<Vec<PointRecord>> {
    let chart = &entry.chart;
    let target = match entry.expected.nu {
        Some(v) => v,
        None => chart_nu(chart)?,
    };
    per_point(Suite::Nu, points, config, |p| {
        let pg = PointGeometry::compute(chart, p)?;
        let r = pg.riemann();
        let nu = pg.reduced_scalar(&r);
        Ok(vec![
            CheckResult::new("nu", p, (nu - target).abs(), EXACT_TOL).with_value(nu),
            CheckResult::new("einstein", p, einstein_residual(&pg, &r), EXACT_TOL),
        ])
    })
}

fn lee_suite(entry: &ZooEntry, points: &[ChartPoint], config: &RunConfig) -> Result<Vec<PointRecord>> {
    let chart = &entry.chart;
    let norm_zero = entry.expected.lee_norm_plus_nu_zero;
    per_point(Suite::Lee, points, config, |p| {
        let pg = PointGeometry::compute(chart, p)?;
        let mut out = Vec::new();
        if let Some(r) = check_lee_closed_form(chart, &pg, EXACT_TOL)? {
            out.push(r);
        }
        out.push(check_connection_lee(&pg, EXACT_TOL));
        if norm_zero {
            let s = pg.lee_norm2() + point_nu(&pg);
            out.push(CheckResult::new("lee-norm-plus-nu", p, s.abs(), LEE_NORM_TOL).with_value(s));
        }
        Ok(out)
    })
}

/// Charts with `|φ|² + ν ≡ 0` have no hyper-Kähler metric attached.
fn hyperkahler_image(suite: Suite, entry: &ZooEntry) -> Result<MetricChart> {
    if entry.expected.lee_norm_plus_nu_zero {
        return Err(Error::SuiteNotApplicable {
            suite: suite.name().into(),
            chart: entry.chart.name.clone(),
            reason: "|φ|² + ν vanishes identically".into(),
        });
    }
    to_hyperkahler(&entry.chart)
}

fn hkpot_suite(entry: &ZooEntry, points: &[ChartPoint], config: &RunConfig) -> Result<Vec<PointRecord>> {
    let chart = &entry.chart;
    let image;
    let target = if chart_nu(chart)?.abs() > EXACT_TOL {
        image = hyperkahler_image(Suite::Hkpot, entry)?;
        &image
    } else {
        chart
    };
    let mu = target
        .hk_potential()
        .cloned()
        .ok_or_else(|| Error::MissingChartData(target.name.clone(), "hyper-Kähler potential"))?;
    let flat = entry.expected.hk_image_flat == Some(true);
    per_point(Suite::Hkpot, points, config, |p| {
        let q = ChartPoint::new(target, p.coords.clone())?;
        let mut out = check_hk_potential(target, &mu, &q, EXACT_TOL)?;
        if flat {
            let pg = PointGeometry::compute(target, &q)?;
            let scale = pg.g().amax().max(1.0);
            out.push(CheckResult::new(
                "hk.flat",
                p,
                pg.riemann().max_abs() / scale,
                FLATNESS_TOL,
            ));
        }
        Ok(out)
    })
}

fn brackets_suite(entry: &ZooEntry, points: &[ChartPoint], config: &RunConfig) -> Result<Vec<PointRecord>> {
    let chart = &entry.chart;
    let expected_c = entry.expected.c_constant;
    per_point(Suite::Brackets, points, config, |p| {
        let r = check_brackets(chart, p, EXACT_TOL)?;
        let mut out = Vec::new();
        if let (Some(c), Some(v)) = (expected_c, r.value) {
            let dev = (v - c).abs() / c.abs().max(1.0);
            out.push(r.clone());
            out.push(CheckResult::new("bracket-constant", p, dev, EXACT_TOL).with_value(v));
        } else {
            out.push(r);
        }
        Ok(out)
    })
}

/// Evaluate one suite over the sample points.
pub fn execute(suite: Suite, entry: &ZooEntry, points: &[ChartPoint], config: &RunConfig) -> Result<Vec<PointRecord>> {
    let chart = &entry.chart;
    match suite {
        Suite::Nu => nu_suite(entry, points, config),
        Suite::Lee => lee_suite(entry, points, config),
        Suite::Structure => per_point(suite, points, config, |p| {
            let pg = PointGeometry::compute(chart, p)?;
            Ok(vec![
                check_structure_equations(chart, p, EXACT_TOL)?,
                check_connection_curvature(&pg, EXACT_TOL),
            ])
        }),
        Suite::LeeHessian => per_point(suite, points, config, |p| {
            Ok(check_lee_hessian(&PointGeometry::compute(chart, p)?, EXACT_TOL).to_vec())
        }),
        Suite::Rprime => {
            require_riemannian(suite, chart)?;
            per_point(suite, points, config, |p| {
                check_rprime(&PointGeometry::compute(chart, p)?, EXACT_TOL, EXACT_TOL)
            })
        }
        Suite::ClosedLee => per_point(suite, points, config, |p| check_closed_lee_suite(chart, p, EXACT_TOL)),
        Suite::Brackets => brackets_suite(entry, points, config),
        Suite::Hkpot => hkpot_suite(entry, points, config),
        Suite::Roundtrip => {
            if entry.expected.lee_norm_plus_nu_zero {
                hyperkahler_image(suite, entry)?;
            }
            Ok(check_roundtrip(chart, config.p, points, ROUNDTRIP_TOL)?
                .into_iter()
                .enumerate()
                .map(|(i, r)| record(suite, Some(i), r, config))
                .collect())
        }
        Suite::Algebra => Ok(algebra::run_properties(config.seed, config.cases)?
            .into_iter()
            .map(|r| record(suite, None, r, config))
            .collect()),
        Suite::Oracle => per_point(suite, points, config, |p| {
            let a = fd_oracle(chart, p)?;
            Ok(vec![CheckResult::new("fd-oracle", p, a.worst(), APPROX_TOL)])
        }),
    }
}
