//! Passage between quaternionic Kähler metrics with closed Lee form and
//! pseudo-hyper-Kähler metrics with a potential, in both directions.

use std::sync::Arc;

use nalgebra::SymmetricEigen;

use super::chart::{ChartPoint, MetricChart, ScalarFn};
use super::check::CheckResult;
use super::hmat::HMat;
use super::local::{jet1, l_apply_coords, outer, Local};
use super::point::PointGeometry;
use crate::error::{Error, Result};
use crate::hyperdual::{constants, HyperDual};

/// Minimal distance from the singular loci kept by the transforms.
pub const TRANSFORM_MARGIN: f64 = 0.1;

/// Tolerance for the closedness and hyper-Kähler preconditions.
const PRECONDITION_TOL: f64 = 1e-8;

/// Eigenvalue signs `(positive, negative)` of the metric at `p`.
pub fn signature(chart: &MetricChart, p: &ChartPoint) -> Result<(usize, usize)> {
    let g = chart.metric_eval(&p.payload())?.re();
    let scale = g.amax();
    let eig = SymmetricEigen::new(g).eigenvalues;
    let pos = eig.iter().filter(|&&v| v > 1e-12 * scale).count();
    let neg = eig.iter().filter(|&&v| v < -1e-12 * scale).count();
    if pos + neg != eig.len() {
        return Err(Error::Degenerate("metric has a null direction".into()));
    }
    Ok((pos, neg))
}

fn definite_at(chart: &MetricChart, p: &[f64]) -> Result<bool> {
    let (_, neg) = signature(chart, &ChartPoint { coords: p.to_vec() })?;
    Ok(neg == 0)
}

/// `ν` of a chart: the nominal value if known, otherwise measured at the base point.
pub fn chart_nu(chart: &MetricChart) -> Result<f64> {
    if let Some(nu) = chart.nominal_nu {
        return Ok(nu);
    }
    let pg = PointGeometry::compute(chart, &ChartPoint::new(chart, chart.base_point.clone())?)?;
    Ok(pg.reduced_scalar(&pg.riemann()))
}

fn lee_norm2(local: &Local) -> HyperDual {
    local.lee_norm2()
}

/// Hyper-Kähler metric `g₀ = ν⁻²(g(φ,φ) + ν)((1 + L)φ⊗φ + νg)` with potential `μ = 2ν⁻²(g(φ,φ) + ν)`.
pub fn to_hyperkahler(chart: &MetricChart) -> Result<MetricChart> {
    let nu = chart_nu(chart)?;
    if nu.abs() < PRECONDITION_TOL {
        return Err(Error::InvalidParameter(format!(
            "chart `{}` has vanishing reduced scalar curvature",
            chart.name
        )));
    }
    let base = ChartPoint::new(chart, chart.base_point.clone())?;
    let pg = PointGeometry::compute(chart, &base)?;
    let dphi = pg.dlee();
    let closed = (&dphi - dphi.transpose()).amax() / dphi.amax().max(1.0);
    if closed > PRECONDITION_TOL {
        return Err(Error::LeeNotClosed { residual: closed });
    }
    let s0 = pg.lee_norm2() + nu;
    if s0.abs() < TRANSFORM_MARGIN * nu.abs() {
        return Err(Error::Degenerate(format!(
            "g(φ,φ) + ν = {s0:e} vanishes on chart `{}`",
            chart.name
        )));
    }
    let sign = s0.signum();

    let src = Arc::new(chart.clone());
    let s1 = src.clone();
    let metric = Arc::new(move |x: &[HyperDual]| {
        let local = Local::compute(&s1, x)?;
        let q = lee_norm2(&local);
        let pp = outer(&local.lee, &local.lee);
        let body = pp
            .add(&l_apply_coords(&local.structs, &pp))
            .add(&local.g.scale(HyperDual::cst(nu)));
        Ok(body.scale((q + nu) * (1.0 / (nu * nu))))
    });
    let s2 = src.clone();
    let mu: ScalarFn = Arc::new(move |x: &[HyperDual]| {
        let local = Local::compute(&s2, x)?;
        Ok((lee_norm2(&local) + nu) * (2.0 / (nu * nu)))
    });
    let s3 = src.clone();
    let margin = Arc::new(move |p: &[f64]| {
        let m = s3.margin(p);
        if !(m > 0.0) {
            return m;
        }
        match Local::compute(&s3, &constants(p)) {
            Ok(l) => m.min(sign * (l.lee_norm2().re() + nu) / nu.abs()),
            Err(_) => -1.0,
        }
    });
    let dim = chart.dim();
    let mut out = MetricChart::new(format!("{}/hk", chart.name), chart.n, metric)
        .with_domain(margin, chart.sample_margin.max(TRANSFORM_MARGIN))
        .with_sampler(chart.sampler_fn())
        .with_nu(0.0)
        .with_lee(Arc::new(move |_| Ok(vec![HyperDual::ZERO; dim])))
        .with_hk_potential(mu)
        .with_base_point(chart.base_point.clone());
    if let Some(s) = chart.structures_fn() {
        out = out.with_structures(s);
    }
    let riemannian = definite_at(&out, &chart.base_point)?;
    Ok(out.with_riemannian(riemannian))
}

/// `Q = g₀(dμ, dμ)` at the level of `x`.
fn potential_norm(chart: &MetricChart, mu: &ScalarFn, x: &[HyperDual]) -> Result<(HMat, Vec<HyperDual>, HyperDual)> {
    let g0 = chart.metric_eval(x)?;
    let (_, parts) = jet1(x, |y| Ok(vec![mu(y)?]))?;
    let dmu: Vec<HyperDual> = parts.into_iter().map(|v| v[0]).collect();
    let ginv = g0.inverse()?;
    let up = ginv.mul_vec(&dmu);
    let q = (0..dmu.len()).map(|i| up[i] * dmu[i]).sum();
    Ok((g0, dmu, q))
}

/// `g_p = −p(pQ + 1)⁻²(1 + L)dμ⊗dμ + (pQ + 1)⁻¹g₀` with `Q = g₀(dμ, dμ)`.
pub fn from_hyperkahler(chart: &MetricChart, mu: ScalarFn, p: f64) -> Result<MetricChart> {
    if !(p.is_finite() && p != 0.0) {
        return Err(Error::InvalidParameter(format!("p must be a nonzero real, got {p}")));
    }
    let base = ChartPoint::new(chart, chart.base_point.clone())?;
    let local = Local::compute(chart, &base.payload())?;
    let hk = local
        .abc
        .iter()
        .flat_map(|v| v.iter().map(|x| x.re().abs()))
        .fold(0.0f64, f64::max);
    if hk > PRECONDITION_TOL {
        return Err(Error::NotHyperKahler { residual: hk });
    }
    let (_, _, q0) = potential_norm(chart, &mu, &base.payload())?;
    let w0 = p * q0.re() + 1.0;
    if w0.abs() < TRANSFORM_MARGIN {
        return Err(Error::OutOfDomain { margin: w0.abs() });
    }
    let sign = w0.signum();

    let src = Arc::new(chart.clone());
    let (s1, m1) = (src.clone(), mu.clone());
    let metric = Arc::new(move |x: &[HyperDual]| {
        let (g0, dmu, q) = potential_norm(&s1, &m1, x)?;
        let structs = s1.structures_eval(x)?;
        let w = q * p + 1.0;
        let winv = w.recip();
        let dd = outer(&dmu, &dmu);
        let dd = dd.add(&l_apply_coords(&structs, &dd));
        Ok(dd.scale(winv * winv * (-p)).add(&g0.scale(winv)))
    });
    let (s2, m2) = (src.clone(), mu.clone());
    let potential: ScalarFn = Arc::new(move |x: &[HyperDual]| {
        let (_, _, q) = potential_norm(&s2, &m2, x)?;
        Ok(-((q * p + 1.0) * sign).ln())
    });
    let (s3, m3) = (src.clone(), mu.clone());
    let margin = Arc::new(move |x: &[f64]| {
        let m = s3.margin(x);
        if !(m > 0.0) {
            return m;
        }
        match potential_norm(&s3, &m3, &constants(x)) {
            Ok((_, _, q)) => m.min(sign * (p * q.re() + 1.0)),
            Err(_) => -1.0,
        }
    });
    let mut out = MetricChart::new(format!("{}/p={p}", chart.name), chart.n, metric)
        .with_domain(margin, chart.sample_margin.max(TRANSFORM_MARGIN))
        .with_sampler(chart.sampler_fn())
        .with_nu(4.0 * p)
        .with_lee_potential(potential)
        .with_base_point(chart.base_point.clone());
    if let Some(s) = chart.structures_fn() {
        out = out.with_structures(s);
    }
    let riemannian = definite_at(&out, &chart.base_point)?;
    Ok(out.with_riemannian(riemannian))
}

/// Entrywise comparison `‖g − g'‖_max / ‖g‖_max` of two charts at `p`.
pub fn metric_distance(a: &MetricChart, b: &MetricChart, p: &ChartPoint) -> Result<f64> {
    let ga = a.metric_eval(&p.payload())?.re();
    let gb = b.metric_eval(&p.payload())?.re();
    Ok((&ga - &gb).amax() / ga.amax())
}

/// Round trip through the opposite class of metrics at each point.
///
/// A chart with `ν ≠ 0` goes to its hyper-Kähler metric and back with
/// `p = ν/4`; a hyper-Kähler chart with a potential goes to `g_p` (default
/// `p = 1`) and back.
pub fn check_roundtrip(
    chart: &MetricChart,
    p: Option<f64>,
    points: &[ChartPoint],
    tol: f64,
) -> Result<Vec<CheckResult>> {
    let nu = chart_nu(chart)?;
    let back = if nu.abs() > PRECONDITION_TOL {
        let hk = to_hyperkahler(chart)?;
        let mu = hk
            .hk_potential()
            .cloned()
            .ok_or_else(|| Error::MissingChartData(hk.name.clone(), "hyper-Kähler potential"))?;
        from_hyperkahler(&hk, mu, nu / 4.0)?
    } else {
        let mu = chart
            .hk_potential()
            .cloned()
            .ok_or_else(|| Error::MissingChartData(chart.name.clone(), "hyper-Kähler potential"))?;
        let gp = from_hyperkahler(chart, mu, p.unwrap_or(1.0))?;
        to_hyperkahler(&gp)?
    };
    points
        .iter()
        .map(|pt| {
            let margin = back.margin(&pt.coords);
            if !(margin > 0.0) {
                return Err(Error::OutOfDomain { margin });
            }
            let r = metric_distance(chart, &back, pt)?;
            Ok(CheckResult::new("roundtrip", pt, r, tol))
        })
        .collect()
}

/// Line-integral recovery of `f` with `df = φ` from `base` to `p`.
///
/// Composite Gauss-Legendre along the straight segment: `GAUSS_PANELS`
/// panels of `GAUSS_NODES` nodes, 64 nodes in total.
pub fn recover_potential(chart: &MetricChart, base: &[f64], p: &[f64]) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(GAUSS_NODES);
    let d = p.len();
    let dir: Vec<f64> = (0..d).map(|i| p[i] - base[i]).collect();
    let mut total = 0.0;
    for panel in 0..GAUSS_PANELS {
        let (a, b) = (
            panel as f64 / GAUSS_PANELS as f64,
            (panel + 1) as f64 / GAUSS_PANELS as f64,
        );
        for (x, w) in nodes.iter().zip(&weights) {
            let s = 0.5 * (a + b) + 0.5 * (b - a) * x;
            let q: Vec<f64> = (0..d).map(|i| base[i] + s * dir[i]).collect();
            let phi = Local::compute(chart, &constants(&q))?.lee;
            let v: f64 = (0..d).map(|i| phi[i].re() * dir[i]).sum();
            total += 0.5 * (b - a) * w * v;
        }
    }
    Ok(total)
}

pub const GAUSS_NODES: usize = 16;
pub const GAUSS_PANELS: usize = 4;

/// Nodes and weights of the `m`-point Gauss-Legendre rule on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// `dμ` of a scalar field at `p`.
pub fn scalar_gradient(mu: &ScalarFn, p: &[f64]) -> Result<Vec<f64>> {
    let (_, parts) = jet1(&constants(p), |y| Ok(vec![mu(y)?]))?;
    Ok(parts.iter().map(|v| v[0].re()).collect())
}
