//! Finite-difference oracle for the exact derivatives.

use super::chart::{ChartPoint, MetricChart};
use super::local::Local;
use super::point::PointGeometry;
use crate::error::Result;
use crate::hyperdual::constants;

/// Step of the central differences.
pub const FD_STEP: f64 = 1e-3;

/// Fourth-order central difference of `f` along coordinate `k`.
pub fn central4<F>(p: &[f64], k: usize, h: f64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let at = |s: f64| {
        let mut q = p.to_vec();
        q[k] += s * h;
        f(&q)
    };
    let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
    Ok((0..m1.len())
        .map(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h))
        .collect())
}

/// Agreement of exact and finite-difference derivatives at `p`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct OracleAgreement {
    /// `∂g` against differences of `g`.
    pub metric_first: f64,
    /// `∂Γ` (two exact levels) against differences of `Γ` (one exact level).
    pub christoffel_first: f64,
    /// `Γ` against the Levi-Civita formula on differenced `g`.
    pub christoffel: f64,
}

impl OracleAgreement {
    pub fn worst(&self) -> f64 {
        self.metric_first.max(self.christoffel_first).max(self.christoffel)
    }
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

pub fn fd_oracle(chart: &MetricChart, p: &ChartPoint) -> Result<OracleAgreement> {
    let d = chart.dim();
    let pg = PointGeometry::compute(chart, p)?;
    let metric = |q: &[f64]| -> Result<Vec<f64>> { Ok(chart.metric_eval(&constants(q))?.re().as_slice().to_vec()) };
    let gamma = |q: &[f64]| -> Result<Vec<f64>> {
        Ok(Local::compute(chart, &constants(q))?
            .gamma
            .iter()
            .map(|v| v.re())
            .collect())
    };

    let mut dg_fd = Vec::with_capacity(d);
    let (mut e1, mut s1, mut e2, mut s2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..d {
        let fd = central4(&p.coords, k, FD_STEP, metric)?;
        let exact = pg.at.dg[k].re();
        for (a, b) in exact.as_slice().iter().zip(&fd) {
            e1 = e1.max((a - b).abs());
            s1 = s1.max(a.abs());
        }
        dg_fd.push(nalgebra::DMatrix::from_column_slice(d, d, &fd));

        let fdg = central4(&p.coords, k, FD_STEP, gamma)?;
        for (a, b) in pg.partial[k].gamma.iter().map(|v| v.re()).zip(&fdg) {
            e2 = e2.max((a - b).abs());
            s2 = s2.max(a.abs());
        }
    }

    let ginv = pg.ginv();
    let (mut e3, mut s3) = (0.0f64, 0.0f64);
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let fd: f64 = 0.5
                    * (0..d)
                        .map(|l| ginv[(k, l)] * (dg_fd[i][(j, l)] + dg_fd[j][(i, l)] - dg_fd[l][(i, j)]))
                        .sum::<f64>();
                let exact = pg.gamma(k, i, j);
                e3 = e3.max((exact - fd).abs());
                s3 = s3.max(exact.abs());
            }
        }
    }
    Ok(OracleAgreement {
        metric_first: rel(e1, s1),
        christoffel_first: rel(e2, s2),
        christoffel: rel(e3, s3),
    })
}
