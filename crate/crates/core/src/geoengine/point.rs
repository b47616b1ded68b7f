//! Geometry at a single chart point, with exact second derivatives.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chart::{ChartPoint, MetricChart};
use super::local::{gidx, Local};
use crate::curvalg::CurvTensor;
use crate::error::{Error, Result};
use crate::hyperdual::HyperDual;
use crate::quatlin::{BilinearForm, Structure};

/// Metrics with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Levi-Civita and structure data at a point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectionData {
    /// `Γ^k_ij` at `(k·d + i)·d + j`.
    pub christoffel: Vec<f64>,
    /// Connection forms (a, b, c).
    pub abc: [Vec<f64>; 3],
    pub lee: Vec<f64>,
    pub xi: Vec<f64>,
}

/// All pointwise quantities of a chart at `p`, with their first partials.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub point: ChartPoint,
    pub n: usize,
    pub riemannian: bool,
    /// Values (hyper-dual numbers of order zero).
    pub at: Local,
    /// `partial[k]` holds `∂_k` of every field of `at`.
    pub partial: Vec<Local>,
    /// Columns: a g-orthonormal frame adapted to the structures; identity for indefinite metrics.
    pub frame: DMatrix<f64>,
    /// Inverse of `frame`.
    pub coframe: DMatrix<f64>,
}

fn re(v: &[HyperDual]) -> Vec<f64> {
    v.iter().map(|x| x.re()).collect()
}

impl PointGeometry {
    pub fn compute(chart: &MetricChart, p: &ChartPoint) -> Result<Self> {
        let p = ChartPoint::new(chart, p.coords.clone())?;
        let g0 = chart.metric_eval(&p.payload())?.re();
        let sv = g0.clone().svd(false, false).singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(cond <= MAX_CONDITION) {
            return Err(Error::SingularMetric { cond });
        }

        let d = chart.dim();
        let mut at = None;
        let mut partial = Vec::with_capacity(d);
        for k in 0..d {
            let local = Local::compute(chart, &p.seeded(k, 0))?;
            if at.is_none() {
                at = Some(local.map(&|v| v.drop_eps(0)));
            }
            partial.push(local.map(&|v| v.eps(0)));
        }
        let at = at.expect("positive dimension");
        let (frame, coframe) = if chart.riemannian {
            let structs = [at.structs[0].re(), at.structs[1].re(), at.structs[2].re()];
            let e = adapted_frame(&at.g.re(), &structs)?;
            let inv = e.transpose() * at.g.re();
            (e, inv)
        } else {
            (DMatrix::identity(d, d), DMatrix::identity(d, d))
        };
        Ok(PointGeometry {
            point: p,
            n: chart.n,
            riemannian: chart.riemannian,
            at,
            partial,
            frame,
            coframe,
        })
    }

    pub fn dim(&self) -> usize {
        self.at.dim
    }

    pub fn g(&self) -> DMatrix<f64> {
        self.at.g.re()
    }

    pub fn ginv(&self) -> DMatrix<f64> {
        self.at.ginv.re()
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        self.at.gamma(k, i, j).re()
    }

    /// `∂_m Γ^k_ij`.
    pub fn dgamma(&self, m: usize, k: usize, i: usize, j: usize) -> f64 {
        self.partial[m].gamma(k, i, j).re()
    }

    pub fn structure(&self, a: Structure) -> DMatrix<f64> {
        self.at.structs[a as usize].re()
    }

    pub fn lee(&self) -> Vec<f64> {
        re(&self.at.lee)
    }

    /// `∂_i φ_j` as a matrix.
    pub fn dlee(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.partial[i].lee[j].re())
    }

    pub fn xi(&self) -> Vec<f64> {
        re(&self.at.xi())
    }

    pub fn lee_norm2(&self) -> f64 {
        self.at.lee_norm2().re()
    }

    pub fn abc(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|a| re(&self.at.abc[a]))
    }

    /// `∂_i` of the connection forms, `[a, b, c][i][j] = ∂_i (·)_j`.
    pub fn dabc(&self) -> [DMatrix<f64>; 3] {
        let d = self.dim();
        std::array::from_fn(|a| DMatrix::from_fn(d, d, |i, j| self.partial[i].abc[a][j].re()))
    }

    pub fn connection(&self) -> ConnectionData {
        ConnectionData {
            christoffel: re(&self.at.gamma),
            abc: self.abc(),
            lee: self.lee(),
            xi: self.xi(),
        }
    }

    pub fn kahler_form(&self, a: Structure) -> BilinearForm {
        BilinearForm::from_fn(self.dim(), |i, j| self.at.omega[a as usize][(i, j)].re())
    }

    /// Fully lowered curvature, `R(X, Y, Z, W) = g(R(X, Y)Z, W)`.
    pub fn riemann(&self) -> CurvTensor {
        let d = self.dim();
        let g = self.g();
        let gm = |r: usize, m: usize, l: usize| self.gamma(r, m, l);
        // up[ρ][σ][μ][ν] = R^ρ_σμν
        let mut up = vec![0.0; d.pow(4)];
        let ui = |r: usize, s: usize, m: usize, n: usize| ((r * d + s) * d + m) * d + n;
        for r in 0..d {
            for s in 0..d {
                for m in 0..d {
                    for n in (m + 1)..d {
                        let mut v = self.dgamma(m, r, n, s) - self.dgamma(n, r, m, s);
                        for l in 0..d {
                            v += gm(r, m, l) * gm(l, n, s) - gm(r, n, l) * gm(l, m, s);
                        }
                        up[ui(r, s, m, n)] = v;
                        up[ui(r, s, n, m)] = -v;
                    }
                }
            }
        }
        CurvTensor::from_fn(d, |m, n, s, k| (0..d).map(|r| g[(k, r)] * up[ui(r, s, m, n)]).sum())
    }

    /// `s = g^{il} g^{jk} R_ijkl`.
    pub fn scalar_curvature(&self, r: &CurvTensor) -> f64 {
        let d = self.dim();
        let gi = self.ginv();
        let mut s = 0.0;
        for i in 0..d {
            for l in 0..d {
                if gi[(i, l)] == 0.0 {
                    continue;
                }
                for j in 0..d {
                    for k in 0..d {
                        s += gi[(i, l)] * gi[(j, k)] * r.get(i, j, k, l);
                    }
                }
            }
        }
        s
    }

    /// `ν = s / (4n(n+2))`.
    pub fn reduced_scalar(&self, r: &CurvTensor) -> f64 {
        let n = self.n as f64;
        self.scalar_curvature(r) / (4.0 * n * (n + 2.0))
    }

    /// Frame components of a covariant 2-tensor.
    pub fn form_to_frame(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.frame.transpose() * b * &self.frame
    }

    pub fn covector_to_frame(&self, a: &[f64]) -> Vec<f64> {
        let v = self.frame.transpose() * nalgebra::DVector::from_column_slice(a);
        v.iter().copied().collect()
    }

    pub fn vector_to_frame(&self, v: &[f64]) -> Vec<f64> {
        let w = &self.coframe * nalgebra::DVector::from_column_slice(v);
        w.iter().copied().collect()
    }

    /// Frame components of a covariant 3-tensor stored as `t[(i·d + j)·d + k]`.
    pub fn three_to_frame(&self, t: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let e = &self.frame;
        let mut cur = t.to_vec();
        for _ in 0..3 {
            let mut next = vec![0.0; d * d * d];
            for i in 0..d {
                for rest in 0..d * d {
                    let v = cur[i * d * d + rest];
                    if v == 0.0 {
                        continue;
                    }
                    for a in 0..d {
                        next[rest * d + a] += v * e[(i, a)];
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn curvature_to_frame(&self, r: &CurvTensor) -> CurvTensor {
        r.transform(&self.frame)
    }

    pub fn curvature_from_frame(&self, r: &CurvTensor) -> CurvTensor {
        r.transform(&self.coframe)
    }
}

/// Orthonormal frame `E` (columns) with `A E_{4λ} = −E_{4λ+c}` for the standard images.
///
/// Each new block starts from the first coordinate vector not yet in the span.
pub fn adapted_frame(g: &DMatrix<f64>, structs: &[DMatrix<f64>; 3]) -> Result<DMatrix<f64>> {
    let d = g.nrows();
    let ip = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| (a.transpose() * g * b)[(0, 0)];
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(d);
    for m in 0..d {
        if cols.len() == d {
            break;
        }
        let mut v = nalgebra::DVector::from_fn(d, |i, _| if i == m { 1.0 } else { 0.0 });
        for _ in 0..2 {
            for c in &cols {
                let proj = ip(c, &v);
                v -= c * proj;
            }
        }
        let nn = ip(&v, &v);
        if nn <= 1e-10 * g[(m, m)].abs() {
            continue;
        }
        if nn < 0.0 {
            return Err(Error::Degenerate("metric is not positive definite".into()));
        }
        let v = v / nn.sqrt();
        let block: Vec<_> = std::iter::once(v.clone())
            .chain(structs.iter().map(|a| -(a * &v)))
            .collect();
        for mut w in block {
            for c in &cols {
                let proj = ip(c, &w);
                w -= c * proj;
            }
            let nw = ip(&w, &w);
            if !(nw > 0.0) {
                return Err(Error::Degenerate("structures are not g-orthogonal".into()));
            }
            cols.push(w / nw.sqrt());
        }
    }
    if cols.len() != d {
        return Err(Error::Degenerate("frame construction did not span".into()));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Levi-Civita connection and structure data at `p`.
pub fn christoffel(chart: &MetricChart, p: &ChartPoint) -> Result<ConnectionData> {
    Ok(PointGeometry::compute(chart, p)?.connection())
}

pub fn riemann(chart: &MetricChart, p: &ChartPoint) -> Result<CurvTensor> {
    Ok(PointGeometry::compute(chart, p)?.riemann())
}

pub fn reduced_scalar(chart: &MetricChart, p: &ChartPoint) -> Result<f64> {
    let pg = PointGeometry::compute(chart, p)?;
    Ok(pg.reduced_scalar(&pg.riemann()))
}

pub fn kahler_form(chart: &MetricChart, p: &ChartPoint, which: Structure) -> Result<BilinearForm> {
    let x = p.payload();
    let g = chart.metric_eval(&x)?.re();
    let a = chart.structures_eval(&x)?[which as usize].re();
    BilinearForm::from_matrix(a.transpose() * g)
}

pub fn lee_form(chart: &MetricChart, p: &ChartPoint) -> Result<Vec<f64>> {
    Ok(re(&Local::compute(chart, &p.payload())?.lee))
}

/// Connection forms `(a, b, c)` at `p` and the residual of reconstructing `∇I, ∇J, ∇K` from them.
pub fn connection_abc(chart: &MetricChart, p: &ChartPoint) -> Result<([Vec<f64>; 3], f64)> {
    let local = Local::compute(chart, &p.payload())?;
    Ok((
        std::array::from_fn(|a| re(&local.abc[a])),
        reconstruction_residual(&local),
    ))
}

/// `max |∇A − (I, J, K) D(a, b, c)|`, relative to `max(1, |∇A|)`.
pub fn reconstruction_residual(local: &Local) -> f64 {
    let d = local.dim;
    let s: [DMatrix<f64>; 3] = std::array::from_fn(|a| local.structs[a].re());
    let abc: [Vec<f64>; 3] = std::array::from_fn(|a| re(&local.abc[a]));
    let (a, b, c) = (&abc[0], &abc[1], &abc[2]);
    let mut err = 0.0f64;
    let mut scale = 1.0f64;
    for k in 0..d {
        let expect = [
            &s[1] * c[k] - &s[2] * b[k],
            &s[2] * a[k] - &s[0] * c[k],
            &s[0] * b[k] - &s[1] * a[k],
        ];
        for x in 0..3 {
            let got = local.nabla[x][k].re();
            scale = scale.max(got.amax());
            err = err.max((got - &expect[x]).amax());
        }
    }
    err / scale
}

/// Metric-compatibility residual `max |∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il|`.
pub fn metric_compatibility_residual(pg: &PointGeometry) -> f64 {
    let d = pg.dim();
    let g = pg.g();
    let mut err = 0.0f64;
    for k in 0..d {
        let dg = pg.at.dg[k].re();
        for i in 0..d {
            for j in 0..d {
                let mut v = dg[(i, j)];
                for l in 0..d {
                    v -=
                        pg.at.gamma[gidx(d, l, k, i)].re() * g[(l, j)] + pg.at.gamma[gidx(d, l, k, j)].re() * g[(i, l)];
                }
                err = err.max(v.abs());
            }
        }
    }
    err
}
