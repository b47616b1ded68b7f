//! Metric charts: closed-form metrics on open subsets of ℝ⁴ⁿ.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::hmat::HMat;
use crate::error::{Error, Result};
use crate::hyperdual::{constants, seeded, HyperDual};
use crate::quatlin::{BilinearForm, Structure};

pub type MetricFn = Arc<dyn Fn(&[HyperDual]) -> Result<HMat> + Send + Sync>;
pub type StructureFn = Arc<dyn Fn(&[HyperDual]) -> Result<[HMat; 3]> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[HyperDual]) -> Result<HyperDual> + Send + Sync>;
pub type CovectorFn = Arc<dyn Fn(&[HyperDual]) -> Result<Vec<HyperDual>> + Send + Sync>;
/// Signed distance-like margin to the chart boundary; positive inside.
pub type MarginFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type SamplerFn = Arc<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync>;

/// Attempts per requested point before sampling gives up.
const MAX_REJECTIONS: usize = 10_000;

/// A point of a chart.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(chart: &MetricChart, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                got: coords.len(),
            });
        }
        let margin = chart.margin(&coords);
        if !(margin > 0.0) {
            return Err(Error::OutOfDomain { margin });
        }
        Ok(ChartPoint { coords })
    }

    /// Coordinates lifted to constant hyper-dual numbers.
    pub fn payload(&self) -> Vec<HyperDual> {
        constants(&self.coords)
    }

    /// Coordinates with direction `k` carrying infinitesimal `bit`.
    pub fn seeded(&self, k: usize, bit: usize) -> Vec<HyperDual> {
        seeded(&self.payload(), k, bit)
    }
}

#[derive(Clone)]
pub struct MetricChart {
    pub name: String,
    pub n: usize,
    metric: MetricFn,
    structures: Option<StructureFn>,
    margin: MarginFn,
    sampler: SamplerFn,
    /// Sampled points must have at least this margin.
    pub sample_margin: f64,
    pub nominal_nu: Option<f64>,
    lee_closed_form: Option<CovectorFn>,
    lee_potential: Option<ScalarFn>,
    hk_potential: Option<ScalarFn>,
    pub base_point: Vec<f64>,
    pub riemannian: bool,
}

impl fmt::Debug for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricChart")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("nominal_nu", &self.nominal_nu)
            .field("riemannian", &self.riemannian)
            .finish_non_exhaustive()
    }
}

impl MetricChart {
    /// Chart on all of ℝ⁴ⁿ with constant standard structures, sampled from the ball of radius 1.
    pub fn new(name: impl Into<String>, n: usize, metric: MetricFn) -> Self {
        let dim = 4 * n;
        MetricChart {
            name: name.into(),
            n,
            metric,
            structures: None,
            margin: Arc::new(|_| f64::INFINITY),
            sampler: ball_sampler(dim, 1.0),
            sample_margin: 0.0,
            nominal_nu: None,
            lee_closed_form: None,
            lee_potential: None,
            hk_potential: None,
            base_point: vec![0.0; dim],
            riemannian: true,
        }
    }

    pub fn with_structures(mut self, s: StructureFn) -> Self {
        self.structures = Some(s);
        self
    }

    pub fn with_domain(mut self, margin: MarginFn, sample_margin: f64) -> Self {
        self.margin = margin;
        self.sample_margin = sample_margin;
        self
    }

    pub fn with_sampler(mut self, sampler: SamplerFn) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nominal_nu = Some(nu);
        self
    }

    pub fn with_lee(mut self, lee: CovectorFn) -> Self {
        self.lee_closed_form = Some(lee);
        self
    }

    /// Potential `f` with `φ = df`.
    pub fn with_lee_potential(mut self, f: ScalarFn) -> Self {
        self.lee_potential = Some(f);
        self
    }

    pub fn with_hk_potential(mut self, mu: ScalarFn) -> Self {
        self.hk_potential = Some(mu);
        self
    }

    pub fn with_base_point(mut self, p: Vec<f64>) -> Self {
        self.base_point = p;
        self
    }

    pub fn with_riemannian(mut self, riemannian: bool) -> Self {
        self.riemannian = riemannian;
        self
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    pub fn metric_eval(&self, x: &[HyperDual]) -> Result<HMat> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        (self.metric)(x)
    }

    pub fn metric_fn(&self) -> MetricFn {
        self.metric.clone()
    }

    pub fn metric_at(&self, p: &ChartPoint) -> Result<BilinearForm> {
        let g = self.metric_eval(&p.payload())?.re();
        BilinearForm::from_matrix(g)
    }

    /// The structure triple in chart coordinates as (1,1)-tensors.
    pub fn structures_eval(&self, x: &[HyperDual]) -> Result<[HMat; 3]> {
        match &self.structures {
            Some(s) => s(x),
            None => Ok(Structure::ALL.map(|k| HMat::structure(k, self.dim()))),
        }
    }

    pub fn has_standard_structures(&self) -> bool {
        self.structures.is_none()
    }

    pub fn structures_fn(&self) -> Option<StructureFn> {
        self.structures.clone()
    }

    pub fn margin(&self, p: &[f64]) -> f64 {
        (self.margin)(p)
    }

    pub fn margin_fn(&self) -> MarginFn {
        self.margin.clone()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.margin(p) > 0.0
    }

    pub fn lee_closed_form(&self) -> Option<&CovectorFn> {
        self.lee_closed_form.as_ref()
    }

    pub fn lee_potential(&self) -> Option<&ScalarFn> {
        self.lee_potential.as_ref()
    }

    pub fn hk_potential(&self) -> Option<&ScalarFn> {
        self.hk_potential.as_ref()
    }

    /// Known Lee form at `x`: the closed form if present, otherwise `df` from the potential.
    pub fn known_lee(&self, x: &[HyperDual]) -> Result<Option<Vec<HyperDual>>> {
        if let Some(l) = &self.lee_closed_form {
            return l(x).map(Some);
        }
        if let Some(f) = &self.lee_potential {
            let bit = crate::hyperdual::next_bit(x);
            let mut out = Vec::with_capacity(x.len());
            for k in 0..x.len() {
                out.push(f(&seeded(x, k, bit))?.eps(bit));
            }
            return Ok(Some(out));
        }
        Ok(None)
    }

    /// Deterministic sample of `count` points with margin at least `sample_margin`.
    pub fn sample_points(&self, seed: u64, count: usize) -> Result<Vec<ChartPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut tries = 0;
        while out.len() < count {
            tries += 1;
            if tries > MAX_REJECTIONS * count.max(1) {
                return Err(Error::Sampling(self.name.clone()));
            }
            let p = (self.sampler)(&mut rng);
            let m = self.margin(&p);
            if m > 0.0 && m >= self.sample_margin {
                out.push(ChartPoint { coords: p });
            }
        }
        Ok(out)
    }

    pub fn sampler_fn(&self) -> SamplerFn {
        self.sampler.clone()
    }
}

/// Uniform sampler on the closed Euclidean ball of the given radius.
pub fn ball_sampler(dim: usize, radius: f64) -> SamplerFn {
    Arc::new(move |rng: &mut ChaCha8Rng| {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
        v.into_iter().map(|x| x * r / norm).collect()
    })
}
