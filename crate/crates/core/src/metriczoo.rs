//! Explicit metric charts: flat ℍⁿ, the projective and hyperbolic models,
//! the family `g_p` over flat space, and the metrics with `|φ|² + ν = 0`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geoengine::chart::{ball_sampler, MetricChart, ScalarFn};
use crate::geoengine::hmat::HMat;
use crate::geoengine::transform::from_hyperkahler;
use crate::hyperdual::HyperDual;
use crate::quatlin::Structure;

pub const MAX_N: usize = crate::curvalg::MAX_N;

/// Sampling radius for the projective model.
pub const HP_RADIUS: f64 = 2.0;
/// Sampling radius for the hyperbolic model (the chart is the unit ball).
pub const HH_RADIUS: f64 = 0.8;

/// Facts about a chart that the verification must reproduce.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Expected {
    pub nu: Option<f64>,
    pub hyperkahler: bool,
    /// A closed-form Lee form is attached to the chart.
    pub lee_closed_form: bool,
    /// `|φ|² + ν` vanishes identically.
    pub lee_norm_plus_nu_zero: bool,
    /// The constant `(|φ|² + ν)e^f`.
    pub c_constant: Option<f64>,
    /// The hyper-Kähler metric built from the chart is flat.
    pub hk_image_flat: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub chart: MetricChart,
    pub expected: Expected,
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_N {
        return Err(Error::OutOfCap { n, max: MAX_N });
    }
    Ok(())
}

fn norm2(x: &[HyperDual]) -> HyperDual {
    x.iter().map(|&v| v * v).sum()
}

/// The four real components of `Σ_λ x̄^λ dx^λ`, each a covector with coefficients in `x`.
///
/// For one block `x = a + bi + cj + dk`:
/// real `a da + b db + c dc + d dd`, i `a db − b da − c dd + d dc`,
/// j `a dc − c da + b dd − d db`, k `a dd − d da − b dc + c db`.
pub fn quaternionic_coframe(x: &[HyperDual]) -> [Vec<HyperDual>; 4] {
    let dim = x.len();
    let mut th: [Vec<HyperDual>; 4] = std::array::from_fn(|_| vec![HyperDual::ZERO; dim]);
    for l in 0..dim / 4 {
        let o = 4 * l;
        let (a, b, c, d) = (x[o], x[o + 1], x[o + 2], x[o + 3]);
        th[0][o] = a;
        th[0][o + 1] = b;
        th[0][o + 2] = c;
        th[0][o + 3] = d;

        th[1][o] = -b;
        th[1][o + 1] = a;
        th[1][o + 2] = d;
        th[1][o + 3] = -c;

        th[2][o] = -c;
        th[2][o + 1] = -d;
        th[2][o + 2] = a;
        th[2][o + 3] = b;

        th[3][o] = -d;
        th[3][o + 1] = c;
        th[3][o + 2] = -b;
        th[3][o + 3] = a;
    }
    th
}

/// `g_± = (1 ± r²)⁻² [(1 ± r²) Σ dx̄dx ∓ Σ_c θ_c ⊗ θ_c]` with `θ = Σ x̄ dx`.
fn model_metric(x: &[HyperDual], sign: f64) -> HMat {
    let dim = x.len();
    let w = norm2(x) * sign + 1.0;
    let th = quaternionic_coframe(x);
    let winv = w.recip();
    let winv2 = winv * winv;
    HMat::from_fn(dim, |i, j| {
        let tt: HyperDual = th.iter().map(|t| t[i] * t[j]).sum();
        let delta = if i == j { w } else { HyperDual::ZERO };
        (delta - tt * sign) * winv2
    })
}

fn euclidean_potential() -> ScalarFn {
    Arc::new(|x: &[HyperDual]| Ok(norm2(x) * 0.5))
}

/// Flat ℍⁿ with potential `μ = ½‖x‖²`.
pub fn flat_hn(n: usize) -> Result<ZooEntry> {
    check_n(n, 1)?;
    let dim = 4 * n;
    let chart = MetricChart::new("flat", n, Arc::new(move |_| Ok(HMat::identity(dim))))
        .with_nu(0.0)
        .with_lee(Arc::new(move |_| Ok(vec![HyperDual::ZERO; dim])))
        .with_lee_potential(Arc::new(|_| Ok(HyperDual::ZERO)))
        .with_hk_potential(euclidean_potential());
    Ok(ZooEntry {
        chart,
        expected: Expected {
            nu: Some(0.0),
            hyperkahler: true,
            lee_closed_form: true,
            ..Default::default()
        },
    })
}

/// Flat metric of signature `(4, 4(n−1))`: `Re(dx̄¹dx¹ − Σ_{λ≥2} dx̄^λ dx^λ)`, with
/// potential `μ = ½(|x¹|² − Σ_{λ≥2} |x^λ|²)`.
pub fn pseudo_flat_hn(n: usize) -> Result<ZooEntry> {
    check_n(n, 2)?;
    let dim = 4 * n;
    let sgn = move |i: usize| if i < 4 { 1.0 } else { -1.0 };
    let chart = MetricChart::new(
        "pseudo-flat",
        n,
        Arc::new(move |_| {
            Ok(HMat::from_fn(dim, |i, j| {
                HyperDual::cst(if i == j { sgn(i) } else { 0.0 })
            }))
        }),
    )
    .with_nu(0.0)
    .with_lee(Arc::new(move |_| Ok(vec![HyperDual::ZERO; dim])))
    .with_hk_potential(Arc::new(move |x: &[HyperDual]| {
        Ok(x.iter().enumerate().map(|(i, &v)| v * v * (0.5 * sgn(i))).sum())
    }))
    .with_riemannian(false);
    Ok(ZooEntry {
        chart,
        expected: Expected {
            nu: Some(0.0),
            hyperkahler: true,
            lee_closed_form: true,
            ..Default::default()
        },
    })
}

fn model_chart(n: usize, sign: f64) -> Result<ZooEntry> {
    check_n(n, 1)?;
    let name = if sign > 0.0 { "hp" } else { "hh" };
    let radius = if sign > 0.0 { HP_RADIUS } else { HH_RADIUS };
    let dim = 4 * n;
    let mut chart = MetricChart::new(name, n, Arc::new(move |x: &[HyperDual]| Ok(model_metric(x, sign))))
        .with_sampler(ball_sampler(dim, radius))
        .with_nu(4.0 * sign)
        // φ_± = −d ln(1 ± r²) = ∓2 x·dx / (1 ± r²)
        .with_lee(Arc::new(move |x: &[HyperDual]| {
            let w = norm2(x) * sign + 1.0;
            let f = w.recip() * (-2.0 * sign);
            Ok(x.iter().map(|&v| v * f).collect())
        }))
        .with_lee_potential(Arc::new(move |x: &[HyperDual]| Ok(-(norm2(x) * sign + 1.0).ln())));
    if sign < 0.0 {
        let m = 1.0 - radius * radius;
        chart = chart.with_domain(Arc::new(|p: &[f64]| 1.0 - p.iter().map(|v| v * v).sum::<f64>()), m);
    }
    Ok(ZooEntry {
        chart,
        expected: Expected {
            nu: Some(4.0 * sign),
            hyperkahler: false,
            lee_closed_form: true,
            lee_norm_plus_nu_zero: false,
            c_constant: Some(4.0 * sign),
            hk_image_flat: Some(true),
        },
    })
}

/// The quaternionic projective model `g₊` on ℍⁿ.
pub fn projective_chart(n: usize) -> Result<ZooEntry> {
    model_chart(n, 1.0)
}

/// The quaternionic hyperbolic model `g₋` on the unit ball.
pub fn hyperbolic_chart(n: usize) -> Result<ZooEntry> {
    model_chart(n, -1.0)
}

/// `g_p` built from flat ℍⁿ and `μ = ½‖x‖²`; sampled on `‖x‖ ≤ 2/√p` (`p > 0`) or `‖x‖ ≤ 0.8/√|p|` (`p < 0`).
pub fn gp_chart(n: usize, p: f64) -> Result<ZooEntry> {
    let flat = flat_hn(n)?;
    let mu = flat
        .chart
        .hk_potential()
        .cloned()
        .expect("flat chart carries a potential");
    let radius = if p > 0.0 { HP_RADIUS } else { HH_RADIUS } / p.abs().sqrt();
    let mut chart = from_hyperkahler(&flat.chart, mu, p)?.with_sampler(ball_sampler(4 * n, radius));
    chart.name = "gp".into();
    Ok(ZooEntry {
        chart,
        expected: Expected {
            nu: Some(4.0 * p),
            hyperkahler: false,
            lee_closed_form: true,
            lee_norm_plus_nu_zero: false,
            c_constant: Some(4.0 * p),
            hk_image_flat: Some(true),
        },
    })
}

/// Metric `−(νt²)⁻¹(1 + L)dt⊗dt + t⁻¹π*g′` on `{t > 0} × ℝ³ × ℍ^{n−1}` over the flat base.
///
/// Coordinates `(t, u, v, w, x)`. With `α_A = ½ ι_x Ω′_A` the coframe
/// `(dt, du − να_I, dv − να_J, dw − να_K, dx)` is adapted: in it the metric is
/// diagonal and the structures are the standard ones.
pub fn cone_chart(n: usize, nu: f64) -> Result<ZooEntry> {
    check_n(n, 2)?;
    if !(nu < 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!("ν must be negative, got {nu}")));
    }
    let dim = 4 * n;
    let base_dim = dim - 4;
    let omega_base: [nalgebra::DMatrix<f64>; 3] = Structure::ALL.map(|k| k.matrix(base_dim).transpose());

    // θ = P dx, P = [[1, B], [0, 1]]
    let coframe = Arc::new(move |x: &[HyperDual]| -> HMat {
        let mut p = HMat::identity(dim);
        for a in 0..3 {
            for j in 0..base_dim {
                let s: HyperDual = (0..base_dim)
                    .filter(|&i| omega_base[a][(i, j)] != 0.0)
                    .map(|i| x[4 + i] * omega_base[a][(i, j)])
                    .sum();
                p[(1 + a, 4 + j)] = s * (-0.5 * nu);
            }
        }
        p
    });
    let c1 = coframe.clone();
    let metric = Arc::new(move |x: &[HyperDual]| {
        let p = c1(x);
        let t = x[0];
        let a = (t * t * nu).recip() * -1.0;
        let b = t.recip();
        let ghat = HMat::from_fn(dim, |i, j| {
            if i != j {
                HyperDual::ZERO
            } else if i < 4 {
                a
            } else {
                b
            }
        });
        Ok(p.transpose().mul(&ghat).mul(&p))
    });
    let c2 = coframe.clone();
    let structures = Arc::new(move |x: &[HyperDual]| {
        let p = c2(x);
        let pinv = p.inverse()?;
        Ok(Structure::ALL.map(|k| pinv.mul(&HMat::structure(k, dim)).mul(&p)))
    });
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng| {
        let mut v = vec![rng.random_range(0.5..2.0)];
        v.extend((0..3).map(|_| rng.random_range(-1.0..1.0)));
        v.extend(ball_sampler(base_dim, 1.0)(rng));
        v
    });
    let mut base = vec![0.0; dim];
    base[0] = 1.0;
    let chart = MetricChart::new("cone", n, metric)
        .with_structures(structures)
        .with_domain(Arc::new(|p: &[f64]| p[0]), 0.5)
        .with_sampler(sampler)
        .with_nu(nu)
        .with_lee(Arc::new(move |x: &[HyperDual]| {
            let mut v = vec![HyperDual::ZERO; dim];
            v[0] = -x[0].recip();
            Ok(v)
        }))
        .with_lee_potential(Arc::new(|x: &[HyperDual]| Ok(-x[0].ln())))
        .with_base_point(base);
    Ok(ZooEntry {
        chart,
        expected: Expected {
            nu: Some(nu),
            hyperkahler: false,
            lee_closed_form: true,
            lee_norm_plus_nu_zero: true,
            c_constant: Some(0.0),
            hk_image_flat: None,
        },
    })
}

/// Registry names accepted by [`by_name`].
pub const CHART_NAMES: [&str; 5] = ["flat", "hp", "hh", "cone", "gp"];

/// Look up a chart by registry name; `p` and `nu` are required by `gp` and `cone`.
pub fn by_name(name: &str, n: usize, p: Option<f64>, nu: Option<f64>) -> Result<ZooEntry> {
    match name {
        "flat" => flat_hn(n),
        "hp" => projective_chart(n),
        "hh" => hyperbolic_chart(n),
        "cone" => cone_chart(
            n,
            nu.ok_or_else(|| Error::InvalidParameter("chart `cone` needs ν".into()))?,
        ),
        "gp" => gp_chart(
            n,
            p.ok_or_else(|| Error::InvalidParameter("chart `gp` needs p".into()))?,
        ),
        other => Err(Error::UnknownChart(other.to_string())),
    }
}
