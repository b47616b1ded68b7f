//! Sign-convention calibration against the model spaces.

use serde::Serialize;

use crate::curvalg::{build_r0, model_scalar_curvature, MAX_N};
use crate::error::Result;
use crate::geoengine::check::check_connection_lee;
use crate::geoengine::PointGeometry;
use crate::metriczoo::{hyperbolic_chart, projective_chart};

/// Agreement required for a calibration to count as detected.
pub const CALIBRATION_TOL: f64 = 1e-8;

pub const CURVATURE_CONVENTION: &str =
    "R^ρ_σμν = ∂_μ Γ^ρ_νσ − ∂_ν Γ^ρ_μσ + Γ^ρ_μλ Γ^λ_νσ − Γ^ρ_νλ Γ^λ_μσ, R_μνσκ = g_κρ R^ρ_σμν, s = g^il g^jk R_ijkl";
pub const LEE_CONVENTION: &str = "φ = ½ I d*Ω_I with (d*Ω)_k = −g^ij (∇_i Ω)_jk and (Iψ)_k = −ψ_l I^l_k";
pub const CONNECTION_CONVENTION: &str = "∇I = cJ − bK, ∇J = aK − cI, ∇K = bI − aJ";

#[derive(Clone, Debug, Serialize)]
pub struct R0Calibration {
    pub n: usize,
    pub scalar_curvature: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub n: usize,
    pub point: Vec<f64>,
    pub curvature_convention: &'static str,
    pub lee_convention: &'static str,
    pub connection_convention: &'static str,
    /// Reduced scalar curvature of the projective and hyperbolic models.
    pub nu_projective: f64,
    pub nu_hyperbolic: f64,
    /// Deviation of φ from −d ln(1 ± ‖x‖²) on the two models.
    pub lee_deviation: f64,
    /// Residual of `a = Iφ` on the projective model.
    pub connection_residual: f64,
    pub r0: Vec<R0Calibration>,
    pub pass: bool,
}

impl CalibrationReport {
    pub fn render_text(&self) -> String {
        let mark = |ok: bool| if ok { "ok" } else { "MISMATCH" };
        let mut s = String::new();
        s.push_str(&format!("curvature:   {}\n", self.curvature_convention));
        s.push_str(&format!(
            "             ν(hp) = {:+.12}, ν(hh) = {:+.12}  [{}]\n",
            self.nu_projective,
            self.nu_hyperbolic,
            mark(
                (self.nu_projective - 4.0).abs() < CALIBRATION_TOL
                    && (self.nu_hyperbolic + 4.0).abs() < CALIBRATION_TOL
            )
        ));
        s.push_str(&format!("Lee form:    {}\n", self.lee_convention));
        s.push_str(&format!(
            "             φ = −d ln(1 ± ‖x‖²) to {:.2e}  [{}]\n",
            self.lee_deviation,
            mark(self.lee_deviation < CALIBRATION_TOL)
        ));
        s.push_str(&format!("connection:  {}\n", self.connection_convention));
        s.push_str(&format!(
            "             a = Iφ to {:.2e}  [{}]\n",
            self.connection_residual,
            mark(self.connection_residual < CALIBRATION_TOL)
        ));
        for r in &self.r0 {
            s.push_str(&format!(
                "R0:          n = {}: s = {} (expected {})\n",
                r.n, r.scalar_curvature, r.expected
            ));
        }
        s.push_str(if self.pass {
            "calibration: PASS\n"
        } else {
            "calibration: FAIL\n"
        });
        s
    }
}

/// Measure the conventions on the model spaces at one seeded point.
pub fn calibrate(n: usize, seed: u64) -> Result<CalibrationReport> {
    let hp = projective_chart(n)?.chart;
    let hh = hyperbolic_chart(n)?.chart;
    let p = hh.sample_points(seed, 1)?.remove(0);
    let r2: f64 = p.coords.iter().map(|v| v * v).sum();

    let pg_p = PointGeometry::compute(&hp, &p)?;
    let pg_h = PointGeometry::compute(&hh, &p)?;
    let nu_projective = pg_p.reduced_scalar(&pg_p.riemann());
    let nu_hyperbolic = pg_h.reduced_scalar(&pg_h.riemann());

    let mut lee_deviation = 0.0f64;
    for (pg, s) in [(&pg_p, 1.0), (&pg_h, -1.0)] {
        for (k, phi) in pg.lee().iter().enumerate() {
            let expect = -2.0 * s * p.coords[k] / (1.0 + s * r2);
            lee_deviation = lee_deviation.max((phi - expect).abs());
        }
    }
    let connection_residual = check_connection_lee(&pg_p, CALIBRATION_TOL).residual;

    let mut r0 = Vec::new();
    let mut r0_ok = true;
    for m in 1..=MAX_N {
        let s = build_r0(m)?.scalar_curvature();
        let expected = model_scalar_curvature(m);
        r0_ok &= (s - expected).abs() <= 1e-10 * expected;
        r0.push(R0Calibration {
            n: m,
            scalar_curvature: s,
            expected,
        });
    }
    let pass = (nu_projective - 4.0).abs() < CALIBRATION_TOL
        && (nu_hyperbolic + 4.0).abs() < CALIBRATION_TOL
        && lee_deviation < CALIBRATION_TOL
        && connection_residual < CALIBRATION_TOL
        && r0_ok;
    Ok(CalibrationReport {
        n,
        point: p.coords,
        curvature_convention: CURVATURE_CONVENTION,
        lee_convention: LEE_CONVENTION,
        connection_convention: CONNECTION_CONVENTION,
        nu_projective,
        nu_hyperbolic,
        lee_deviation,
        connection_residual,
        r0,
        pass,
    })
}
