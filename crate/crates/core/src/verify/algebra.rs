//! Seeded randomized checks of the pointwise algebra.
//!
//! Each property is evaluated on `cases` random inputs drawn from one
//! ChaCha8 stream and reported as a single record holding the worst
//! residual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvalg::{
    big_pi, build_a_terms, build_r0, contract_c, is_hyperkahler_curvature, model_scalar_curvature, pi_h_tau_outer,
    pi_project, pi_tau_outer, tau_apply, CurvTensor,
};
use crate::error::Result;
use crate::geoengine::{CheckResult, CheckStatus};
use crate::quatlin::{l_apply, project_hhermitian, BilinearForm};

/// Default number of random cases per property.
pub const DEFAULT_CASES: usize = 1000;

/// Identity names and tolerances of the algebra suite, in report order.
pub const PROPERTIES: [(&str, f64); 10] = [
    ("l-squared", 1e-12),
    ("hhermitian-projector", 1e-12),
    ("big-pi-pair-skew", 1e-14),
    ("tau-order-three", 0.0),
    ("pi-project", 1e-12),
    ("pi-tau-outer", 1e-12),
    ("pi-h-tau-outer", 1e-10),
    ("a-terms-hyperkahler", 1e-10),
    ("linearity", 1e-12),
    ("r0-scalar-curvature", 1e-10),
];

pub fn random_form(rng: &mut ChaCha8Rng, d: usize) -> BilinearForm {
    BilinearForm::from_fn(d, |_, _| rng.random_range(-1.0..1.0))
}

/// Random skew ℍ-Hermitian form.
pub fn random_s2e(rng: &mut ChaCha8Rng, d: usize) -> BilinearForm {
    project_hhermitian(&random_form(rng, d).skew_part()).expect("quaternionic dimension")
}

pub fn random_tensor(rng: &mut ChaCha8Rng, d: usize) -> CurvTensor {
    CurvTensor::from_fn(d, |_, _, _, _| rng.random_range(-1.0..1.0))
}

/// Random tensor skew in the first pair and Bianchi in the first three slots.
pub fn random_admissible(rng: &mut ChaCha8Rng, d: usize) -> CurvTensor {
    let t = CurvTensor::outer(&random_form(rng, d).skew_part(), &random_form(rng, d));
    let cyc = t.add(&tau_apply(&t)).add(&tau_apply(&tau_apply(&t)));
    t.sub(&cyc.scale(1.0 / 3.0))
}

/// Random hyper-Kähler curvature tensor as a sum of `π_h τ Φ⊗Φ`.
pub fn random_hyperkahler(rng: &mut ChaCha8Rng, d: usize) -> Result<CurvTensor> {
    let mut r = CurvTensor::zeros(d);
    for _ in 0..2 {
        let phi = random_s2e(rng, d);
        r = r.add(&pi_h_tau_outer(&phi, &phi)?.scale(rng.random_range(-1.0..1.0)));
    }
    Ok(r)
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

fn form_err(a: &BilinearForm, b: &BilinearForm) -> f64 {
    a.distance(b)
}

struct Worst([f64; PROPERTIES.len()]);

impl Worst {
    fn note(&mut self, k: usize, v: f64) {
        if v.is_nan() || v > self.0[k] {
            self.0[k] = if v.is_nan() { f64::INFINITY } else { v };
        }
    }
}

fn one_case(rng: &mut ChaCha8Rng, case: usize, w: &mut Worst) -> Result<()> {
    let n_form = 1 + case % 3;
    let df = 4 * n_form;
    let b = random_form(rng, df);
    let lb = l_apply(&b)?;
    let llb = l_apply(&lb)?;
    let poly = llb.sub(&lb.scale(2.0)).sub(&b.scale(3.0));
    w.note(0, rel(poly.max_abs(), b.max_abs()));

    let bh = project_hhermitian(&b)?;
    let bp = b.sub(&bh);
    let mut e = form_err(&project_hhermitian(&bh)?, &bh);
    e = e.max(form_err(&l_apply(&bh)?, &bh.scale(3.0)));
    e = e.max(form_err(&l_apply(&bp)?, &bp.scale(-1.0)));
    w.note(1, rel(e, b.max_abs()));

    let n_tensor = 1 + case % 2;
    let d = 4 * n_tensor;
    let r = random_tensor(rng, d);
    let pr = big_pi(&r);
    let pair = CurvTensor::from_fn(d, |x, y, z, ww| pr.get(x, y, z, ww) + pr.get(z, ww, y, x));
    w.note(2, rel(pair.max_abs(), r.max_abs()));
    w.note(3, tau_apply(&tau_apply(&tau_apply(&r))).distance(&r));

    let adm = random_admissible(rng, d);
    let p = pi_project(&adm)?;
    let prof = is_hyperkahler_curvature(&p, 1.0);
    let fixed = pi_project(&p)?.distance(&p);
    w.note(4, prof.curvature_residual().max(rel(fixed, p.max_abs())));

    let (a, c) = (random_form(rng, d).skew_part(), random_form(rng, d).skew_part());
    let (s, t) = (
        random_form(rng, d).symmetric_part(),
        random_form(rng, d).symmetric_part(),
    );
    let mut e = 0.0f64;
    for out in [pi_tau_outer(&a, &c)?, pi_tau_outer(&s, &t)?] {
        e = e.max(is_hyperkahler_curvature(&out, 1.0).curvature_residual());
        e = e.max(rel(pi_project(&out)?.distance(&out), out.max_abs()));
    }
    w.note(5, e);

    let (phi, psi) = (random_s2e(rng, d), random_s2e(rng, d));
    let out = pi_h_tau_outer(&phi, &psi)?;
    w.note(6, is_hyperkahler_curvature(&out, 1.0).hyperkahler_residual());

    let rp = random_hyperkahler(rng, d)?;
    let lee: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let big_phi = random_s2e(rng, d);
    let terms = build_a_terms(&lee, &big_phi, &rp)?;
    let mut e = 0.0f64;
    for t in [&terms.a1, &terms.a2, &terms.a3] {
        e = e.max(is_hyperkahler_curvature(t, 1.0).hyperkahler_residual());
    }
    // A₂ and A₃ vanish with Φ
    let zero = build_a_terms(&lee, &BilinearForm::zeros(d), &rp)?;
    e = e.max(zero.a2.max_abs()).max(zero.a3.max_abs());
    w.note(7, e);

    // bilinearity of c(Φ, R) in R
    let (x, y) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let lin = contract_c(&big_phi, &r.scale(x).add(&rp.scale(y)))?;
    let split = contract_c(&big_phi, &r)?
        .scale(x)
        .add(&contract_c(&big_phi, &rp)?.scale(y));
    w.note(8, rel(lin.distance(&split), lin.max_abs()));
    Ok(())
}

/// Run every property on `cases` random inputs.
pub fn run_properties(seed: u64, cases: usize) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Worst([0.0; PROPERTIES.len()]);
    for case in 0..cases {
        one_case(&mut rng, case, &mut w)?;
    }
    let last = PROPERTIES.len() - 1;
    for n in 1..=crate::curvalg::MAX_N {
        let s0 = model_scalar_curvature(n);
        let s = build_r0(n)?.scalar_curvature();
        w.note(last, (s - s0).abs() / s0);
    }
    Ok(PROPERTIES
        .iter()
        .zip(w.0)
        .map(|(&(name, tol), residual)| CheckResult {
            identity: name.to_string(),
            point: Vec::new(),
            residual,
            tolerance: tol,
            status: if residual <= tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            value: None,
        })
        .collect())
}
