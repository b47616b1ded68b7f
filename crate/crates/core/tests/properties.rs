//! Property tests of the pointwise algebra, with symmetry oracles written
//! directly on tensor entries.

use proptest::prelude::*;
use qk_core::curvalg::{
    big_pi, build_a_terms, contract_c, pi_h_tau_outer, pi_project, pi_tau_outer, tau_apply, CurvTensor,
};
use qk_core::hyperdual::HyperDual;
use qk_core::quatlin::{l_apply, project_hhermitian, quat_apply, BilinearForm, HypercomplexOp, QuatVector, Structure};

fn entries(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn form(d: usize) -> impl Strategy<Value = BilinearForm> {
    entries(d * d).prop_map(move |v| BilinearForm::from_fn(d, |i, j| v[i * d + j]))
}

fn tensor(d: usize) -> impl Strategy<Value = CurvTensor> {
    entries(d * d * d * d).prop_map(move |v| CurvTensor::from_fn(d, |x, y, z, w| v[((x * d + y) * d + z) * d + w]))
}

/// Skew ℍ-Hermitian forms.
fn s2e(d: usize) -> impl Strategy<Value = BilinearForm> {
    form(d).prop_map(|b| project_hhermitian(&b.skew_part()).unwrap())
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1e-300)
}

/// Worst violation of the curvature symmetries, entry by entry.
fn curvature_defect(r: &CurvTensor) -> f64 {
    let d = r.dim();
    let mut worst = 0.0f64;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                for w in 0..d {
                    let v = r.get(x, y, z, w);
                    worst = worst
                        .max((v + r.get(y, x, z, w)).abs())
                        .max((v + r.get(x, y, w, z)).abs())
                        .max((v - r.get(z, w, x, y)).abs())
                        .max((v + r.get(y, z, x, w) + r.get(z, x, y, w)).abs());
                }
            }
        }
    }
    worst
}

/// Worst `|R(X, Y, AZ, AW) − R(X, Y, Z, W)|` over the structures.
fn hermitian_defect(r: &CurvTensor) -> f64 {
    let d = r.dim();
    let mats: Vec<_> = Structure::ALL.iter().map(|k| k.matrix(d)).collect();
    let mut worst = 0.0f64;
    for m in &mats {
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for w in 0..d {
                        let mut v = 0.0;
                        for a in 0..d {
                            for b in 0..d {
                                v += m[(a, z)] * m[(b, w)] * r.get(x, y, a, b);
                            }
                        }
                        worst = worst.max((v - r.get(x, y, z, w)).abs());
                    }
                }
            }
        }
    }
    worst
}

fn hyperkahler_defect(r: &CurvTensor) -> f64 {
    curvature_defect(r).max(hermitian_defect(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structures_form_quaternion_algebra(v in entries(12)) {
        let v = QuatVector::new(v).unwrap();
        let ap = |k, x: &QuatVector| quat_apply(HypercomplexOp::new(k, 12).unwrap(), x).unwrap();
        let (i, j, k) = (Structure::I, Structure::J, Structure::K);
        prop_assert_eq!(ap(i, &ap(j, &v)), ap(k, &v));
        prop_assert_eq!(ap(j, &ap(k, &v)), ap(i, &v));
        prop_assert_eq!(ap(k, &ap(i, &v)), ap(j, &v));
        let neg: Vec<f64> = v.as_slice().iter().map(|x| -x).collect();
        for s in Structure::ALL {
            let ss = ap(s, &ap(s, &v));
            prop_assert_eq!(ss.as_slice(), &neg[..]);
        }
    }

    #[test]
    fn l_satisfies_its_minimal_polynomial(b in form(8)) {
        let lb = l_apply(&b).unwrap();
        let llb = l_apply(&lb).unwrap();
        let r = llb.sub(&lb.scale(2.0)).sub(&b.scale(3.0));
        prop_assert!(rel(r.max_abs(), b.max_abs()) < 1e-12);
    }

    #[test]
    fn l_is_linear(a in form(8), b in form(8), s in -3.0f64..3.0) {
        let lhs = l_apply(&a.add(&b.scale(s))).unwrap();
        let rhs = l_apply(&a).unwrap().add(&l_apply(&b).unwrap().scale(s));
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn projector_is_idempotent_with_eigenvalues(b in form(8)) {
        let p = project_hhermitian(&b).unwrap();
        prop_assert!(project_hhermitian(&p).unwrap().distance(&p) < 1e-13);
        prop_assert!(l_apply(&p).unwrap().distance(&p.scale(3.0)) < 1e-12);
        let rest = b.sub(&p);
        prop_assert!(l_apply(&rest).unwrap().distance(&rest.scale(-1.0)) < 1e-12);
        // ℍ-Hermitian: invariant under each structure
        for k in Structure::ALL {
            prop_assert!(p.conjugate_by(k).distance(&p) < 1e-13);
        }
    }

    #[test]
    fn big_pi_is_pair_skew(r in tensor(4)) {
        let p = big_pi(&r);
        let d = p.dim();
        let mut worst = 0.0f64;
        for x in 0..d { for y in 0..d { for z in 0..d { for w in 0..d {
            worst = worst.max((p.get(x, y, z, w) + p.get(z, w, y, x)).abs());
        }}}}
        prop_assert!(worst < 1e-14);
    }

    #[test]
    fn tau_has_order_three(r in tensor(4)) {
        let t3 = tau_apply(&tau_apply(&tau_apply(&r)));
        prop_assert_eq!(t3.distance(&r), 0.0);
    }

    #[test]
    fn pi_fixes_curvature_tensors(a in form(4), b in form(4)) {
        let t = CurvTensor::outer(&a.skew_part(), &b);
        let bianchi = t.sub(&t.add(&tau_apply(&t)).add(&tau_apply(&tau_apply(&t))).scale(1.0 / 3.0));
        let p = pi_project(&bianchi).unwrap();
        prop_assert!(rel(curvature_defect(&p), p.max_abs()) < 1e-12);
        prop_assert!(rel(pi_project(&p).unwrap().distance(&p), p.max_abs()) < 1e-12);
    }

    #[test]
    fn pi_tau_outer_is_curvature(a in form(4), b in form(4)) {
        for out in [
            pi_tau_outer(&a.skew_part(), &b.skew_part()).unwrap(),
            pi_tau_outer(&a.symmetric_part(), &b.symmetric_part()).unwrap(),
        ] {
            prop_assert!(rel(curvature_defect(&out), out.max_abs().max(1.0)) < 1e-12);
        }
        prop_assert!(pi_tau_outer(&a.skew_part(), &b.symmetric_part()).is_err());
    }

    #[test]
    fn pi_h_tau_outer_is_hyperkahler(phi in s2e(4), psi in s2e(4)) {
        let out = pi_h_tau_outer(&phi, &psi).unwrap();
        prop_assert!(hyperkahler_defect(&out) < 1e-12);
    }

    #[test]
    fn contract_c_is_bilinear(phi in form(4), psi in form(4), r in tensor(4), s in -2.0f64..2.0) {
        let lhs = contract_c(&phi.add(&psi.scale(s)), &r).unwrap();
        let rhs = contract_c(&phi, &r).unwrap().add(&contract_c(&psi, &r).unwrap().scale(s));
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn a_terms_are_hyperkahler(
        p1 in s2e(8), p2 in s2e(8), big_phi in s2e(8), lee in entries(8), w in -1.0f64..1.0,
    ) {
        let rp = pi_h_tau_outer(&p1, &p1).unwrap().add(&pi_h_tau_outer(&p2, &p2).unwrap().scale(w));
        let t = build_a_terms(&lee, &big_phi, &rp).unwrap();
        for a in [&t.a1, &t.a2, &t.a3] {
            prop_assert!(hyperkahler_defect(a) < 1e-10 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn hyperdual_product_rule(a in -2.0f64..2.0, b in 0.1f64..2.0) {
        // f = x² ln y, seeded on bits 0 (x) and 1 (y)
        let x = HyperDual::seed(HyperDual::cst(a), 0);
        let y = HyperDual::seed(HyperDual::cst(b), 1);
        let f = x * x * y.ln();
        prop_assert!((f.coeff(0b01) - 2.0 * a * b.ln()).abs() < 1e-12);
        prop_assert!((f.coeff(0b10) - a * a / b).abs() < 1e-12);
        prop_assert!((f.coeff(0b11) - 2.0 * a / b).abs() < 1e-12);
    }
}
