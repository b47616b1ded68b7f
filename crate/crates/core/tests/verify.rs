use qk_core::verify::{calibrate, list_suites, run, RunConfig, Suite};
use qk_core::Error;

fn config(chart: &str, suites: &[&str]) -> RunConfig {
    let mut c = RunConfig::new(chart, 2).with_suites(suites);
    c.points = 3;
    c.cases = 20;
    c
}

fn summary_value(r: &qk_core::verify::VerificationReport, identity: &str) -> [f64; 2] {
    r.summary
        .iter()
        .find(|s| s.identity == identity)
        .and_then(|s| s.value_range)
        .unwrap_or_else(|| panic!("no value for {identity}"))
}

#[test]
fn projective_core_suites_pass_with_nu_four() {
    let r = run(&config("hp", &["nu", "lee", "structure", "lee-hessian", "rprime"])).unwrap();
    assert!(r.overall_pass, "{}", r.render_text());
    let [lo, hi] = summary_value(&r, "nu");
    assert!((lo - 4.0).abs() < 1e-9 && (hi - 4.0).abs() < 1e-9);
}

#[test]
fn cone_lee_norm_and_brackets() {
    let mut c = config("cone", &["nu", "lee", "brackets"]);
    c.nu = Some(-1.0);
    let r = run(&c).unwrap();
    assert!(r.overall_pass, "{}", r.render_text());
    let s = r.summary.iter().find(|s| s.identity == "lee-norm-plus-nu").unwrap();
    assert!(s.max_residual < 1e-9);
    assert_eq!(s.evaluated, 3);
}

#[test]
fn projective_roundtrip_passes() {
    let r = run(&config("hp", &["roundtrip"])).unwrap();
    assert!(r.overall_pass, "{}", r.render_text());
    assert_eq!(r.results.len(), 3);
}

#[test]
fn cone_hyperkahler_suites_not_applicable() {
    let mut c = config("cone", &["hkpot", "roundtrip", "nu"]);
    c.nu = Some(-1.0);
    let r = run(&c).unwrap();
    assert!(r.overall_pass);
    assert!(r.suite_failures.is_empty());
    let skipped: Vec<_> = r.suites_not_applicable.iter().map(|s| s.suite.as_str()).collect();
    assert_eq!(skipped, ["hkpot", "roundtrip"]);
}

#[test]
fn report_is_deterministic() {
    let c = config("hh", &["nu", "lee", "closed-lee", "algebra"]);
    let a = run(&c).unwrap();
    let b = run(&c).unwrap();
    assert_eq!(a.deterministic_json().unwrap(), b.deterministic_json().unwrap());
    assert!(!a.deterministic_json().unwrap().contains("total_seconds"));
    assert!(a.to_json().unwrap().contains("total_seconds"));
}

#[test]
fn seed_changes_points() {
    let mut c = config("hp", &["nu"]);
    let a = run(&c).unwrap();
    c.seed += 1;
    let b = run(&c).unwrap();
    assert_ne!(a.sample_points, b.sample_points);
}

#[test]
fn report_json_roundtrips() {
    let r = run(&config("flat", &["nu", "hkpot"])).unwrap();
    let back: qk_core::verify::VerificationReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.schema_version, qk_core::verify::SCHEMA_VERSION);
}

#[test]
fn tight_tolerance_fails_run() {
    let mut c = config("hh", &["nu"]);
    c.tolerances.insert("nu".into(), 0.0);
    let r = run(&c).unwrap();
    // ν of the hyperbolic chart is not exact to the last bit
    assert!(!r.overall_pass);
    let s = r.summary.iter().find(|s| s.identity == "nu").unwrap();
    assert!(!s.pass && s.tolerance == 0.0);
    assert!(r.summary.iter().find(|s| s.identity == "einstein").unwrap().pass);
}

#[test]
fn global_tolerance_applies_to_all() {
    let mut c = config("hp", &["nu", "lee"]);
    c.tolerance = Some(1e-3);
    let r = run(&c).unwrap();
    assert!(r.summary.iter().all(|s| s.tolerance == 1e-3));
}

#[test]
fn unknown_names_are_errors() {
    assert!(matches!(run(&config("cp", &["nu"])), Err(Error::UnknownChart(_))));
    assert!(matches!(
        run(&config("hp", &["no-such-suite"])),
        Err(Error::UnknownSuite(_))
    ));
    let mut c = config("hp", &["nu"]);
    c.tolerances.insert("not-an-identity".into(), 1.0);
    assert!(matches!(run(&c), Err(Error::InvalidParameter(_))));
    c = config("hp", &["nu"]);
    c.points = 0;
    assert!(run(&c).is_err());
    c = config("gp", &["nu"]);
    assert!(run(&c).is_err(), "gp needs p");
}

#[test]
fn indefinite_chart_skips_rprime() {
    let mut c = config("gp", &["nu", "rprime"]);
    c.p = Some(-1.0);
    let r = run(&c).unwrap();
    if r.suites_not_applicable.is_empty() {
        assert!(r.overall_pass, "{}", r.render_text());
    } else {
        assert_eq!(r.suites_not_applicable[0].suite, "rprime");
    }
}

#[test]
fn algebra_suite_runs_without_points() {
    let r = run(&config("hp", &["algebra"])).unwrap();
    assert!(r.overall_pass, "{}", r.render_text());
    assert!(r.sample_points.is_empty());
    assert_eq!(r.summary.len(), 10);
    assert!(r.results.iter().all(|p| p.point_index.is_none()));
}

#[test]
fn catalogue_lists_every_suite() {
    let cat = list_suites();
    let names: Vec<_> = cat.iter().map(|s| s.name).collect();
    for want in ["structure", "hkpot", "algebra", "lee-hessian", "brackets", "roundtrip"] {
        assert!(names.contains(&want), "{want}");
    }
    assert_eq!(cat.len(), Suite::ALL.len());
    assert!(cat.iter().all(|s| !s.identities.is_empty() && !s.summary.is_empty()));
    let hk = cat.iter().find(|s| s.name == "hkpot").unwrap();
    assert!(hk.identities.contains(&"hk.hessian"));
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
}

#[test]
fn calibration_detects_conventions() {
    let c = calibrate(2, 1).unwrap();
    assert!(c.pass, "{}", c.render_text());
    assert_eq!(
        c.r0.iter().map(|r| r.expected).collect::<Vec<_>>(),
        [48.0, 128.0, 240.0]
    );
}
