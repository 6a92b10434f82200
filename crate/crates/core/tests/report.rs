use conforma::catalog::{Family, FamilyParams};
use conforma::report::{canonical_json, run, CheckKind, InputSpec, RunConfig, SCHEMA_VERSION};
use conforma::ProbeTransform;
use serde_json::Value;

fn catalog(family: Family, params: FamilyParams) -> RunConfig {
    RunConfig::new(InputSpec::Catalog { family, params })
}

#[test]
fn check_report_for_a_hyperbolic_cylinder() {
    let mut cfg = catalog(Family::Ex1, FamilyParams::new(3).k(1).a(1.5));
    cfg.lambdas = vec![0.0, 1.0];
    let r = run(&cfg).unwrap();
    assert!(r.passed);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert_eq!(r.results.verdicts.len(), 2);
    for v in &r.results.verdicts {
        assert!(v.para_blaschke_isoparametric && v.conformal_isoparametric);
        assert_eq!(v.family_match.as_ref().unwrap().matched().unwrap().case, 4);
    }
    assert!(r.oracle.iter().all(|o| o.max_deviation < 1e-8));
    let text = r.to_canonical_json();
    assert!(text.ends_with("}\n") && !text.contains('\r'));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
}

#[test]
fn emitted_chart_hashes_like_the_catalog_entry() {
    let params = FamilyParams::new(3).p(1).q(1).a(1.41421356);
    let entry = conforma::build_entry(Family::Ex4, &params).unwrap();
    let mut a = catalog(Family::Ex4, params);
    let mut b = RunConfig::new(InputSpec::ChartSource(entry.source.clone()));
    for cfg in [&mut a, &mut b] {
        cfg.lambdas = vec![0.0, 0.5];
        cfg.checks = vec![CheckKind::Classify, CheckKind::Isoparametric, CheckKind::Identities];
    }
    let (ra, rb) = (run(&a).unwrap(), run(&b).unwrap());
    assert_eq!(ra.results_sha256, rb.results_sha256);
    assert_eq!(ra.input.source_sha256, rb.input.source_sha256);
    assert!(ra.warnings.iter().any(|w| w.contains("printed alpha")));
    assert_eq!(run(&a).unwrap().to_canonical_json(), ra.to_canonical_json());
}

#[test]
fn all_checks_in_fixed_order() {
    let mut cfg = catalog(Family::Ex4, FamilyParams::new(4).p(1).q(2).a(1.5));
    cfg.checks = vec![
        CheckKind::InvarianceProbe,
        CheckKind::Theorem1,
        CheckKind::Invariants,
        CheckKind::Identities,
        CheckKind::Classify,
        CheckKind::Isoparametric,
    ];
    cfg.lambdas = vec![0.2, 0.9];
    cfg.transforms = vec![ProbeTransform::Dilation { rho: 2.0 }];
    cfg.sample_count = 80;
    let r = run(&cfg).unwrap();
    assert!(r.passed, "{}", r.to_canonical_json());
    assert_eq!(r.results.points.as_ref().unwrap().len(), 50);
    assert!(r.results.identities.as_ref().unwrap().passed);
    assert!(r.results.theorem1.as_ref().unwrap().holds);
    assert_eq!(r.results.probes.len(), 1);
    let order: Vec<CheckKind> = r.input.checks.clone();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
}

#[test]
fn generic_chart_fails_without_erroring() {
    let src = "chart g\nambient flat1 dim 3\nvars u in [-0.5, 0.5], v in [-0.5, 0.5]\nx1 = 0.2*u^2 + 0.1*v^2 + 0.1*u^3 + 0.07*u*v^2\nx2 = u\nx3 = v\n";
    let mut cfg = RunConfig::new(InputSpec::ChartSource(src.into()));
    cfg.lambdas = vec![0.3];
    let r = run(&cfg).unwrap();
    assert!(!r.passed);
}

#[test]
fn invalid_configs() {
    let mut cfg = catalog(Family::Ex1, FamilyParams::new(3).k(1).a(1.5));
    cfg.lambdas.clear();
    assert_eq!(run(&cfg).unwrap_err().kind(), "ConfigError");
    let mut cfg = catalog(Family::Ex1, FamilyParams::new(3).k(1).a(1.5));
    cfg.checks = vec![CheckKind::InvarianceProbe];
    assert_eq!(run(&cfg).unwrap_err().kind(), "ConfigError");
    let mut cfg = catalog(Family::Ex1, FamilyParams::new(3).k(1).a(1.5));
    cfg.tolerances.c_tol = -1.0;
    assert!(run(&cfg).is_err());
    let cfg = RunConfig::new(InputSpec::ChartPath("/nonexistent/chart".into()));
    assert_eq!(run(&cfg).unwrap_err().kind(), "ConfigError");
}

#[test]
fn canonical_floats_carry_seventeen_digits() {
    let v = serde_json::json!({"x": 0.1, "n": 3, "neg": -2.5e-300});
    let s = canonical_json(&v);
    assert!(s.contains("1.0000000000000001e-1"));
    assert!(s.contains("\"n\": 3"));
    let back: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(back["x"].as_f64(), Some(0.1));
    assert_eq!(back["neg"].as_f64(), Some(-2.5e-300));
}
