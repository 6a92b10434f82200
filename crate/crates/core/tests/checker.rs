use conforma::catalog::{build_entry, Family, FamilyParams};
use conforma::checker::{check_many, sample_invariants, verdict_from_samples};
use conforma::{check, check_and_classify, parse_chart, theorem1_crosscheck, Classification, Tolerances};

fn graph() -> conforma::ChartImmersion {
    parse_chart(
        "chart graph\nambient flat1 dim 4\nvars u in [-0.5, 0.5], v in [-0.5, 0.5], w in [-0.5, 0.5]\n\
         x1 = 0.2*u^2 + 0.15*u*v + 0.1*v^2 + 0.25*w^2 + 0.1*u^3 + 0.05*v*w^2\nx2 = u\nx3 = v\nx4 = w\n",
    )
    .unwrap()
}

#[test]
fn de_sitter_product_is_isoparametric() {
    let e = build_entry(Family::Ex2, &FamilyParams::new(3).k(1).a(1.0)).unwrap();
    let v = check(&e.chart, 0.3, 20, 42, &Tolerances::default()).unwrap();
    assert!(v.para_blaschke_isoparametric && v.conformal_isoparametric);
    assert!(v.r_d <= 2);
    assert_eq!(v.samples, 20);
}

#[test]
fn verdicts_are_reproducible() {
    let e = build_entry(Family::Ex4, &FamilyParams::new(4).p(1).q(2).a(1.3)).unwrap();
    let tol = Tolerances::default();
    let x = check_and_classify(&e.chart, 0.25, 20, 7, &tol).unwrap();
    let y = check_and_classify(&e.chart, 0.25, 20, 7, &tol).unwrap();
    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    let many = check_many(&e.chart, &[0.25, 0.5], 20, 7, &tol).unwrap();
    let mut first = many[0].clone();
    first.family_match = x.family_match.clone();
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&x).unwrap());
}

#[test]
fn blaschke_case_of_the_cone() {
    let e = build_entry(Family::Ex4, &FamilyParams::new(3).p(1).q(1).a(1.5)).unwrap();
    let v = check_and_classify(&e.chart, 0.0, 20, 42, &Tolerances::default()).unwrap();
    assert_eq!(v.r_d, 3);
    let m = v.family_match.as_ref().and_then(Classification::matched).unwrap();
    assert_eq!(m.case, 5);
    assert_eq!(m.family, Some(Family::Ex4));
}

#[test]
fn generic_graph_is_unclassified() {
    let v = check_and_classify(&graph(), 0.3, 20, 42, &Tolerances::default()).unwrap();
    assert!(!v.para_blaschke_isoparametric);
    assert!(!v.conformal_isoparametric);
    assert!(v.c_max > 1e-6);
    assert!(matches!(v.family_match, Some(Classification::Unclassified { .. })));
}

#[test]
fn case_one_by_elimination() {
    // ex1 at the lambda where its two D blocks merge
    let e = build_entry(Family::Ex1, &FamilyParams::new(3).k(1).a(1.0)).unwrap();
    let tol = Tolerances::default();
    let set = sample_invariants(&e.chart, 20, 42).unwrap();
    let v = verdict_from_samples(&set, 1.0 / 3.0, &tol);
    assert_eq!(v.r_d, 1);
    let c = conforma::classify(&v, &e.chart);
    let m = c.matched().unwrap();
    assert_eq!(m.case, 1);
}

#[test]
fn theorem1_rows() {
    let e = build_entry(Family::Ex4, &FamilyParams::new(4).p(2).q(1).a(2.0)).unwrap();
    let t = theorem1_crosscheck(&e.chart, &[-1.0, 0.0, 0.5, 2.0], 20, 42, &Tolerances::default()).unwrap();
    assert!(t.holds);
    assert_eq!(t.rows.len(), 4);
    assert!(t.rows.iter().all(|r| r.implication == "holds" && r.r_d == 3));
    let g = theorem1_crosscheck(&graph(), &[0.0, 1.0], 20, 42, &Tolerances::default()).unwrap();
    assert!(g.holds);
    assert!(g.rows.iter().all(|r| r.implication == "vacuous"));
}

#[test]
fn tolerances_must_be_positive() {
    let t = Tolerances {
        spread_tol: 0.0,
        ..Tolerances::default()
    };
    assert!(t.validate().is_err());
    assert!(Tolerances::default().validate().is_ok());
}

#[test]
fn quadratic_cubic_graph_is_not_isoparametric() {
    let c = parse_chart(
        "chart g\nambient flat1 dim 4\nvars u1 in [-0.4, 0.4], u2 in [-0.4, 0.4], u3 in [-0.4, 0.4]\n\
         x1 = u1^2 + 0.3*u2^3\nx2 = u1\nx3 = u2\nx4 = u3\n",
    )
    .unwrap();
    let v = check(&c, 0.0, 20, 42, &Tolerances::default()).unwrap();
    assert!(!v.para_blaschke_isoparametric);
}
