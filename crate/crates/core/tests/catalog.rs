use conforma::catalog::{
    admissible_grid, build_entry, ex1_oracle, ex2_oracle, ex3_oracle, ex4_oracle, oracle_eigenvalues,
    realizable, Ex4Alpha, Family, FamilyParams,
};
use conforma::linalg::count_distinct;
use conforma::{invariants_at, parse_chart, sample_points};

#[test]
fn oracle_normalizations_on_grid() {
    for n in 3..=6 {
        let nf = n as f64;
        for k in 1..n {
            for a in [0.3, 0.5, 0.9] {
                for o in [ex1_oracle(n, k), ex2_oracle(n, k, a), ex3_oracle(n, k, a)] {
                    assert_eq!(o.n(), n);
                    assert!(o.trace_b().abs() < 1e-14);
                    assert!((o.norm2_b() - (nf - 1.0) / nf).abs() < 1e-14);
                }
            }
        }
        for p in 1..n {
            for q in 1..n - p {
                for a in [1.1, 1.5, 3.0] {
                    let o = ex4_oracle(n, p, q, a, Ex4Alpha::Corrected);
                    assert!(o.trace_b().abs() < 1e-12);
                    assert!((o.norm2_b() - (nf - 1.0) / nf).abs() < 1e-12);
                    let printed = ex4_oracle(n, p, q, a, Ex4Alpha::Printed).norm2_b();
                    let ab = a * a * (a * a - 1.0);
                    assert!((printed * ab - o.norm2_b()).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn emitted_sources_are_reproducible() {
    let p = FamilyParams::new(3).p(1).q(1).a(1.41421356);
    let x = build_entry(Family::Ex4, &p).unwrap();
    let y = build_entry(Family::Ex4, &p).unwrap();
    assert_eq!(x.source, y.source);
    assert_eq!(parse_chart(&x.source).unwrap(), x.chart);
    assert!(x.source.contains("a = 1.41421356"));
    assert!(x.notes.iter().any(|n| n.contains("printed alpha")));
}

#[test]
fn constraints_are_enforced() {
    let bad = [
        (Family::Ex1, FamilyParams::new(3).k(3).a(1.0)),
        (Family::Ex1, FamilyParams::new(9).k(1).a(1.0)),
        (Family::Ex2, FamilyParams::new(3).k(1).a(-1.0)),
        (Family::Ex3, FamilyParams::new(3).k(1).a(1.0)),
        (Family::Ex4, FamilyParams::new(3).p(1).q(2).a(1.5)),
        (Family::Ex4, FamilyParams::new(3).p(1).q(1).a(1.0)),
        (Family::Ex5, FamilyParams::new(3).k(1).p(1).a(1.0)),
        (Family::Ex6, FamilyParams::new(4).k(3).p(1).a(1.2)),
    ];
    for (f, p) in bad {
        let err = build_entry(f, &p).unwrap_err();
        assert_eq!(err.kind(), "ConstraintViolation", "{f} {p:?}");
    }
    assert!(build_entry(Family::Ex2, &FamilyParams::new(3).a(1.0)).is_err());
}

#[test]
fn oracle_agrees_with_pipeline_for_the_cone() {
    for p in admissible_grid(Family::Ex4, &[3, 4, 5], &[1.2, 2.5]) {
        let e = build_entry(Family::Ex4, &p).unwrap();
        let o = e.oracle();
        for pt in sample_points(&e.chart, 10, 2).unwrap() {
            let d = invariants_at(&e.chart, &pt, 0.7).unwrap();
            let dev = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let b = dev(&d.eig_b, &o.eig_b()).min(dev(&d.eig_b, &o.flipped().eig_b()));
            let dd = dev(&d.eig_d, &o.eig_d(0.7)).min(dev(&d.eig_d, &o.flipped().eig_d(0.7)));
            assert!(b < 1e-8 && dev(&d.eig_a, &o.eig_a()) < 1e-8 && dd < 1e-8, "{p:?}");
        }
        let m = oracle_eigenvalues(&e, 0.7);
        assert_eq!(m.eig_b.iter().map(|x| x.1).sum::<usize>(), p.n);
    }
}

#[test]
fn warped_entries_have_three_b_values() {
    for (f, n, k, pp, a) in [
        (Family::Ex5, 4, 3, 1, 1.5),
        (Family::Ex5, 5, 3, 1, 0.7),
        (Family::Ex6, 4, 3, 1, 0.5),
        (Family::Ex6, 5, 4, 2, 0.6),
    ] {
        let e = build_entry(f, &FamilyParams::new(n).k(k).p(pp).a(a)).unwrap();
        let c = realizable(f == Family::Ex5, n, k, pp, a);
        assert_eq!(e.params.r, Some(c.r));
        assert_eq!(e.params.lambda, Some(c.lambda));
        for pt in sample_points(&e.chart, 5, 8).unwrap() {
            let d = invariants_at(&e.chart, &pt, c.lambda).unwrap();
            assert!(count_distinct(&d.eig_b, 1e-6) >= 3, "{:?}", d.eig_b);
        }
    }
}

#[test]
fn unrealizable_warped_target_is_reported() {
    let err = build_entry(Family::Ex5, &FamilyParams::new(4).k(3).r(1.0).lambda(0.0)).unwrap_err();
    assert_eq!(err.kind(), "NoRealization");
}

#[test]
fn grid_sizes() {
    assert_eq!(admissible_grid(Family::Ex1, &[3], &[0.5, 1.0]).len(), 4);
    // a = 1.0 is clipped for the anti-de Sitter family
    assert_eq!(admissible_grid(Family::Ex3, &[3], &[0.5, 1.0]).len(), 2);
    assert!(admissible_grid(Family::Ex4, &[3], &[1.5]).iter().all(|p| p.p == Some(1) && p.q == Some(1)));
}
