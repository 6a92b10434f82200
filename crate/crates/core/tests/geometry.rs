use conforma::catalog::{admissible_grid, build_entry, CatalogEntry, Family, FamilyParams};
use conforma::linalg::clusters;
use conforma::{
    conformal_factor, fundamental_forms, inner_s, invariants_at, invariants_oriented, parse_chart, sample_points,
    space_form_residual, unit_normal, Jet4, Orientation,
};

fn grid() -> Vec<CatalogEntry> {
    Family::ALL
        .into_iter()
        .flat_map(|f| {
            let a: &[f64] = match f {
                Family::Ex4 => &[1.2, 2.5],
                Family::Ex6 => &[0.3, 0.8],
                _ => &[0.5, 1.5],
            };
            admissible_grid(f, &[3, 4], a).into_iter().map(move |p| build_entry(f, &p).unwrap())
        })
        .collect()
}

#[test]
fn curved_charts_stay_on_the_quadric() {
    let mut curved = 0;
    for e in grid() {
        if e.chart.ambient.curvature() == 0 {
            continue;
        }
        curved += 1;
        for pt in sample_points(&e.chart, 20, 3).unwrap() {
            let r = space_form_residual(&e.chart, &pt).unwrap();
            assert!(r < 1e-9, "{}: {r}", e.chart.name);
        }
    }
    assert!(curved > 0);
}

#[test]
fn second_form_two_ways() {
    let h = 1e-4;
    for e in grid() {
        let c = &e.chart;
        let s = c.ambient.signature_index();
        for pt in sample_points(c, 5, 9).unwrap() {
            let ff = fundamental_forms(c, &pt, Orientation::Rule).unwrap();
            let jets = c.eval_jets(&pt).unwrap();
            let n = c.n();
            for j in 0..n {
                let mut plus = pt.clone();
                let mut minus = pt.clone();
                plus[j] += h;
                minus[j] -= h;
                let ep = unit_normal(c, &plus, Orientation::Rule).unwrap();
                let em = unit_normal(c, &minus, Orientation::Rule).unwrap();
                let de: Vec<f64> = ep.iter().zip(&em).map(|(a, b)| (a - b) / (2.0 * h)).collect();
                for i in 0..n {
                    let xi: Vec<f64> = jets.iter().map(|x| x.d1(i)).collect();
                    let xij: Vec<f64> = jets.iter().map(|x| x.d2(i, j)).collect();
                    let direct = inner_s(&xij, &ff.normal, s).unwrap();
                    let via_normal = -inner_s(&xi, &de, s).unwrap();
                    assert!((direct - ff.ii_coord[(i, j)]).abs() < 1e-12);
                    assert!((direct - via_normal).abs() < 1e-5, "{}: {direct} vs {via_normal}", c.name);
                }
            }
        }
    }
}

#[test]
fn cone_principal_curvatures() {
    for (n, p, q, a) in [(3, 1, 1, 1.5), (4, 1, 2, 1.3), (5, 2, 1, 2.0)] {
        let e = build_entry(Family::Ex4, &FamilyParams::new(n).p(p).q(q).a(a)).unwrap();
        let b = (a * a - 1.0).sqrt();
        for pt in sample_points(&e.chart, 8, 4).unwrap() {
            let t = pt[p + q];
            let mut want: Vec<f64> = std::iter::repeat(-a / (b * t))
                .take(q)
                .chain(std::iter::repeat(-b / (a * t)).take(p))
                .chain(std::iter::repeat(0.0).take(n - p - q))
                .collect();
            want.sort_by(f64::total_cmp);
            let mut neg: Vec<f64> = want.iter().map(|x| -x).collect();
            neg.sort_by(f64::total_cmp);
            let got = fundamental_forms(&e.chart, &pt, Orientation::Rule).unwrap().principal;
            let dev = |w: &[f64]| got.iter().zip(w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(dev(&want).min(dev(&neg)) < 1e-10, "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn flat_chart_has_no_christoffels() {
    let c = parse_chart("chart flat\nambient flat1 dim 4\nvars u in [-1, 1], v in [-1, 1], w in [-1, 1]\nx1 = 0\nx2 = u\nx3 = v\nx4 = w\n")
        .unwrap();
    let ff = fundamental_forms(&c, &[0.1, 0.2, -0.3], Orientation::Rule).unwrap();
    assert!(ff.christoffel.iter().all(|g| *g == 0.0));
    assert_eq!(ff.normal, vec![1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn opposite_normal_flips_b_and_c() {
    for e in grid() {
        for pt in sample_points(&e.chart, 3, 5).unwrap() {
            let lam = 0.4;
            let x = invariants_oriented(&e.chart, &pt, lam, Orientation::Rule).unwrap();
            let y = invariants_oriented(&e.chart, &pt, lam, Orientation::Flipped).unwrap();
            assert!(x.b.add(&y.b).max_abs() < 1e-12);
            assert!(x.a.sub(&y.a).max_abs() < 1e-12);
            assert!(x.c_form.iter().zip(&y.c_form).all(|(p, q)| (p + q).abs() < 1e-12));
            let z = invariants_oriented(&e.chart, &pt, -lam, Orientation::Flipped).unwrap();
            let dev = x.eig_d.iter().zip(&z.eig_d).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-12, "{}", e.chart.name);
        }
    }
}

#[test]
fn catalog_invariants_are_regular() {
    for e in grid() {
        let mut pattern = None;
        for pt in sample_points(&e.chart, 20, 6).unwrap() {
            let d = invariants_at(&e.chart, &pt, 0.0).unwrap();
            assert!(d.c_max() < 1e-9, "{}: |C| = {}", e.chart.name, d.c_max());
            let n = d.n() as f64;
            let ff = &d.forms;
            let want = n / (n - 1.0) * (ff.norm2_ii - n * ff.mean_curvature * ff.mean_curvature);
            assert!((conformal_factor(ff).unwrap() - want).abs() <= 1e-12 * want);
            assert!((d.e2tau - want).abs() <= 1e-12 * want);
            let mult: Vec<usize> = clusters(&d.eig_b, 1e-6).into_iter().map(|(_, m)| m).collect();
            match &pattern {
                None => pattern = Some(mult),
                Some(p) => assert_eq!(p, &mult, "{}", e.chart.name),
            }
        }
    }
}

#[test]
fn umbilic_chart_is_rejected() {
    // a totally geodesic slice has no conformal factor
    let c = parse_chart("chart plane\nambient flat1 dim 3\nvars u in [-1, 1], v in [-1, 1]\nx1 = 0.5\nx2 = u\nx3 = v\n").unwrap();
    let err = invariants_at(&c, &[0.1, 0.2], 0.0).unwrap_err();
    assert_eq!(err.kind(), "UmbilicPoint");
}

#[test]
fn timelike_chart_is_rejected() {
    let c = parse_chart("chart t\nambient flat1 dim 3\nvars u in [-1, 1], v in [-1, 1]\nx1 = 2*u\nx2 = u\nx3 = v\n").unwrap();
    let err = invariants_at(&c, &[0.1, 0.2], 0.0).unwrap_err();
    assert_eq!(err.kind(), "NotSpacelike");
}

#[test]
fn f32_pipeline_smoke() {
    let e = build_entry(Family::Ex1, &FamilyParams::new(3).k(1).a(1.5)).unwrap();
    let pt: Vec<f32> = sample_points(&e.chart, 1, 2).unwrap()[0].iter().map(|&x| x as f32).collect();
    let d = invariants_at::<f32>(&e.chart, &pt, 0.0).unwrap();
    let want = [-1.0f32 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
    let mut neg: Vec<f32> = d.eig_b.iter().map(|x| -x).collect();
    neg.sort_by(f32::total_cmp);
    let dev = |v: &[f32]| v.iter().zip(want).map(|(x, y)| (x - y).abs()).fold(0.0f32, f32::max);
    assert!(dev(&d.eig_b).min(dev(&neg)) < 1e-3, "{:?}", d.eig_b);
    let j = Jet4::<f32>::seed(&[1.0, 2.0], 1).unwrap();
    assert_eq!(j.d1(1), 1.0);
}
