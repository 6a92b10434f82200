use conforma::catalog::{admissible_grid, build_entry, Family};
use conforma::dsl::{BinOp, Func, Scope};
use conforma::{parse_chart, parse_expr, sample_points, Expr, Jet4};
use proptest::prelude::*;

fn scope() -> Scope {
    Scope {
        vars: vec!["u".into(), "v".into(), "w".into()],
        params: vec![("a".into(), 1.25), ("r_2".into(), 0.5)],
    }
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Sinh),
        Just(Func::Cosh),
        Just(Func::Exp),
        Just(Func::Log),
        Just(Func::Sqrt),
        Just(Func::Neg),
    ]
}

fn op() -> impl Strategy<Value = BinOp> {
    prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..1e3).prop_map(Expr::Const),
        (1e-9f64..1e-3).prop_map(Expr::Const),
        (0usize..3).prop_map(Expr::Var),
        (0usize..2).prop_map(Expr::Param),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (func(), inner.clone()).prop_map(|(f, a)| Expr::Unary(f, Box::new(a))),
            (op(), inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Binary(o, Box::new(a), Box::new(b))),
            (inner, -4i32..=6).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_roundtrip(e in expr()) {
        let s = scope();
        let text = e.display(&s).to_string();
        let back = parse_expr(&text, &s).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        let again = parse_expr(&back.display(&s).to_string(), &s).unwrap();
        prop_assert_eq!(again, back);
    }
}

#[test]
fn catalog_sources_roundtrip() {
    for f in Family::ALL {
        for p in admissible_grid(f, &[3, 4], &[0.5, 1.2, 1.5]) {
            let e = build_entry(f, &p).unwrap();
            let printed = e.chart.to_source();
            let back = parse_chart(&printed).unwrap();
            assert_eq!(back, e.chart, "{printed}");
            assert_eq!(parse_chart(&back.to_source()).unwrap(), back);
        }
    }
}

/// Plain recursive scalar evaluation, independent of the jet code.
fn eval(e: &Expr, x: &[f64], p: &[f64]) -> f64 {
    match e {
        Expr::Const(c) => *c,
        Expr::Var(i) => x[*i],
        Expr::Param(i) => p[*i],
        Expr::Unary(f, a) => {
            let v = eval(a, x, p);
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Sinh => v.sinh(),
                Func::Cosh => v.cosh(),
                Func::Exp => v.exp(),
                Func::Log => v.ln(),
                Func::Sqrt => v.sqrt(),
                Func::Neg => -v,
            }
        }
        Expr::Binary(o, a, b) => {
            let (a, b) = (eval(a, x, p), eval(b, x, p));
            match o {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
            }
        }
        Expr::Pow(a, n) => eval(a, x, p).powi(*n),
    }
}

#[test]
fn jet_values_match_scalar_evaluation() {
    for f in Family::ALL {
        for p in admissible_grid(f, &[3, 4], &[0.5, 1.2, 1.5]) {
            let e = build_entry(f, &p).unwrap();
            let params = e.chart.params::<f64>();
            for pt in sample_points(&e.chart, 10, 1).unwrap() {
                let seeds = Jet4::seed_all(&pt).unwrap();
                for c in &e.chart.components {
                    let want = eval(c, &pt, &params);
                    let jet = c.eval_jet(&seeds, &params).unwrap().val();
                    let scalar = c.eval_scalar(&pt, &params).unwrap();
                    assert!((jet - want).abs() <= 1e-14 * (1.0 + want.abs()), "{jet} vs {want}");
                    assert!((scalar - want).abs() <= 1e-14 * (1.0 + want.abs()));
                }
            }
        }
    }
}

#[test]
fn syntax_errors_are_located() {
    let s = scope();
    assert!(parse_expr("u +", &s).is_err());
    assert!(parse_expr("sin(u, v)", &s).is_err());
    assert!(parse_expr("q*u", &s).is_err());
    assert!(parse_expr("u^1.5", &s).is_err());
    let err = parse_chart("chart c\nambient flat1 dim 3\nvars u in [0, 1], v in [0, 1]\nx1 = u\nx2 = v\nx3 = u *\n").unwrap_err();
    assert_eq!(err.kind(), "SyntaxError");
}
