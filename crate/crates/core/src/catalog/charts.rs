//! Chart sources for the example families, written in the chart language.

use std::f64::consts::PI;
use std::fmt::Write as _;

const ANGLE: (f64, f64) = (0.1, PI - 0.1);
const RAPIDITY: (f64, f64) = (-1.0, 1.0);
const RADIAL: (f64, f64) = (0.2, 1.2);
const FLAT: (f64, f64) = (-1.0, 1.0);

/// Collects variables with their sampling intervals.
#[derive(Default)]
pub(crate) struct Vars {
    pub names: Vec<String>,
    pub domain: Vec<(f64, f64)>,
}

impl Vars {
    fn push(&mut self, range: (f64, f64)) -> String {
        let name = format!("u{}", self.names.len() + 1);
        self.names.push(name.clone());
        self.domain.push(range);
        name
    }

    /// Components of the unit sphere `S^p` in `R^{p+1}` (`p` angle variables).
    pub fn sphere(&mut self, p: usize) -> Vec<String> {
        let angles: Vec<String> = (0..p).map(|_| self.push(ANGLE)).collect();
        let mut out = Vec::with_capacity(p + 1);
        let mut prefix = String::new();
        for (i, th) in angles.iter().enumerate() {
            out.push(format!("{prefix}cos({th})"));
            if i + 1 == p {
                out.push(format!("{prefix}sin({th})"));
            }
            prefix.push_str(&format!("sin({th})*"));
        }
        out
    }

    /// Components of the unit hyperboloid `H^k` in `R^{k+1}_1`, timelike first.
    pub fn hyperboloid(&mut self, k: usize) -> Vec<String> {
        if k == 1 {
            let u = self.push(RAPIDITY);
            return vec![format!("cosh({u})"), format!("sinh({u})")];
        }
        let rho = self.push(RADIAL);
        let omega = self.sphere(k - 1);
        let mut out = vec![format!("cosh({rho})")];
        out.extend(omega.into_iter().map(|w| format!("sinh({rho})*{w}")));
        out
    }

    pub fn flat(&mut self, count: usize) -> Vec<String> {
        (0..count).map(|_| self.push(FLAT)).collect()
    }

    pub fn set_range(&mut self, name: &str, range: (f64, f64)) {
        if let Some(i) = self.names.iter().position(|v| v == name) {
            self.domain[i] = range;
        }
    }
}

pub(crate) fn scaled(factor: &str, comps: &[String]) -> Vec<String> {
    comps.iter().map(|c| format!("{factor}*{c}")).collect()
}

pub(crate) fn divided(comps: &[String], denom: &str) -> Vec<String> {
    comps.iter().map(|c| format!("{c}/{denom}")).collect()
}

pub(crate) fn render(
    name: &str,
    ambient: &str,
    dim: usize,
    vars: &Vars,
    params: &[(&str, f64)],
    comps: &[String],
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chart {name}");
    let _ = writeln!(s, "ambient {ambient} dim {dim}");
    let v: Vec<String> = vars
        .names
        .iter()
        .zip(&vars.domain)
        .map(|(n, (lo, hi))| format!("{n} in [{lo:?}, {hi:?}]"))
        .collect();
    let _ = writeln!(s, "vars {}", v.join(", "));
    if !params.is_empty() {
        let p: Vec<String> = params.iter().map(|(n, v)| format!("{n} = {v:?}")).collect();
        let _ = writeln!(s, "params {}", p.join(", "));
    }
    for (i, c) in comps.iter().enumerate() {
        let _ = writeln!(s, "x{} = {c}", i + 1);
    }
    s
}

pub(crate) fn ex1(n: usize, k: usize, a: f64) -> String {
    let mut v = Vars::default();
    let h = v.hyperboloid(k);
    let mut comps = scaled("a", &h);
    comps.extend(v.flat(n - k));
    render(&format!("ex1 n={n} k={k}"), "flat1", n + 1, &v, &[("a", a)], &comps)
}

pub(crate) fn ex2(n: usize, k: usize, a: f64) -> String {
    let mut v = Vars::default();
    let s = v.sphere(k);
    let h = v.hyperboloid(n - k);
    let mut comps = vec![format!("a*{}", h[0])];
    comps.extend(scaled("sqrt(1 + a^2)", &s));
    comps.extend(scaled("a", &h[1..]));
    render(&format!("ex2 n={n} k={k}"), "desitter", n + 1, &v, &[("a", a)], &comps)
}

pub(crate) fn ex3(n: usize, k: usize, a: f64) -> String {
    let mut v = Vars::default();
    let h1 = v.hyperboloid(k);
    let h2 = v.hyperboloid(n - k);
    let mut comps = vec![format!("sqrt(1 - a^2)*{}", h1[0]), format!("a*{}", h2[0])];
    comps.extend(scaled("sqrt(1 - a^2)", &h1[1..]));
    comps.extend(scaled("a", &h2[1..]));
    render(&format!("ex3 n={n} k={k}"), "antidesitter", n + 1, &v, &[("a", a)], &comps)
}

pub(crate) fn ex4(n: usize, p: usize, q: usize, a: f64) -> String {
    let mut v = Vars::default();
    let h = v.hyperboloid(q);
    let s = v.sphere(p);
    let t = v.flat(1).remove(0);
    v.set_range(&t, (0.5, 3.0));
    let rest = v.flat(n - p - q - 1);
    let mut comps = scaled(&format!("{t}*sqrt(a^2 - 1)"), &h);
    comps.extend(scaled(&format!("{t}*a"), &s));
    comps.extend(rest);
    render(&format!("ex4 n={n} p={p} q={q}"), "flat1", n + 1, &v, &[("a", a)], &comps)
}

/// `x = (y1/y0, y2/y0)`, `y1 = (c2 h_0, c1 s, c2 h_rest)` a product
/// `S^p(c1) x H^{k-p}(c2)` and `(y0, y2) = r H^{n-k}`.
pub(crate) fn ex5(n: usize, k: usize, p: usize, c1: f64, c2: f64, r: f64) -> String {
    let mut v = Vars::default();
    let s = v.sphere(p);
    let h = v.hyperboloid(k - p);
    let y = v.hyperboloid(n - k);
    let y0 = format!("(r*{})", y[0]);
    let mut comps = vec![format!("c2*{}", h[0])];
    comps.extend(scaled("c1", &s));
    comps.extend(scaled("c2", &h[1..]));
    comps.extend(scaled("r", &y[1..]));
    let comps = divided(&comps, &y0);
    render(
        &format!("ex5 n={n} k={k} p={p}"),
        "desitter",
        n + 1,
        &v,
        &[("c1", c1), ("c2", c2), ("r", r)],
        &comps,
    )
}

/// `x = (z2_0/z1_0, z1_rest/z1_0, z2_rest/z1_0, y2/z1_0)` with
/// `(z1_0, z2_0, z1_rest, z2_rest)` the product `H^p(c1) x H^{k-p}(c2)` in
/// `H^{k+1}_1(-r)` and `y2 = r S^{n-k}`.
pub(crate) fn ex6(n: usize, k: usize, p: usize, c1: f64, c2: f64, r: f64) -> String {
    let mut v = Vars::default();
    let z1 = v.hyperboloid(p);
    let z2 = v.hyperboloid(k - p);
    let y2 = v.sphere(n - k);
    let y0 = format!("(c1*{})", z1[0]);
    let mut comps = vec![format!("c2*{}", z2[0])];
    comps.extend(scaled("c1", &z1[1..]));
    comps.extend(scaled("c2", &z2[1..]));
    comps.extend(scaled("r", &y2));
    let comps = divided(&comps, &y0);
    render(
        &format!("ex6 n={n} k={k} p={p}"),
        "desitter",
        n + 1,
        &v,
        &[("c1", c1), ("c2", c2), ("r", r)],
        &comps,
    )
}
