//! The example families with their charts and closed-form eigenvalues.

mod charts;
pub mod inner;

use serde::{Deserialize, Serialize};

use crate::dsl::{parse_chart, ChartImmersion};
use crate::error::{Error, Result};
use crate::linalg::clusters;
pub use inner::{
    product_curvatures, realizable, residual_landscape, solve_inner_hypersurface, Compatible, InnerAmbient,
    InnerHypersurfaceSpec, LandscapeRow, Realization,
};

/// Largest supported hypersurface dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Ex1, Family::Ex2, Family::Ex3, Family::Ex4, Family::Ex5, Family::Ex6];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ex1 => "ex1",
            Family::Ex2 => "ex2",
            Family::Ex3 => "ex3",
            Family::Ex4 => "ex4",
            Family::Ex5 => "ex5",
            Family::Ex6 => "ex6",
        }
    }

    /// Case of the classification of para-Blaschke isoparametric
    /// hypersurfaces with `C = 0` and two or three distinct `D` eigenvalues.
    pub fn classification_case(self) -> u8 {
        match self {
            Family::Ex1 => 4,
            Family::Ex2 => 2,
            Family::Ex3 => 3,
            Family::Ex4 => 5,
            Family::Ex5 => 6,
            Family::Ex6 => 7,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::ConstraintViolation {
                param: "family".into(),
                bound: "one of ex1..ex6".into(),
            })
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Named family parameters. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl FamilyParams {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }
    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
    pub fn p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }
    pub fn q(mut self, q: usize) -> Self {
        self.q = Some(q);
        self
    }
    pub fn a(mut self, a: f64) -> Self {
        self.a = Some(a);
        self
    }
    pub fn r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }
    pub fn lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }
}

/// One diagonal block shared by `B` and `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleBlock {
    pub b: f64,
    pub a: f64,
    pub mult: usize,
}

/// Closed-form `B` and `A`, simultaneously diagonal in a product frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Oracle {
    pub blocks: Vec<OracleBlock>,
}

fn expand(pairs: impl Iterator<Item = (f64, usize)>) -> Vec<f64> {
    let mut v: Vec<f64> = pairs.flat_map(|(x, m)| std::iter::repeat(x).take(m)).collect();
    v.sort_by(f64::total_cmp);
    v
}

impl Oracle {
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.mult).sum()
    }
    pub fn eig_b(&self) -> Vec<f64> {
        expand(self.blocks.iter().map(|b| (b.b, b.mult)))
    }
    pub fn eig_a(&self) -> Vec<f64> {
        expand(self.blocks.iter().map(|b| (b.a, b.mult)))
    }
    pub fn eig_d(&self, lambda: f64) -> Vec<f64> {
        expand(self.blocks.iter().map(|b| (b.a + lambda * b.b, b.mult)))
    }
    pub fn trace_b(&self) -> f64 {
        self.blocks.iter().map(|b| b.mult as f64 * b.b).sum()
    }
    pub fn norm2_b(&self) -> f64 {
        self.blocks.iter().map(|b| b.mult as f64 * b.b * b.b).sum()
    }
    pub fn trace_a(&self) -> f64 {
        self.blocks.iter().map(|b| b.mult as f64 * b.a).sum()
    }
    /// The oracle for the opposite normal: `B` changes sign.
    pub fn flipped(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| OracleBlock { b: -b.b, ..*b }).collect(),
        }
    }
}

/// Distinct eigenvalues with multiplicities, ascending.
pub type Multiset = Vec<(f64, usize)>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEigenvalues {
    pub eig_b: Multiset,
    pub eig_a: Multiset,
    pub eig_d: Multiset,
}

const MERGE_TOL: f64 = 1e-12;

fn multiset(sorted: &[f64]) -> Multiset {
    clusters(sorted, MERGE_TOL)
}

/// Two-block families: the first block has multiplicity `k`.
fn two_block(n: usize, k: usize, a1: f64, a2: f64) -> Oracle {
    let (nf, kf) = (n as f64, k as f64);
    let b1 = ((nf - 1.0) * (nf - kf) / kf).sqrt() / nf;
    let b2 = -((nf - 1.0) * kf / (nf - kf)).sqrt() / nf;
    Oracle {
        blocks: vec![
            OracleBlock { b: b1, a: a1, mult: k },
            OracleBlock {
                b: b2,
                a: a2,
                mult: n - k,
            },
        ],
    }
}

pub fn ex1_oracle(n: usize, k: usize) -> Oracle {
    let (nf, kf) = (n as f64, k as f64);
    let c = 2.0 * nf * nf * (nf - kf);
    two_block(n, k, (nf - 1.0) * (kf - 2.0 * nf) / c, (nf - 1.0) * kf / c)
}

pub fn ex2_oracle(n: usize, k: usize, a: f64) -> Oracle {
    let (nf, kf) = (n as f64, k as f64);
    let f = (nf - 1.0) / (kf * (nf - kf)) / (2.0 * nf * nf);
    let nk = nf - kf;
    two_block(
        n,
        k,
        f * (nk * nk + nf * nf * a * a),
        f * (kf * kf - nf * nf * a * a - nf * nf),
    )
}

pub fn ex3_oracle(n: usize, k: usize, a: f64) -> Oracle {
    let (nf, kf) = (n as f64, k as f64);
    let f = (nf - 1.0) / (kf * (nf - kf)) / (2.0 * nf * nf);
    let nk = nf - kf;
    two_block(
        n,
        k,
        f * (nk * nk - nf * nf * a * a),
        f * (nf * nf * a * a - nf * nf + kf * kf),
    )
}

/// Which normalization of the conformal factor of the cone family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ex4Alpha {
    /// `alpha^2 = [q(n-q)a^4 - 2pq a^2 b^2 + p(n-p)b^4] / (n-1)` with the
    /// printed `a_3 = (K^2 + n^2 a^2 b^2) / (2 n^2 a^2 b^2 alpha^2)`.
    Printed,
    /// `alpha^2` divided by `a^2 b^2`, and `a_3` with `K^2 - n^2 a^2 b^2`.
    Corrected,
}

pub fn ex4_alpha2(n: usize, p: usize, q: usize, a: f64, variant: Ex4Alpha) -> f64 {
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    let (a2, b2) = (a * a, a * a - 1.0);
    let num = qf * (nf - qf) * a2 * a2 + pf * (nf - pf) * b2 * b2 - 2.0 * pf * qf * a2 * b2;
    match variant {
        Ex4Alpha::Printed => num / (nf - 1.0),
        Ex4Alpha::Corrected => num / ((nf - 1.0) * a2 * b2),
    }
}

/// Blocks ordered `(H^q, S^p, flat)`.
pub fn ex4_oracle(n: usize, p: usize, q: usize, a: f64, variant: Ex4Alpha) -> Oracle {
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    let (a2, b2) = (a * a, a * a - 1.0);
    let b = b2.sqrt();
    let alpha2 = ex4_alpha2(n, p, q, a, variant);
    let alpha = alpha2.sqrt();
    let kk = pf * b2 + qf * a2;
    let den_b = nf * a * b * alpha;
    let den_a = 2.0 * nf * nf * a2 * b2 * alpha2;
    let nab2 = nf * nf * a2 * b2;
    let a3 = match variant {
        Ex4Alpha::Printed => (kk * kk + nab2) / den_a,
        Ex4Alpha::Corrected => (kk * kk - nab2) / den_a,
    };
    let mut blocks = vec![
        OracleBlock {
            b: (pf * b2 - (nf - qf) * a2) / den_b,
            a: (kk * kk - 2.0 * nf * a2 * kk + nab2) / den_a,
            mult: q,
        },
        OracleBlock {
            b: (qf * a2 - (nf - pf) * b2) / den_b,
            a: (kk * kk - 2.0 * nf * b2 * kk + nab2) / den_a,
            mult: p,
        },
        OracleBlock {
            b: kk / den_b,
            a: a3,
            mult: n - p - q,
        },
    ];
    blocks.retain(|b| b.mult > 0);
    Oracle { blocks }
}

/// Two-block `D` of the warped families from the inner principal
/// curvatures. `de_sitter` selects the `S^{n+1}_1` product with `H^{n-k}`.
pub fn warped_oracle(de_sitter: bool, n: usize, r: f64, lambda: f64, kappa: &[(f64, usize)]) -> Oracle {
    let k: usize = kappa.iter().map(|&(_, m)| m).sum();
    let lr = lambda * lambda * r * r;
    let two_r2 = 2.0 * r * r;
    let (inner_a, outer_a) = if de_sitter {
        ((1.0 + lr) / two_r2, (lr - 1.0) / two_r2)
    } else {
        ((lr - 1.0) / two_r2, (lr + 1.0) / two_r2)
    };
    let mut blocks: Vec<OracleBlock> = kappa
        .iter()
        .map(|&(kap, m)| OracleBlock {
            b: kap - lambda,
            a: inner_a - lambda * kap,
            mult: m,
        })
        .collect();
    blocks.push(OracleBlock {
        b: -lambda,
        a: outer_a,
        mult: n - k,
    });
    Oracle { blocks }
}

/// A constructed family member.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub family: Family,
    /// All parameters, including the derived `r` and `lambda` of the warped families.
    pub params: FamilyParams,
    /// Inner product hypersurface of the warped families.
    pub realization: Option<Realization>,
    pub chart: ChartImmersion,
    pub source: String,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Closed-form `B` and `A` for the orientation used by the printed formulas.
    pub fn oracle(&self) -> Oracle {
        let p = &self.params;
        let (n, k, a) = (p.n, p.k.unwrap_or(0), p.a.unwrap_or(0.0));
        match self.family {
            Family::Ex1 => ex1_oracle(n, k),
            Family::Ex2 => ex2_oracle(n, k, a),
            Family::Ex3 => ex3_oracle(n, k, a),
            Family::Ex4 => ex4_oracle(n, p.p.unwrap_or(0), p.q.unwrap_or(0), a, Ex4Alpha::Corrected),
            Family::Ex5 | Family::Ex6 => {
                let re = self.realization.expect("warped entries carry a realization");
                warped_oracle(
                    self.family == Family::Ex5,
                    n,
                    p.r.unwrap_or(1.0),
                    p.lambda.unwrap_or(0.0),
                    &[(re.kappa1, re.p), (re.kappa2, k - re.p)],
                )
            }
        }
    }
}

/// Closed-form eigenvalue multisets of `B`, `A` and `D = A + lambda B`.
pub fn oracle_eigenvalues(entry: &CatalogEntry, lambda: f64) -> OracleEigenvalues {
    let o = entry.oracle();
    OracleEigenvalues {
        eig_b: multiset(&o.eig_b()),
        eig_a: multiset(&o.eig_a()),
        eig_d: multiset(&o.eig_d(lambda)),
    }
}

fn violation(param: &str, bound: &str) -> Error {
    Error::ConstraintViolation {
        param: param.into(),
        bound: bound.into(),
    }
}

fn need<T: Copy>(v: Option<T>, param: &str) -> Result<T> {
    v.ok_or_else(|| violation(param, "required"))
}

fn positive_finite(v: f64, param: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(violation(param, "> 0"))
    }
}

/// Builds the chart and oracle of a family member after checking admissibility.
///
/// The warped families accept either `(k, p, a)`, with `a = c2 / r` the shape of
/// the inner product (`r` and `lambda` then follow), or `(k, r, lambda)`, which
/// is handed to [`solve_inner_hypersurface`].
pub fn build_entry(family: Family, params: &FamilyParams) -> Result<CatalogEntry> {
    let n = params.n;
    if !(2..=MAX_DIM).contains(&n) {
        return Err(violation("n", "2 <= n <= 8"));
    }
    let mut out = params.clone();
    let mut notes = Vec::new();
    let mut realization = None;
    let source = match family {
        Family::Ex1 | Family::Ex2 | Family::Ex3 => {
            let k = need(params.k, "k")?;
            if k < 1 || k >= n {
                return Err(violation("k", "1 <= k <= n-1"));
            }
            let a = positive_finite(need(params.a, "a")?, "a")?;
            match family {
                Family::Ex1 => charts::ex1(n, k, a),
                Family::Ex2 => charts::ex2(n, k, a),
                _ => {
                    if a >= 1.0 {
                        return Err(violation("a", "< 1"));
                    }
                    charts::ex3(n, k, a)
                }
            }
        }
        Family::Ex4 => {
            let p = need(params.p, "p")?;
            let q = need(params.q, "q")?;
            if p < 1 {
                return Err(violation("p", ">= 1"));
            }
            if q < 1 {
                return Err(violation("q", ">= 1"));
            }
            if p + q >= n {
                return Err(violation("p+q", "< n"));
            }
            let a = need(params.a, "a")?;
            if !(a.is_finite() && a > 1.0) {
                return Err(violation("a", "> 1"));
            }
            let printed = ex4_oracle(n, p, q, a, Ex4Alpha::Printed).norm2_b();
            let corrected = ex4_oracle(n, p, q, a, Ex4Alpha::Corrected).norm2_b();
            let want = (n as f64 - 1.0) / n as f64;
            notes.push(format!(
                "sum B^2 = {want:.12}: corrected alpha gives {corrected:.12}, printed alpha gives {printed:.12}"
            ));
            charts::ex4(n, p, q, a)
        }
        Family::Ex5 | Family::Ex6 => {
            let de_sitter = family == Family::Ex5;
            let k = need(params.k, "k")?;
            if k < 2 || k + 1 > n {
                return Err(violation("k", "2 <= k <= n-1"));
            }
            let re = if let Some(a) = params.a {
                let p = need(params.p, "p")?;
                if p < 1 || p >= k {
                    return Err(violation("p", "1 <= p <= k-1"));
                }
                let a = positive_finite(a, "a")?;
                if !de_sitter && a >= 1.0 {
                    return Err(violation("a", "< 1"));
                }
                let c = realizable(de_sitter, n, k, p, a);
                out.r = Some(c.r);
                out.lambda = Some(c.lambda);
                let amb = if de_sitter {
                    InnerAmbient::DeSitter(c.r)
                } else {
                    InnerAmbient::AntiDeSitter(c.r)
                };
                product_curvatures(amb, k, p, c.c1, c.c2)
            } else {
                let r = positive_finite(need(params.r, "r")?, "r")?;
                let lambda = need(params.lambda, "lambda")?;
                if !lambda.is_finite() {
                    return Err(violation("lambda", "finite"));
                }
                let (spec, amb) = if de_sitter {
                    (InnerHypersurfaceSpec::de_sitter(n, k, r, lambda), InnerAmbient::DeSitter(r))
                } else {
                    (InnerHypersurfaceSpec::anti_de_sitter(n, k, r, lambda), InnerAmbient::AntiDeSitter(r))
                };
                let mut re = solve_inner_hypersurface(&spec, amb)?;
                if let Some(pp) = params.p {
                    if pp != re.p {
                        notes.push(format!("requested p = {pp}, realized with p = {}", re.p));
                    }
                }
                // the product normal may point against the one realizing H_1
                if re.h1 * spec.target_h1 < 0.0 {
                    re.kappa1 = -re.kappa1;
                    re.kappa2 = -re.kappa2;
                    re.h1 = -re.h1;
                }
                out.a = Some(re.c2 / r);
                re
            };
            out.p = Some(re.p);
            realization = Some(re);
            let r = out.r.expect("set above");
            notes.push(format!(
                "inner product p = {}, c1 = {:.12}, c2 = {:.12}, H1 = {:.12}, R1 = {:.12}",
                re.p, re.c1, re.c2, re.h1, re.r1
            ));
            notes.push("normal orientation of the inner hypersurface fixed by sign-insensitive matching".into());
            if de_sitter {
                charts::ex5(n, k, re.p, re.c1, re.c2, r)
            } else {
                charts::ex6(n, k, re.p, re.c1, re.c2, r)
            }
        }
    };
    let chart = parse_chart(&source)?;
    Ok(CatalogEntry {
        family,
        params: out,
        realization,
        chart,
        source,
        notes,
    })
}

/// Admissible parameter grid: every `k` (or `(p, q)`) for `n` in `ns`, with
/// `a` values clipped to each family's constraints.
pub fn admissible_grid(family: Family, ns: &[usize], a_values: &[f64]) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for &n in ns {
        match family {
            Family::Ex1 | Family::Ex2 | Family::Ex3 => {
                for k in 1..n {
                    for &a in a_values {
                        if family == Family::Ex3 && !(a > 0.0 && a < 1.0) {
                            continue;
                        }
                        out.push(FamilyParams::new(n).k(k).a(a));
                    }
                }
            }
            Family::Ex4 => {
                for p in 1..n {
                    for q in 1..n - p {
                        for &a in a_values {
                            if a > 1.0 {
                                out.push(FamilyParams::new(n).p(p).q(q).a(a));
                            }
                        }
                    }
                }
            }
            Family::Ex5 | Family::Ex6 => {
                for k in 2..n {
                    for p in 1..k {
                        for &a in a_values {
                            if family == Family::Ex6 && a >= 1.0 {
                                continue;
                            }
                            out.push(FamilyParams::new(n).k(k).p(p).a(a));
                        }
                    }
                }
            }
        }
    }
    out
}
