//! Sampling-based isoparametric verdicts and family matching.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    ex1_oracle, ex2_oracle, ex3_oracle, ex4_oracle, Ex4Alpha, Family, FamilyParams, Oracle,
};
use crate::conformal::{invariants_at, ConformalData};
use crate::dsl::ChartImmersion;
use crate::error::{Error, Result};
use crate::linalg::{clusters, count_distinct, sym_eigen, sym_eigenvalues, Mat};
use crate::roots::scan_roots;
use crate::sampling::sample_points;

/// Absolute gap below which eigenvalues count as equal.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Largest residual accepted by a family fit.
pub const FIT_TOL: f64 = 1e-6;
/// Mixing weight used to tell the two normal orientations apart.
const ALIGN_MIX: f64 = 0.618;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub c_tol: f64,
    pub spread_tol: f64,
    pub identity_tol: f64,
    pub codazzi_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            c_tol: 1e-9,
            spread_tol: 1e-6,
            identity_tol: 1e-6,
            codazzi_tol: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c_tol", self.c_tol),
            ("spread_tol", self.spread_tol),
            ("identity_tol", self.identity_tol),
            ("codazzi_tol", self.codazzi_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Simultaneous eigenvalues of `B` and `A` on one common eigenspace, with
/// the `D` eigenvalue it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointBlock {
    pub d: f64,
    pub b: f64,
    pub a: f64,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub lambda: f64,
    /// Points that entered the statistics.
    pub samples: usize,
    pub dropped: usize,
    pub c_max: f64,
    pub b_spread: f64,
    pub d_spread: f64,
    pub a_spread: f64,
    pub r_b: usize,
    pub r_d: usize,
    pub para_blaschke_isoparametric: bool,
    pub conformal_isoparametric: bool,
    /// Slot means over the samples in the common orientation.
    pub eig_a: Vec<f64>,
    pub eig_b: Vec<f64>,
    pub eig_d: Vec<f64>,
    /// Joint eigen-blocks at the first sample.
    pub joint_blocks: Vec<JointBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_match: Option<Classification>,
}

/// Evaluated sample points, orientation-aligned.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<Vec<f64>>,
    pub data: Vec<ConformalData<f64>>,
    pub dropped: usize,
    pub total: usize,
}

fn mixed_eigs(d: &ConformalData<f64>) -> Vec<f64> {
    sym_eigenvalues(&d.a.add(&d.b.scale(ALIGN_MIX)))
}

fn slot_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Evaluates the invariants at `count` Halton points (lambda 0). Points with
/// a pointwise degeneracy are dropped; at least 75% must survive. Each
/// sample is flipped to the orientation closest to the first one, which
/// itself is put in canonical sign.
pub fn sample_invariants(chart: &ChartImmersion, count: usize, seed: u64) -> Result<SampleSet> {
    let points = sample_points(chart, count, seed)?;
    let evaluated: Vec<Result<ConformalData<f64>>> =
        points.par_iter().map(|p| invariants_at(chart, p, 0.0)).collect();
    let total = points.len();
    let mut kept_points = Vec::with_capacity(total);
    let mut data = Vec::with_capacity(total);
    let mut dropped = 0;
    for (p, r) in points.into_iter().zip(evaluated) {
        match r {
            Ok(d) => {
                kept_points.push(p);
                data.push(d);
            }
            Err(e) if e.is_pointwise_degeneracy() => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    if data.is_empty() || 4 * data.len() < 3 * total {
        return Err(Error::TooManyDegeneratePoints { dropped, total });
    }
    let reference = data[0].canonical(1e-9);
    let ref_mixed = mixed_eigs(&reference);
    let aligned = data
        .into_iter()
        .map(|d| {
            let f = d.flipped();
            let keep = slot_dist(&d.eig_b, &reference.eig_b).max(slot_dist(&mixed_eigs(&d), &ref_mixed));
            let flip = slot_dist(&f.eig_b, &reference.eig_b).max(slot_dist(&mixed_eigs(&f), &ref_mixed));
            if flip < keep {
                f
            } else {
                d
            }
        })
        .collect();
    Ok(SampleSet {
        points: kept_points,
        data: aligned,
        dropped,
        total,
    })
}

fn slot_spread(rows: &[Vec<f64>]) -> f64 {
    let n = rows[0].len();
    (0..n)
        .map(|s| {
            let (lo, hi) = rows
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[s]), hi.max(r[s])));
            hi - lo
        })
        .fold(0.0, f64::max)
}

fn slot_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows[0].len();
    let m = rows.len() as f64;
    (0..n).map(|s| rows.iter().map(|r| r[s]).sum::<f64>() / m).collect()
}

/// Joint `(D, B, A)` blocks: `D` eigenspaces split by the restriction of `B`.
pub fn joint_blocks(d: &ConformalData<f64>, lambda: f64) -> Vec<JointBlock> {
    let n = d.n();
    let dm = d.a.add(&d.b.scale(lambda));
    let eig = sym_eigen(&dm);
    let mut out = Vec::new();
    let mut start = 0;
    for (dval, mult) in clusters(&eig.values, CLUSTER_TOL) {
        let cols: Vec<usize> = (start..start + mult).collect();
        start += mult;
        let restrict = |m: &Mat<f64>| {
            Mat::from_fn(mult, |x, y| {
                let (cx, cy) = (cols[x], cols[y]);
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += eig.vectors[(i, cx)] * m[(i, j)] * eig.vectors[(j, cy)];
                    }
                }
                s
            })
        };
        let rb = restrict(&d.b);
        let bvals = sym_eigenvalues(&rb);
        for (bval, bm) in clusters(&bvals, CLUSTER_TOL) {
            out.push(JointBlock {
                d: dval,
                b: bval,
                a: dval - lambda * bval,
                mult: bm,
            });
        }
    }
    out
}

/// Verdict for one `lambda` from evaluated samples. `D^lambda` for one normal
/// is `D^{-lambda}` for the other, so the orientation with the smaller `D`
/// spread is used (the one with fewer distinct `D` eigenvalues when both
/// are constant).
pub fn verdict_from_samples(set: &SampleSet, lambda: f64, tol: &Tolerances) -> Verdict {
    let plus: Vec<Vec<f64>> = set.data.iter().map(|d| d.with_lambda(lambda).eig_d).collect();
    let minus: Vec<Vec<f64>> = set.data.iter().map(|d| d.with_lambda(-lambda).eig_d).collect();
    let (sp, sm) = (slot_spread(&plus), slot_spread(&minus));
    let flip = if sp < tol.spread_tol && sm < tol.spread_tol {
        count_distinct(&slot_mean(&minus), CLUSTER_TOL) < count_distinct(&slot_mean(&plus), CLUSTER_TOL)
    } else {
        sm < sp
    };
    let flipped: Vec<ConformalData<f64>>;
    let (data, ed) = if flip {
        flipped = set.data.iter().map(|d| d.flipped()).collect();
        (&flipped, minus)
    } else {
        (&set.data, plus)
    };
    let eb: Vec<Vec<f64>> = data.iter().map(|d| d.eig_b.clone()).collect();
    let ea: Vec<Vec<f64>> = data.iter().map(|d| d.eig_a.clone()).collect();
    let c_max = data.iter().map(|d| d.c_max()).fold(0.0, f64::max);
    let b_spread = slot_spread(&eb);
    let d_spread = sp.min(sm);
    let a_spread = slot_spread(&ea);
    let eig_b = slot_mean(&eb);
    let eig_d = slot_mean(&ed);
    Verdict {
        lambda,
        samples: data.len(),
        dropped: set.dropped,
        c_max,
        b_spread,
        d_spread,
        a_spread,
        r_b: count_distinct(&eig_b, CLUSTER_TOL),
        r_d: count_distinct(&eig_d, CLUSTER_TOL),
        para_blaschke_isoparametric: c_max < tol.c_tol && d_spread < tol.spread_tol,
        conformal_isoparametric: c_max < tol.c_tol && b_spread < tol.spread_tol,
        eig_a: slot_mean(&ea),
        eig_b,
        eig_d,
        joint_blocks: joint_blocks(&data[0], lambda),
        family_match: None,
    }
}

/// Sampled verdict for one `lambda`.
pub fn check(chart: &ChartImmersion, lambda: f64, count: usize, seed: u64, tol: &Tolerances) -> Result<Verdict> {
    let set = sample_invariants(chart, count, seed)?;
    Ok(verdict_from_samples(&set, lambda, tol))
}

/// Verdicts for several `lambda` values sharing one set of samples.
pub fn check_many(
    chart: &ChartImmersion,
    lambdas: &[f64],
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<Verdict>> {
    let set = sample_invariants(chart, count, seed)?;
    Ok(lambdas.par_iter().map(|&l| verdict_from_samples(&set, l, tol)).collect())
}

/// A matched classification case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMatch {
    /// Case number 1..=7 of the classification.
    pub case: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    /// Curvature of the ambient of the matched model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient_c: Option<i8>,
    pub params: FamilyParams,
    pub residual: f64,
    pub note: String,
    /// Other fits within tolerance.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<FamilyMatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Classification {
    Matched(FamilyMatch),
    Unclassified {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        best_residual: Option<f64>,
    },
}

impl Classification {
    pub fn matched(&self) -> Option<&FamilyMatch> {
        match self {
            Classification::Matched(m) => Some(m),
            Classification::Unclassified { .. } => None,
        }
    }
}

fn pairs(blocks: impl Iterator<Item = (f64, f64, usize)>) -> Vec<(f64, f64)> {
    blocks.flat_map(|(b, a, m)| std::iter::repeat((b, a)).take(m)).collect()
}

/// Greedy slot matching between observed joint blocks and an oracle.
fn match_residual(obs: &[(f64, f64)], oracle: &Oracle) -> f64 {
    let want = pairs(oracle.blocks.iter().map(|b| (b.b, b.a, b.mult)));
    if want.len() != obs.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; obs.len()];
    let mut worst = 0.0f64;
    for w in &want {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, o) in obs.iter().enumerate() {
            if !used[i] {
                let dist = (o.0 - w.0).abs().max((o.1 - w.1).abs());
                if dist < best.0 {
                    best = (dist, i);
                }
            }
        }
        if best.1 == usize::MAX {
            return f64::INFINITY;
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

fn either_orientation(obs: &[(f64, f64)], oracle: &Oracle) -> f64 {
    match_residual(obs, oracle).min(match_residual(obs, &oracle.flipped()))
}

struct Candidate {
    family: Family,
    params: FamilyParams,
    residual: f64,
    note: String,
}

fn keep_best(found: &mut Vec<Candidate>, c: Candidate) {
    if c.residual.is_finite() {
        found.push(c);
    }
}

fn fit_two_block(n: usize, obs: &[(f64, f64)]) -> Vec<Candidate> {
    let nf = n as f64;
    let mut best = Vec::new();
    for k in 1..n {
        let kf = k as f64;
        let nk = nf - kf;
        let f = (nf - 1.0) / (kf * nk) / (2.0 * nf * nf);
        keep_best(
            &mut best,
            Candidate {
                family: Family::Ex1,
                params: FamilyParams::new(n).k(k),
                residual: either_orientation(obs, &ex1_oracle(n, k)),
                note: "the radius of the hyperbolic factor is a conformal gauge and is not recovered".into(),
            },
        );
        let b1 = ex1_oracle(n, k).blocks[0].b;
        for sigma in [1.0, -1.0] {
            // A value on the block carrying the multiplicity-k B eigenvalue
            let Some(&(_, a1)) = obs
                .iter()
                .min_by(|x, y| (x.0 - sigma * b1).abs().total_cmp(&(y.0 - sigma * b1).abs()))
            else {
                continue;
            };
            let a2_ex2 = (a1 / f - nk * nk) / (nf * nf);
            if a2_ex2 > 0.0 {
                let a = a2_ex2.sqrt();
                keep_best(
                    &mut best,
                    Candidate {
                        family: Family::Ex2,
                        params: FamilyParams::new(n).k(k).a(a),
                        residual: either_orientation(obs, &ex2_oracle(n, k, a)),
                        note: String::new(),
                    },
                );
            }
            let a2_ex3 = (nk * nk - a1 / f) / (nf * nf);
            if a2_ex3 > 0.0 && a2_ex3 < 1.0 {
                let a = a2_ex3.sqrt();
                keep_best(
                    &mut best,
                    Candidate {
                        family: Family::Ex3,
                        params: FamilyParams::new(n).k(k).a(a),
                        residual: either_orientation(obs, &ex3_oracle(n, k, a)),
                        note: String::new(),
                    },
                );
            }
        }
    }
    best
}

fn fit_cone(n: usize, obs: &[(f64, f64)]) -> Vec<Candidate> {
    let mut distinct_b: Vec<f64> = obs.iter().map(|o| o.0).collect();
    distinct_b.sort_by(f64::total_cmp);
    let distinct_b: Vec<f64> = clusters(&distinct_b, CLUSTER_TOL).into_iter().map(|c| c.0).collect();
    // a = 1 + e^s keeps the scan inside the admissible range
    let a_of = |s: f64| 1.0 + s.exp();
    let mut best = Vec::new();
    for p in 1..n {
        for q in 1..n - p {
            let blocks = ex4_oracle(n, p, q, 2.0, Ex4Alpha::Corrected).blocks.len();
            for j in 0..blocks {
                for &v in &distinct_b {
                    for sigma in [1.0, -1.0] {
                        let g = |s: f64| sigma * ex4_oracle(n, p, q, a_of(s), Ex4Alpha::Corrected).blocks[j].b - v;
                        for s in scan_roots(g, -14.0, 6.0, 400, 1e-15) {
                            let a = a_of(s);
                            keep_best(
                                &mut best,
                                Candidate {
                                    family: Family::Ex4,
                                    params: FamilyParams::new(n).p(p).q(q).a(a),
                                    residual: either_orientation(obs, &ex4_oracle(n, p, q, a, Ex4Alpha::Corrected)),
                                    note: String::new(),
                                },
                            );
                        }
                    }
                }
            }
        }
    }
    best
}

fn fit_warped(n: usize, blocks: &[JointBlock], lambda_v: f64) -> Vec<Candidate> {
    let mut best = Vec::new();
    let mut blocks_b: Vec<(f64, f64, usize)> = Vec::new();
    for jb in blocks {
        blocks_b.push((jb.b, jb.a, jb.mult));
    }
    for (j, &(by, ay, my)) in blocks_b.iter().enumerate() {
        let lambda = -by;
        let inner: Vec<(f64, f64, usize)> = blocks_b
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &x)| x)
            .collect();
        if inner.len() != 2 {
            continue;
        }
        let k = n - my;
        let d_inner: Vec<f64> = inner.iter().map(|&(b, a, _)| a + lambda * b).collect();
        let d_y = ay + lambda * by;
        let d_k = 0.5 * (d_inner[0] + d_inner[1]);
        let (up, lo) = (d_k.max(d_y), d_k.min(d_y));
        if !(up - lo > CLUSTER_TOL) {
            continue;
        }
        let r = 1.0 / (up - lo).sqrt();
        let residual = (d_inner[0] - d_inner[1])
            .abs()
            .max((lambda * lambda + up + lo).abs())
            .max((lambda.abs() - lambda_v.abs()).abs());
        let de_sitter = d_k > d_y;
        // inner principal curvatures (up to the common orientation sign)
        let kap: Vec<(f64, usize)> = inner.iter().map(|&(b, _, m)| (b + lambda, m)).collect();
        let (p, a, shape_res) = if de_sitter {
            let (small, large) = if kap[0].0.abs() <= kap[1].0.abs() {
                (kap[0], kap[1])
            } else {
                (kap[1], kap[0])
            };
            let u = small.0.abs() * r;
            let a = u / (1.0 - u * u).sqrt();
            (small.1, a, (small.0 * large.0 * r * r - 1.0).abs())
        } else {
            let (pos, neg) = if kap[0].0 >= kap[1].0 { (kap[0], kap[1]) } else { (kap[1], kap[0]) };
            let w = pos.0.abs() * r;
            let a = w / (1.0 + w * w).sqrt();
            (pos.1, a, (pos.0 * neg.0 * r * r + 1.0).abs())
        };
        let family = if de_sitter { Family::Ex5 } else { Family::Ex6 };
        let note = if de_sitter {
            String::new()
        } else {
            "the two hyperbolic factors may be swapped: (p, a) ~ (k-p, sqrt(1-a^2))".into()
        };
        keep_best(
            &mut best,
            Candidate {
                family,
                params: FamilyParams::new(n).k(k).p(p).a(a).r(r).lambda(lambda),
                residual: residual.max(shape_res),
                note,
            },
        );
    }
    best
}

fn unclassified(reason: &str, best: Option<f64>) -> Classification {
    Classification::Unclassified {
        reason: reason.into(),
        best_residual: best,
    }
}

fn ambient_of(f: Family) -> i8 {
    match f {
        Family::Ex1 | Family::Ex4 => 0,
        Family::Ex2 | Family::Ex5 | Family::Ex6 => 1,
        Family::Ex3 => -1,
    }
}

fn to_match(c: Candidate, chart: &ChartImmersion) -> FamilyMatch {
    let ambient_c = ambient_of(c.family);
    let mut note = c.note;
    if ambient_c != chart.ambient.curvature() {
        if !note.is_empty() {
            note.push_str("; ");
        }
        note.push_str("model lives in a different space form than the chart (conformal equivalence)");
    }
    FamilyMatch {
        case: c.family.classification_case(),
        family: Some(c.family),
        ambient_c: Some(ambient_c),
        params: c.params,
        residual: c.residual,
        note,
        alternatives: Vec::new(),
    }
}

fn same_fit(x: &Candidate, y: &Candidate) -> bool {
    let close = |u: Option<f64>, v: Option<f64>| match (u, v) {
        (Some(u), Some(v)) => (u - v).abs() <= 1e-8,
        (None, None) => true,
        _ => false,
    };
    let (p, q) = (&x.params, &y.params);
    x.family == y.family && p.k == q.k && p.p == q.p && p.q == q.q && close(p.a, q.a) && close(p.r, q.r)
}

/// Best fit within [`FIT_TOL`]; a model in the chart's own space form wins
/// ties. Every other fit within tolerance is kept as an alternative, since
/// distinct families can describe conformally equivalent hypersurfaces.
fn finish(mut found: Vec<Candidate>, chart: &ChartImmersion) -> Classification {
    let best_residual = found.iter().map(|c| c.residual).fold(f64::INFINITY, f64::min);
    found.retain(|c| c.residual <= FIT_TOL);
    if found.is_empty() {
        return if best_residual.is_finite() {
            unclassified("no family fits within tolerance", Some(best_residual))
        } else {
            unclassified("no family candidate", None)
        };
    }
    let own = chart.ambient.curvature();
    found.sort_by(|x, y| {
        let kx = ambient_of(x.family) != own;
        let ky = ambient_of(y.family) != own;
        kx.cmp(&ky)
            .then(x.family.cmp(&y.family))
            .then(x.residual.total_cmp(&y.residual))
    });
    let mut distinct: Vec<Candidate> = Vec::new();
    for c in found {
        if !distinct.iter().any(|d| same_fit(d, &c)) {
            distinct.push(c);
        }
    }
    let mut it = distinct.into_iter();
    let mut primary = to_match(it.next().expect("nonempty"), chart);
    primary.alternatives = it.map(|c| to_match(c, chart)).collect();
    Classification::Matched(primary)
}

/// Matches a para-Blaschke isoparametric verdict against the seven cases.
pub fn classify(verdict: &Verdict, chart: &ChartImmersion) -> Classification {
    if !verdict.para_blaschke_isoparametric {
        return unclassified("not para-Blaschke isoparametric", None);
    }
    let n = chart.n();
    let obs: Vec<(f64, f64)> = pairs(verdict.joint_blocks.iter().map(|b| (b.b, b.a, b.mult)));
    match (verdict.r_d, verdict.r_b) {
        (1, _) => Classification::Matched(FamilyMatch {
            case: 1,
            family: None,
            ambient_c: None,
            params: FamilyParams::new(n),
            residual: 0.0,
            note: "single D eigenvalue: constant mean curvature and constant scalar curvature case by elimination; \
                   no representative is constructed"
                .into(),
            alternatives: Vec::new(),
        }),
        (2, 2) => finish(fit_two_block(n, &obs), chart),
        (2, rb) if rb >= 3 => finish(fit_warped(n, &verdict.joint_blocks, verdict.lambda), chart),
        (3, _) => finish(fit_cone(n, &obs), chart),
        _ => unclassified("eigenvalue pattern outside the classification", None),
    }
}

/// Runs the check and attaches the classification.
pub fn check_and_classify(
    chart: &ChartImmersion,
    lambda: f64,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let mut v = check(chart, lambda, count, seed, tol)?;
    v.family_match = Some(classify(&v, chart));
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Row {
    pub lambda: f64,
    pub r_d: usize,
    pub r_b: usize,
    pub b_spread: f64,
    pub d_spread: f64,
    pub para_blaschke_isoparametric: bool,
    pub conformal_isoparametric: bool,
    /// `holds`, `vacuous` (at most two D eigenvalues) or `violated`.
    pub implication: String,
    /// Fewer distinct D eigenvalues than elsewhere on the grid.
    pub collapse: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub rows: Vec<Theorem1Row>,
    pub holds: bool,
}

/// Para-Blaschke isoparametric with more than two distinct `D` eigenvalues
/// should force constant `B` eigenvalues; checked on each grid point.
pub fn theorem1_crosscheck(
    chart: &ChartImmersion,
    lambdas: &[f64],
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Theorem1Report> {
    let verdicts = check_many(chart, lambdas, count, seed, tol)?;
    let max_rd = verdicts.iter().map(|v| v.r_d).max().unwrap_or(0);
    let rows: Vec<Theorem1Row> = verdicts
        .iter()
        .map(|v| {
            let implication = if !(v.para_blaschke_isoparametric && v.r_d > 2) {
                "vacuous"
            } else if v.conformal_isoparametric {
                "holds"
            } else {
                "violated"
            };
            Theorem1Row {
                lambda: v.lambda,
                r_d: v.r_d,
                r_b: v.r_b,
                b_spread: v.b_spread,
                d_spread: v.d_spread,
                para_blaschke_isoparametric: v.para_blaschke_isoparametric,
                conformal_isoparametric: v.conformal_isoparametric,
                implication: implication.into(),
                collapse: v.r_d < max_rd,
            }
        })
        .collect();
    let holds = rows.iter().all(|r| r.implication != "violated");
    Ok(Theorem1Report { rows, holds })
}
