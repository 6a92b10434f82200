//! Numerical check that the invariants do not change under conformal maps
//! of the flat ambient (dilations, Lorentz rotations, translations).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{invariants_at, ConformalData};
use crate::dsl::{BinOp, ChartImmersion, Expr, Func};
use crate::error::{Error, Result};
use crate::sampling::sample_points;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProbeTransform {
    Identity,
    Dilation { rho: f64 },
    /// Rotation in the coordinate plane `(i, j)`; a boost when exactly one
    /// of the two axes is timelike.
    LorentzRotation { i: usize, j: usize, angle: f64 },
    Translation { b: Vec<f64> },
}

impl ProbeTransform {
    /// `(rho O, b)` with `x -> rho O x + b`.
    fn affine(&self, dim: usize, s: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let mut m: Vec<Vec<f64>> = (0..dim).map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let mut b = vec![0.0; dim];
        match self {
            ProbeTransform::Identity => {}
            ProbeTransform::Dilation { rho } => {
                if !(rho.is_finite() && *rho > 0.0) {
                    return Err(Error::Config("dilation factor must be positive".into()));
                }
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = *rho;
                }
            }
            ProbeTransform::LorentzRotation { i, j, angle } => {
                let (i, j) = (*i, *j);
                if i >= dim || j >= dim || i == j {
                    return Err(Error::Config(format!("rotation plane ({i}, {j}) invalid for dimension {dim}")));
                }
                if (i < s) != (j < s) {
                    let (c, sh) = (angle.cosh(), angle.sinh());
                    m[i][i] = c;
                    m[i][j] = sh;
                    m[j][i] = sh;
                    m[j][j] = c;
                } else {
                    let (c, sn) = (angle.cos(), angle.sin());
                    m[i][i] = c;
                    m[i][j] = -sn;
                    m[j][i] = sn;
                    m[j][j] = c;
                }
            }
            ProbeTransform::Translation { b: t } => {
                if t.len() != dim {
                    return Err(Error::LengthMismatch {
                        left: t.len(),
                        right: dim,
                    });
                }
                b.clone_from(t);
            }
        }
        Ok((m, b))
    }
}

fn constant(v: f64) -> Expr {
    if v < 0.0 {
        Expr::Unary(Func::Neg, Box::new(Expr::Const(-v)))
    } else {
        Expr::Const(v)
    }
}

fn add(acc: Option<Expr>, term: Expr) -> Expr {
    match acc {
        None => term,
        Some(a) => Expr::Binary(BinOp::Add, Box::new(a), Box::new(term)),
    }
}

/// The chart `rho O x + b`. Only flat ambients admit these maps.
pub fn transform_chart(chart: &ChartImmersion, t: &ProbeTransform) -> Result<ChartImmersion> {
    if chart.ambient.curvature() != 0 {
        return Err(Error::Config("invariance probe needs a flat ambient".into()));
    }
    let dim = chart.embedding_dim();
    let (m, b) = t.affine(dim, chart.ambient.signature_index())?;
    let mut out = chart.clone();
    out.components = (0..dim)
        .map(|i| {
            let mut acc = None;
            for (j, comp) in chart.components.iter().enumerate() {
                let w = m[i][j];
                if w == 0.0 {
                    continue;
                }
                let term = if w == 1.0 {
                    comp.clone()
                } else {
                    Expr::Binary(BinOp::Mul, Box::new(constant(w)), Box::new(comp.clone()))
                };
                acc = Some(add(acc, term));
            }
            if b[i] != 0.0 {
                acc = Some(add(acc, constant(b[i])));
            }
            acc.unwrap_or(Expr::Const(0.0))
        })
        .collect();
    Ok(out)
}

fn slot_drift(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Largest eigenvalue drift between two evaluations of the same point,
/// minimized over the relative normal orientation for `B` and `D`.
pub fn drift(x: &ConformalData<f64>, y: &ConformalData<f64>) -> f64 {
    let da = slot_drift(&x.eig_a, &y.eig_a);
    let same = slot_drift(&x.eig_b, &y.eig_b).max(slot_drift(&x.eig_d, &y.eig_d));
    let yf = y.flipped();
    let opposite = slot_drift(&x.eig_b, &yf.eig_b).max(slot_drift(&x.eig_d, &yf.eig_d));
    da.max(same.min(opposite))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub transform: ProbeTransform,
    pub lambda: f64,
    pub samples: usize,
    pub max_drift: f64,
}

/// Max drift over `count` sample points of `eig_A`, `eig_B` and `eig_D`.
pub fn invariance_probe(
    chart: &ChartImmersion,
    transform: &ProbeTransform,
    lambda: f64,
    count: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let moved = transform_chart(chart, transform)?;
    let points = sample_points(chart, count, seed)?;
    let drifts: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let a = invariants_at(chart, p, lambda)?;
            let b = invariants_at(&moved, p, lambda)?;
            Ok(drift(&a, &b))
        })
        .collect::<Result<_>>()?;
    Ok(ProbeReport {
        transform: transform.clone(),
        lambda,
        samples: points.len(),
        max_drift: drifts.into_iter().fold(0.0, f64::max),
    })
}
