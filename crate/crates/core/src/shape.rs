//! Isometric layer: induced metric, timelike unit normal, second fundamental form.

use crate::ambient::inner_unchecked;
use crate::dsl::ChartImmersion;
use crate::error::{Error, Result};
use crate::jet::Jet4;
use crate::linalg::{solve_jets, sym_eigenvalues, JetMat, Mat};
use crate::scalar::Real;

/// Smallest admissible eigenvalue of `I`.
pub const SPACELIKE_EPS: f64 = 1e-12;
/// Components below this are skipped by the orientation rule.
pub const ORIENTATION_EPS: f64 = 1e-10;

/// Which of the two unit normals to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// First component of absolute value above 1e-10 is positive.
    #[default]
    Rule,
    /// The opposite of [`Orientation::Rule`].
    Flipped,
}

/// Pointwise isometric data. Tensors are in the `I`-orthonormal frame
/// `e_a = sum_i frame[(a, i)] d/du_i` unless marked `coord`.
#[derive(Debug, Clone)]
pub struct FundamentalForms<T> {
    pub point: Vec<T>,
    pub position: Vec<T>,
    pub i_coord: Mat<T>,
    pub frame: Mat<T>,
    pub normal: Vec<T>,
    pub ii_coord: Mat<T>,
    pub h_onb: Mat<T>,
    pub mean_curvature: T,
    /// Ascending.
    pub principal: Vec<T>,
    /// Flattened `Gamma^k_{ij}` of `I`, see [`FundamentalForms::christoffel`].
    pub christoffel: Vec<T>,
    pub norm2_ii: T,
}

impl<T: Real> FundamentalForms<T> {
    pub fn n(&self) -> usize {
        self.point.len()
    }

    /// `Gamma^k_{ij}`.
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> T {
        let n = self.n();
        self.christoffel[(k * n + i) * n + j]
    }
}

pub(crate) fn jet_inner<T: Real>(a: &[Jet4<T>], b: &[Jet4<T>], s: usize) -> Jet4<T> {
    let mut acc: Option<Jet4<T>> = None;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let p = x * y;
        acc = Some(match acc {
            None if i < s => -&p,
            None => p,
            Some(t) if i < s => &t - &p,
            Some(t) => &t + &p,
        });
    }
    acc.expect("nonempty vectors")
}

/// Christoffel symbols `Gamma^k_{ij}` (flattened `[k][i][j]`) of a metric
/// given as jets; the result is one order below the input.
pub(crate) fn christoffel_jets<T: Real>(g: &JetMat<T>, g_inv: &JetMat<T>) -> Vec<Jet4<T>> {
    let n = g.len();
    let dg: Vec<Vec<Vec<Jet4<T>>>> = (0..n)
        .map(|a| (0..n).map(|b| (0..n).map(|c| g[a][b].derivative(c)).collect()).collect())
        .collect();
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<Jet4<T>> = None;
                for l in 0..n {
                    let t = &(&dg[l][j][i] + &dg[l][i][j]) - &dg[i][j][l];
                    let t = &g_inv[k][l] * &t;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => &a + &t,
                    });
                }
                out.push(acc.unwrap().scale(T::lit(0.5)));
            }
        }
    }
    out
}

/// Jets of everything up to the second fundamental form at one point.
#[derive(Debug, Clone)]
pub(crate) struct SurfaceJets<T: Real> {
    pub n: usize,
    pub point: Vec<T>,
    pub x: Vec<Jet4<T>>,
    /// `I_ij`, order 3.
    pub i: JetMat<T>,
    /// Unit normal, order 3.
    pub e: Vec<Jet4<T>>,
    /// `II_ij`, order 2.
    pub ii: JetMat<T>,
}

pub(crate) fn values<T: Real>(m: &JetMat<T>) -> Mat<T> {
    Mat::from_fn(m.len(), |i, j| m[i][j].val())
}

fn point_f64<T: Real>(p: &[T]) -> Vec<f64> {
    p.iter().map(|v| v.to_f64_lossy()).collect()
}

/// Orientation sign so the normal follows `rule`, or agrees with `align`
/// (Euclidean dot product) when given.
fn orientation_sign<T: Real>(e: &[T], orientation: Orientation, align: Option<&[T]>) -> T {
    let rule = match align {
        Some(r) => {
            let dot = e.iter().zip(r).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            if dot < T::zero() {
                -T::one()
            } else {
                T::one()
            }
        }
        None => e
            .iter()
            .find(|v| v.abs() > T::lit(ORIENTATION_EPS))
            .map_or(T::one(), |v| v.signum()),
    };
    match orientation {
        Orientation::Rule => rule,
        Orientation::Flipped => -rule,
    }
}

pub(crate) fn surface_jets<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    orientation: Orientation,
    align: Option<&[T]>,
) -> Result<SurfaceJets<T>> {
    let n = chart.n();
    let s = chart.ambient.signature_index();
    let big_n = chart.embedding_dim();
    let x = chart.eval_jets(point)?;
    let xd: Vec<Vec<Jet4<T>>> = (0..n)
        .map(|i| x.iter().map(|c| c.derivative(i)).collect())
        .collect();
    let i_jets: JetMat<T> = (0..n)
        .map(|a| (0..n).map(|b| jet_inner(&xd[a], &xd[b], s)).collect())
        .collect();
    let i_val = values(&i_jets);
    let min_eig = sym_eigenvalues(&i_val)[0];
    if !(min_eig > T::lit(SPACELIKE_EPS)) {
        return Err(Error::NotSpacelike {
            point: point_f64(point),
            min_eigenvalue: min_eig.to_f64_lossy(),
        });
    }

    // constraint vectors: tangents, plus the position when curved
    let mut cons: Vec<Vec<Jet4<T>>> = xd.iter().map(|v| v.iter().map(|c| c.truncate(3)).collect()).collect();
    if chart.ambient.curvature() != 0 {
        cons.push(x.iter().map(|c| c.truncate(3)).collect());
    }
    let k = cons.len();
    let gram: JetMat<T> = (0..k)
        .map(|a| (0..k).map(|b| jet_inner(&cons[a], &cons[b], s)).collect())
        .collect();
    let tiny = T::lit(1e-12);
    let degenerate = |reason: &str| Error::DegenerateNormal {
        point: point_f64(point),
        reason: reason.to_string(),
    };
    let g_inv = values(&gram)
        .inverse(tiny)
        .ok_or_else(|| degenerate("tangent constraints are rank-deficient"))?;

    // pick the ambient basis vector with the most timelike projection
    let cons_val: Vec<Vec<T>> = cons.iter().map(|v| v.iter().map(Jet4::val).collect()).collect();
    let project = |w: &[T]| -> Vec<T> {
        let r: Vec<T> = cons_val.iter().map(|v| inner_unchecked(v, w, s)).collect();
        let y = g_inv.matvec(&r);
        let mut out = w.to_vec();
        for (v, &ya) in cons_val.iter().zip(&y) {
            for (o, &vi) in out.iter_mut().zip(v) {
                *o -= ya * vi;
            }
        }
        out
    };
    let mut best: Option<(usize, T)> = None;
    for a in 0..big_n {
        let mut w = vec![T::zero(); big_n];
        w[a] = T::one();
        let p = project(&w);
        let q = inner_unchecked(&p, &p, s);
        if best.map_or(true, |(_, b)| q < b) {
            best = Some((a, q));
        }
    }
    let (axis, q) = best.expect("embedding dimension is positive");
    if !(q < -T::lit(1e-10)) {
        return Err(degenerate("normal direction is not timelike"));
    }

    let m = point.len();
    let basis: Vec<Jet4<T>> = (0..big_n)
        .map(|a| Jet4::constant(m, if a == axis { T::one() } else { T::zero() }).truncate(3))
        .collect();
    let r: Vec<Jet4<T>> = cons.iter().map(|v| jet_inner(v, &basis, s)).collect();
    let y = solve_jets(&gram, &r, tiny).ok_or_else(|| degenerate("singular constraint system"))?;
    let mut e_raw = basis;
    for (v, ya) in cons.iter().zip(&y) {
        for (o, vi) in e_raw.iter_mut().zip(v) {
            let t = ya * vi;
            *o = &*o - &t;
        }
    }
    let norm2 = -jet_inner(&e_raw, &e_raw, s);
    let inv_len = norm2.powf(-0.5)?;
    let mut e: Vec<Jet4<T>> = e_raw.iter().map(|c| c * &inv_len).collect();
    let e_val: Vec<T> = e.iter().map(Jet4::val).collect();
    let sign = orientation_sign(&e_val, orientation, align);
    if sign < T::zero() {
        e = e.iter().map(|c| -c).collect();
    }

    let ii: JetMat<T> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let xab: Vec<Jet4<T>> = xd[a].iter().map(|c| c.derivative(b)).collect();
                    jet_inner(&xab, &e, s)
                })
                .collect()
        })
        .collect();

    Ok(SurfaceJets {
        n,

        point: point.to_vec(),
        x,
        i: i_jets,
        e,
        ii,
    })
}

impl<T: Real> SurfaceJets<T> {
    pub fn normal(&self) -> Vec<T> {
        self.e.iter().map(Jet4::val).collect()
    }

    /// Row `a` is the `a`-th `I`-orthonormal vector; Gram-Schmidt in coordinate order.
    pub fn frame(&self) -> Mat<T> {
        values(&self.i)
            .cholesky()
            .expect("positive definite after the spacelike check")
            .lower_inverse()
    }

    pub fn forms(&self) -> FundamentalForms<T> {
        let n = self.n;
        let i_coord = values(&self.i);
        let ii_coord = values(&self.ii);
        let frame = self.frame();
        let h_onb = ii_coord.congruence(&frame).symmetrized();
        let mean_curvature = h_onb.trace() / T::lit(n as f64);
        let principal = sym_eigenvalues(&h_onb);
        let norm2_ii = h_onb.norm2();
        let i_inv = i_coord.inverse(T::zero()).expect("positive definite");
        let i_inv_jets: JetMat<T> = (0..n)
            .map(|a| (0..n).map(|b| Jet4::constant(self.point.len(), i_inv[(a, b)])).collect())
            .collect();
        let christoffel = christoffel_jets(&self.i, &i_inv_jets)
            .iter()
            .map(Jet4::val)
            .collect();
        FundamentalForms {
            point: self.point.clone(),
            position: self.x.iter().map(Jet4::val).collect(),
            i_coord,
            frame,
            normal: self.normal(),
            ii_coord,
            h_onb,
            mean_curvature,
            principal,
            christoffel,
            norm2_ii,
        }
    }
}

/// `I_ij = <x_i, x_j>_s` in chart coordinates.
pub fn induced_metric<T: Real>(chart: &ChartImmersion, point: &[T]) -> Result<Mat<T>> {
    let n = chart.n();
    let s = chart.ambient.signature_index();
    let x = chart.eval_jets(point)?;
    let xd: Vec<Vec<Jet4<T>>> = (0..n)
        .map(|i| x.iter().map(|c| c.derivative(i).truncate(0)).collect())
        .collect();
    let i = Mat::from_fn(n, |a, b| jet_inner(&xd[a], &xd[b], s).val());
    let min_eig = sym_eigenvalues(&i)[0];
    if !(min_eig > T::lit(SPACELIKE_EPS)) {
        return Err(Error::NotSpacelike {
            point: point_f64(point),
            min_eigenvalue: min_eig.to_f64_lossy(),
        });
    }
    Ok(i)
}

/// Timelike unit normal, orthogonal to the tangent space and (for curved
/// ambients) to the position vector.
pub fn unit_normal<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    orientation: Orientation,
) -> Result<Vec<T>> {
    Ok(surface_jets(chart, point, orientation, None)?.normal())
}

/// Full isometric data at a point.
pub fn fundamental_forms<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    orientation: Orientation,
) -> Result<FundamentalForms<T>> {
    Ok(surface_jets(chart, point, orientation, None)?.forms())
}

/// Isometric data with the unit normal on the same side as `normal`:
/// `II_ij = <x_ij, e>_s`.
pub fn second_form<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    normal: &[T],
) -> Result<FundamentalForms<T>> {
    Ok(surface_jets(chart, point, Orientation::Rule, Some(normal))?.forms())
}
