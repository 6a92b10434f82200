//! Conformal invariants: conformal factor, Blaschke tensor, conformal second
//! fundamental form, conformal 1-form, para-Blaschke tensor and the
//! curvature of the conformal metric `g = e^{2 tau} I`.

use serde::Serialize;

use crate::dsl::ChartImmersion;
use crate::error::{Error, Result};
use crate::jet::Jet4;
use crate::linalg::{invert_jets, sym_eigenvalues, JetMat, Mat};
use crate::scalar::Real;
use crate::shape::{christoffel_jets, surface_jets, values, FundamentalForms, Orientation, SurfaceJets};

/// `e^{2 tau}` at or below this marks an umbilic point.
pub const UMBILIC_EPS: f64 = 1e-12;

/// Pointwise conformal invariants. All tensors are components in the
/// `g`-orthonormal frame `E_a = e^{-tau} e_a`.
#[derive(Debug, Clone)]
pub struct ConformalData<T> {
    pub forms: FundamentalForms<T>,
    /// Ambient curvature.
    pub c: i8,
    pub e2tau: T,
    pub tau: T,
    /// `tau_i` in the `I`-orthonormal frame.
    pub grad_tau: Vec<T>,
    /// Covariant Hessian `tau_{i,j}` of `I`, `I`-orthonormal frame.
    pub hess_tau: Mat<T>,
    /// `H_i` in the `I`-orthonormal frame.
    pub grad_h: Vec<T>,
    pub a: Mat<T>,
    pub b: Mat<T>,
    pub c_form: Vec<T>,
    pub lambda: T,
    pub d: Mat<T>,
    /// Normalized scalar curvature of `g`.
    pub kappa: T,
    pub eig_a: Vec<T>,
    pub eig_b: Vec<T>,
    pub eig_d: Vec<T>,
}

impl<T: Real> ConformalData<T> {
    pub fn n(&self) -> usize {
        self.forms.n()
    }

    pub fn c_max(&self) -> T {
        self.c_form.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Same point with another `lambda`.
    pub fn with_lambda(&self, lambda: T) -> Self {
        let mut out = self.clone();
        out.lambda = lambda;
        out.d = self.a.add(&self.b.scale(lambda));
        out.eig_d = sym_eigenvalues(&out.d);
        out
    }

    /// The data for the opposite unit normal (same `lambda`).
    pub fn flipped(&self) -> Self {
        let mut out = self.clone();
        out.forms.normal = self.forms.normal.iter().map(|&v| -v).collect();
        out.forms.ii_coord = self.forms.ii_coord.scale(-T::one());
        out.forms.h_onb = self.forms.h_onb.scale(-T::one());
        out.forms.mean_curvature = -self.forms.mean_curvature;
        out.forms.principal = negate_sorted(&self.forms.principal);
        out.grad_h = self.grad_h.iter().map(|&v| -v).collect();
        out.b = self.b.scale(-T::one());
        out.c_form = self.c_form.iter().map(|&v| -v).collect();
        out.eig_b = negate_sorted(&self.eig_b);
        out.with_lambda(self.lambda)
    }

    /// `+1` if the `B` eigenvalue of largest magnitude is positive, else `-1`.
    /// Ties within `tol` count as positive.
    pub fn canonical_sign(&self, tol: T) -> T {
        let lo = self.eig_b.first().copied().unwrap_or(T::zero());
        let hi = self.eig_b.last().copied().unwrap_or(T::zero());
        if lo.abs() > hi.abs() + tol {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Flipped if needed so the `B` eigenvalue of largest magnitude is positive.
    pub fn canonical(&self, tol: T) -> Self {
        if self.canonical_sign(tol) < T::zero() {
            self.flipped()
        } else {
            self.clone()
        }
    }
}

pub(crate) fn negate_sorted<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().rev().map(|&x| -x).collect()
}

/// Derivative data of `tau`.
#[derive(Debug, Clone, Serialize)]
pub struct TauDerivatives<T> {
    pub tau: T,
    pub grad_tau: Vec<T>,
    /// Row-major `n x n`.
    pub hess_tau: Vec<T>,
}

/// `e^{2 tau} = n/(n-1) (|II|^2 - n H^2)`.
pub fn conformal_factor<T: Real>(ff: &FundamentalForms<T>) -> Result<T> {
    let n = T::lit(ff.n() as f64);
    let h = ff.mean_curvature;
    let e2tau = n / (n - T::one()) * (ff.norm2_ii - n * h * h);
    if !(e2tau > T::lit(UMBILIC_EPS)) {
        return Err(Error::UmbilicPoint {
            point: ff.point.iter().map(|v| v.to_f64_lossy()).collect(),
            e2tau: e2tau.to_f64_lossy(),
        });
    }
    Ok(e2tau)
}

/// Curvature and connection data of `g` at one point, kept for the identity suite.
#[derive(Debug, Clone)]
pub(crate) struct Curvature<T: Real> {
    /// `Gamma^k_{ij}` of `g`, flattened `[k][i][j]`.
    pub gamma_g: Vec<T>,
    /// `g`-orthonormal frame: row `a` is `E_a` in coordinates.
    pub frame_g: Mat<T>,
    /// `R_{abcd}` in the `g`-orthonormal frame, with `R_{abab}` the sectional curvature.
    pub riemann: Vec<T>,
    /// `B` as a coordinate tensor, jets of order 2.
    pub b_coord: JetMat<T>,
}

impl<T: Real> Curvature<T> {
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> T {
        let n = self.frame_g.dim();
        self.gamma_g[(k * n + i) * n + j]
    }

    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> T {
        let n = self.frame_g.dim();
        self.riemann[((a * n + b) * n + c) * n + d]
    }
}

fn sum_jets<T: Real>(terms: impl Iterator<Item = Jet4<T>>) -> Jet4<T> {
    terms.reduce(|a, b| &a + &b).expect("nonempty sum")
}

/// Contracts every index of a flattened rank-4 tensor with `f`:
/// `out_{abcd} = f_ai f_bj f_ck f_dl t_{ijkl}`.
fn transform4<T: Real>(t: &[T], f: &Mat<T>) -> Vec<T> {
    let n = f.dim();
    let mut cur = t.to_vec();
    for slot in 0..4 {
        let stride = n.pow(3 - slot as u32);
        let mut next = vec![T::zero(); cur.len()];
        for (idx, out) in next.iter_mut().enumerate() {
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            let mut acc = T::zero();
            for i in 0..n {
                acc += f[(a, i)] * cur[base + i * stride];
            }
            *out = acc;
        }
        cur = next;
    }
    cur
}

pub(crate) fn evaluate<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    lambda: T,
    orientation: Orientation,
    align: Option<&[T]>,
) -> Result<(ConformalData<T>, Curvature<T>)> {
    let sj = surface_jets(chart, point, orientation, align)?;
    from_surface(&sj, chart.ambient.curvature(), lambda)
}

pub(crate) fn from_surface<T: Real>(
    sj: &SurfaceJets<T>,
    c: i8,
    lambda: T,
) -> Result<(ConformalData<T>, Curvature<T>)> {
    let n = sj.n;
    let nf = T::lit(n as f64);
    let forms = sj.forms();
    let tiny = T::zero();
    let i_inv = invert_jets(&sj.i, tiny).expect("positive definite metric");

    // shape operator S = I^{-1} II
    let s_op: JetMat<T> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| sum_jets((0..n).map(|k| &i_inv[i][k] * &sj.ii[k][j])))
                .collect()
        })
        .collect();
    let tr_s = sum_jets((0..n).map(|i| s_op[i][i].clone()));
    let tr_s2 = sum_jets((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| &s_op[i][j] * &s_op[j][i]));
    let h_jet = tr_s.scale(T::one() / nf);
    let h2 = &h_jet * &h_jet;
    let e2tau_jet = (&tr_s2 - &h2.scale(nf)).scale(nf / (nf - T::one()));
    let e2tau = e2tau_jet.val();
    if !(e2tau > T::lit(UMBILIC_EPS)) {
        return Err(Error::UmbilicPoint {
            point: sj.point.iter().map(|v| v.to_f64_lossy()).collect(),
            e2tau: e2tau.to_f64_lossy(),
        });
    }
    let tau_jet = e2tau_jet.ln()?.scale(T::lit(0.5));
    let tau = tau_jet.val();

    let p = &forms.frame;
    let dtau = tau_jet.gradient();
    let hess_coord = Mat::from_fn(n, |i, j| {
        let mut v = tau_jet.d2(i, j);
        for k in 0..n {
            v -= forms.christoffel(k, i, j) * dtau[k];
        }
        v
    });
    let grad_tau = p.matvec(&dtau);
    let hess_tau = hess_coord.congruence(p).symmetrized();
    let grad_h = p.matvec(&h_jet.gradient());
    let h = forms.mean_curvature;
    let hm = &forms.h_onb;

    let e_m2 = T::one() / e2tau;
    let e_m1 = e_m2.sqrt();
    let grad2 = grad_tau.iter().fold(T::zero(), |a, &v| a + v * v);
    let half = T::lit(0.5);
    let cf = T::lit(c as f64);
    let a = Mat::from_fn(n, |i, j| {
        let mut v = grad_tau[i] * grad_tau[j] - hess_tau[(i, j)] - hm[(i, j)] * h;
        if i == j {
            v += half * (-grad2 + h * h + cf);
        }
        e_m2 * v
    })
    .symmetrized();
    let b = Mat::from_fn(n, |i, j| {
        let d = if i == j { h } else { T::zero() };
        e_m1 * (hm[(i, j)] - d)
    })
    .symmetrized();
    let c_form: Vec<T> = (0..n)
        .map(|i| {
            let mut v = h * grad_tau[i] - grad_h[i];
            for j in 0..n {
                v -= hm[(i, j)] * grad_tau[j];
            }
            e_m2 * v
        })
        .collect();
    let d = a.add(&b.scale(lambda));

    // curvature of g = e^{2 tau} I
    let g: JetMat<T> = (0..n)
        .map(|i| (0..n).map(|j| &e2tau_jet * &sj.i[i][j]).collect())
        .collect();
    let g_inv = invert_jets(&g, tiny).expect("positive definite metric");
    let gamma = christoffel_jets(&g, &g_inv);
    let gi = |k: usize, i: usize, j: usize| &gamma[(k * n + i) * n + j];
    let g_val = values(&g);
    let mut rm = vec![T::zero(); n * n * n * n];
    // R^e_{dab} = d_a G^e_{bd} - d_b G^e_{ad} + G^e_{af} G^f_{bd} - G^e_{bf} G^f_{ad}
    let mut r_up = vec![T::zero(); n * n * n * n];
    for e in 0..n {
        for dd in 0..n {
            for aa in 0..n {
                for bb in 0..n {
                    let mut v = gi(e, bb, dd).d1(aa) - gi(e, aa, dd).d1(bb);
                    for f in 0..n {
                        v += gi(e, aa, f).val() * gi(f, bb, dd).val()
                            - gi(e, bb, f).val() * gi(f, aa, dd).val();
                    }
                    r_up[((e * n + dd) * n + aa) * n + bb] = v;
                }
            }
        }
    }
    // R_{abcd} = g_{ce} R^e_{dab}
    for aa in 0..n {
        for bb in 0..n {
            for cc in 0..n {
                for dd in 0..n {
                    let mut v = T::zero();
                    for e in 0..n {
                        v += g_val[(cc, e)] * r_up[((e * n + dd) * n + aa) * n + bb];
                    }
                    rm[((aa * n + bb) * n + cc) * n + dd] = v;
                }
            }
        }
    }
    let frame_g = p.scale(e_m1);
    let riemann = transform4(&rm, &frame_g);
    let mut scal = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                scal += riemann[((i * n + j) * n + i) * n + j];
            }
        }
    }
    let kappa = scal / (nf * (nf - T::one()));

    let e_tau = e2tau_jet.sqrt()?;
    let b_coord: JetMat<T> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let t = &h_jet * &sj.i[i][j];
                    &e_tau * &(&sj.ii[i][j] - &t)
                })
                .collect()
        })
        .collect();

    let data = ConformalData {
        c,
        e2tau,
        tau,
        grad_tau,
        hess_tau,
        grad_h,
        eig_a: sym_eigenvalues(&a),
        eig_b: sym_eigenvalues(&b),
        eig_d: sym_eigenvalues(&d),
        a,
        b,
        c_form,
        lambda,
        d,
        kappa,
        forms,
    };
    let curvature = Curvature {
        gamma_g: gamma.iter().map(Jet4::val).collect(),
        frame_g,
        riemann,
        b_coord,
    };
    Ok((data, curvature))
}

/// `tau`, its gradient and covariant Hessian in the `I`-orthonormal frame.
pub fn tau_derivatives<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    ff: &FundamentalForms<T>,
) -> Result<TauDerivatives<T>> {
    let (d, _) = evaluate(chart, point, T::zero(), Orientation::Rule, Some(&ff.normal))?;
    let n = d.n();
    Ok(TauDerivatives {
        tau: d.tau,
        grad_tau: d.grad_tau,
        hess_tau: (0..n * n).map(|k| d.hess_tau[(k / n, k % n)]).collect(),
    })
}

/// Conformal invariants at `point` with the unit normal chosen by the orientation rule.
pub fn invariants_at<T: Real>(chart: &ChartImmersion, point: &[T], lambda: T) -> Result<ConformalData<T>> {
    invariants_oriented(chart, point, lambda, Orientation::Rule)
}

pub fn invariants_oriented<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    lambda: T,
    orientation: Orientation,
) -> Result<ConformalData<T>> {
    Ok(evaluate(chart, point, lambda, orientation, None)?.0)
}
