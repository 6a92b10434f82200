//! Numerical residuals of the integrability conditions satisfied by the
//! conformal invariants of every umbilic-free spacelike hypersurface.

use serde::Serialize;

use crate::conformal::{evaluate, ConformalData, Curvature};
use crate::dsl::ChartImmersion;
use crate::error::Result;
use crate::linalg::Mat;
use crate::scalar::Real;
use crate::shape::Orientation;

/// Step of the central differences used for `A_{ij,k}` and `C_{i,j}`.
pub const FD_STEP: f64 = 1e-4;

/// Absolute residuals; all vanish identically in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals<T> {
    /// `|sum_i B_ii|`.
    pub trace_b: T,
    /// `|sum_ij B_ij^2 - (n-1)/n|`.
    pub norm_b: T,
    /// `|tr A - (n^2 kappa - 1)/(2n)|`.
    pub trace_a: T,
    /// Gauss equation, max over all `R_{ijkl}`.
    pub gauss: T,
    /// Codazzi equation `B_{ij,k} - B_{ik,j} = delta_ij C_k - delta_ik C_j`.
    pub codazzi: T,
    /// `R_ij = tr(A) delta_ij + (n-2) A_ij + sum_k B_ik B_kj`.
    pub ricci: T,
    /// `(1-n) C_i = sum_j B_{ij,j}`.
    pub divergence: T,
    /// `A_{ij,k} - A_{ik,j} = B_ij C_k - B_ik C_j` (finite differences).
    pub blaschke_codazzi: T,
    /// `C_{i,j} - C_{j,i} = sum_k (B_ik A_kj - B_jk A_ki)` (finite differences).
    pub c_curl: T,
}

impl<T: Real> IdentityResiduals<T> {
    /// The identities computed from exact jet data.
    pub fn max_analytic(&self) -> T {
        [self.trace_b, self.norm_b, self.trace_a, self.gauss, self.ricci, self.divergence, self.codazzi]
            .into_iter()
            .fold(T::zero(), T::max)
    }

    pub fn max_finite_difference(&self) -> T {
        self.blaschke_codazzi.max(self.c_curl)
    }

    pub fn to_f64(&self) -> IdentityResiduals<f64> {
        IdentityResiduals {
            trace_b: self.trace_b.to_f64_lossy(),
            norm_b: self.norm_b.to_f64_lossy(),
            trace_a: self.trace_a.to_f64_lossy(),
            gauss: self.gauss.to_f64_lossy(),
            codazzi: self.codazzi.to_f64_lossy(),
            ricci: self.ricci.to_f64_lossy(),
            divergence: self.divergence.to_f64_lossy(),
            blaschke_codazzi: self.blaschke_codazzi.to_f64_lossy(),
            c_curl: self.c_curl.to_f64_lossy(),
        }
    }

    /// Component-wise maximum.
    pub fn max(&self, o: &Self) -> Self {
        Self {
            trace_b: self.trace_b.max(o.trace_b),
            norm_b: self.norm_b.max(o.norm_b),
            trace_a: self.trace_a.max(o.trace_a),
            gauss: self.gauss.max(o.gauss),
            codazzi: self.codazzi.max(o.codazzi),
            ricci: self.ricci.max(o.ricci),
            divergence: self.divergence.max(o.divergence),
            blaschke_codazzi: self.blaschke_codazzi.max(o.blaschke_codazzi),
            c_curl: self.c_curl.max(o.c_curl),
        }
    }

    pub fn zero() -> Self {
        let z = T::zero();
        Self {
            trace_b: z,
            norm_b: z,
            trace_a: z,
            gauss: z,
            codazzi: z,
            ricci: z,
            divergence: z,
            blaschke_codazzi: z,
            c_curl: z,
        }
    }
}

fn delta<T: Real>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

/// Coordinate components of `A` and `C` at a point.
fn coordinate_fields<T: Real>(d: &ConformalData<T>, cv: &Curvature<T>) -> (Mat<T>, Vec<T>) {
    let q = cv.frame_g.inverse(T::zero()).expect("invertible frame");
    let a = q.matmul(&d.a).matmul(&q.transpose());
    (a, q.matvec(&d.c_form))
}

/// Residuals of every identity at `point`. `data` supplies the orientation
/// (via its normal) so the signs of `B` and `C` are those of the caller.
pub fn identity_suite<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    data: &ConformalData<T>,
) -> Result<IdentityResiduals<T>> {
    identity_suite_with_step(chart, point, data, T::lit(FD_STEP))
}

pub fn identity_suite_with_step<T: Real>(
    chart: &ChartImmersion,
    point: &[T],
    data: &ConformalData<T>,
    step: T,
) -> Result<IdentityResiduals<T>> {
    let normal = data.forms.normal.clone();
    let (d, cv) = evaluate(chart, point, data.lambda, Orientation::Rule, Some(&normal))?;
    let n = d.n();
    let nf = T::lit(n as f64);
    let (a, b, c) = (&d.a, &d.b, &d.c_form);
    let f = &cv.frame_g;

    let trace_b = b.trace().abs();
    let norm_b = (b.norm2() - (nf - T::one()) / nf).abs();
    let trace_a = (a.trace() - (nf * nf * d.kappa - T::one()) / (T::lit(2.0) * nf)).abs();

    let mut gauss = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let want = b[(i, l)] * b[(j, k)] - b[(i, k)] * b[(j, l)]
                        + a[(i, k)] * delta::<T>(j, l)
                        + a[(j, l)] * delta::<T>(i, k)
                        - a[(i, l)] * delta::<T>(j, k)
                        - a[(j, k)] * delta::<T>(i, l);
                    gauss = gauss.max((cv.r(i, j, k, l) - want).abs());
                }
            }
        }
    }

    let b2 = b.matmul(b);
    let tr_a = a.trace();
    let mut ricci = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut r = T::zero();
            for k in 0..n {
                r += cv.r(k, i, k, j);
            }
            let want = tr_a * delta::<T>(i, j) + (nf - T::lit(2.0)) * a[(i, j)] + b2[(i, j)];
            ricci = ricci.max((r - want).abs());
        }
    }

    // nabla B from the jets of the coordinate tensor
    let cov = |field: &dyn Fn(usize, usize) -> T, dfield: &dyn Fn(usize, usize, usize) -> T| {
        let mut out = vec![T::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = dfield(i, j, k);
                    for l in 0..n {
                        v -= cv.gamma(l, k, i) * field(l, j) + cv.gamma(l, k, j) * field(i, l);
                    }
                    out[(i * n + j) * n + k] = v;
                }
            }
        }
        to_frame3(&out, f)
    };
    let b_val = |i: usize, j: usize| cv.b_coord[i][j].val();
    let b_d = |i: usize, j: usize, k: usize| cv.b_coord[i][j].d1(k);
    let nb = cov(&b_val, &b_d);
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut codazzi = T::zero();
    let mut divergence = T::zero();
    for i in 0..n {
        let mut div = T::zero();
        for j in 0..n {
            div += nb[idx(i, j, j)];
            for k in 0..n {
                let r = nb[idx(i, j, k)] - nb[idx(i, k, j)] - delta::<T>(i, j) * c[k]
                    + delta::<T>(i, k) * c[j];
                codazzi = codazzi.max(r.abs());
            }
        }
        divergence = divergence.max(((T::one() - nf) * c[i] - div).abs());
    }

    // nabla A and nabla C by central differences of the coordinate fields
    let mut da: Vec<Mat<T>> = Vec::with_capacity(n);
    let mut dc: Vec<Vec<T>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut fields = Vec::with_capacity(2);
        for sgn in [T::one(), -T::one()] {
            let mut p = point.to_vec();
            p[k] += sgn * step;
            let (dk, cvk) = evaluate(chart, &p, d.lambda, Orientation::Rule, Some(&normal))?;
            fields.push(coordinate_fields(&dk, &cvk));
        }
        let inv2h = T::one() / (T::lit(2.0) * step);
        da.push(fields[0].0.sub(&fields[1].0).scale(inv2h));
        dc.push(
            fields[0]
                .1
                .iter()
                .zip(&fields[1].1)
                .map(|(&p, &m)| (p - m) * inv2h)
                .collect(),
        );
    }
    let (a_coord, c_coord) = coordinate_fields(&d, &cv);
    let a_val = |i: usize, j: usize| a_coord[(i, j)];
    let a_d = |i: usize, j: usize, k: usize| da[k][(i, j)];
    let na = cov(&a_val, &a_d);
    let mut blaschke_codazzi = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = na[idx(i, j, k)] - na[idx(i, k, j)] - (b[(i, j)] * c[k] - b[(i, k)] * c[j]);
                blaschke_codazzi = blaschke_codazzi.max(r.abs());
            }
        }
    }
    // C_{i,j} = (nabla_{E_j} C)(E_i)
    let mut nc_coord = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut v = dc[j][i];
            for l in 0..n {
                v -= cv.gamma(l, j, i) * c_coord[l];
            }
            nc_coord[(i, j)] = v;
        }
    }
    let nc = nc_coord.congruence(f);
    let comm = b.matmul(a).sub(&a.matmul(b));
    let mut c_curl = T::zero();
    for i in 0..n {
        for j in 0..n {
            c_curl = c_curl.max((nc[(i, j)] - nc[(j, i)] - comm[(i, j)]).abs());
        }
    }

    Ok(IdentityResiduals {
        trace_b,
        norm_b,
        trace_a,
        gauss,
        codazzi,
        ricci,
        divergence,
        blaschke_codazzi,
        c_curl,
    })
}

/// `out_{abc} = f_ai f_bj f_ck t_{ijk}`.
fn to_frame3<T: Real>(t: &[T], f: &Mat<T>) -> Vec<T> {
    let n = f.dim();
    let mut out = vec![T::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        let fij = f[(a, i)] * f[(b, j)];
                        if fij == T::zero() {
                            continue;
                        }
                        for k in 0..n {
                            acc += fij * f[(c, k)] * t[(i * n + j) * n + k];
                        }
                    }
                }
                out[(a * n + b) * n + c] = acc;
            }
        }
    }
    out
}
