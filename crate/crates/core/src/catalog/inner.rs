//! Product hypersurfaces realizing the inner hypersurfaces of the two
//! warped families: `S^p(c1) x H^{k-p}(c2)` in `S^{k+1}_1(r)` and
//! `H^p(c1) x H^{k-p}(c2)` in `H^{k+1}_1(-r)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::newton2;

/// Ambient of the inner hypersurface `y_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "r")]
pub enum InnerAmbient {
    /// `S^{k+1}_1(r)`, radius constraint `c1^2 - c2^2 = r^2`.
    DeSitter(f64),
    /// `H^{k+1}_1(-r)`, radius constraint `c1^2 + c2^2 = r^2`.
    AntiDeSitter(f64),
}

impl InnerAmbient {
    pub fn radius(self) -> f64 {
        match self {
            InnerAmbient::DeSitter(r) | InnerAmbient::AntiDeSitter(r) => r,
        }
    }

    fn sign(self) -> f64 {
        match self {
            InnerAmbient::DeSitter(_) => 1.0,
            InnerAmbient::AntiDeSitter(_) => -1.0,
        }
    }
}

/// Targets for the inner hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerHypersurfaceSpec {
    pub k: usize,
    pub target_h1: f64,
    pub target_r1: f64,
}

impl InnerHypersurfaceSpec {
    /// Targets of the de Sitter family for `(n, k, r, lambda)`.
    pub fn de_sitter(n: usize, k: usize, r: f64, lambda: f64) -> Self {
        let (nf, kf) = (n as f64, k as f64);
        Self {
            k,
            target_h1: nf / kf * lambda,
            target_r1: (nf * kf * (kf - 1.0) + (nf - 1.0) * r * r) / (nf * r * r)
                - nf * (nf - 1.0) * lambda * lambda,
        }
    }

    /// Targets of the anti-de Sitter family for `(n, k, r, lambda)`.
    pub fn anti_de_sitter(n: usize, k: usize, r: f64, lambda: f64) -> Self {
        let (nf, kf) = (n as f64, k as f64);
        Self {
            k,
            target_h1: nf / kf * lambda,
            target_r1: (-nf * kf * (kf - 1.0) + (nf - 1.0) * r * r) / (nf * r * r)
                - nf * (nf - 1.0) * lambda * lambda,
        }
    }
}

/// A product realization with its recomputed mean and scalar curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Realization {
    pub p: usize,
    pub c1: f64,
    pub c2: f64,
    /// Principal curvatures: `kappa1` with multiplicity `p`, `kappa2` with `k - p`.
    pub kappa1: f64,
    pub kappa2: f64,
    pub h1: f64,
    pub r1: f64,
}

/// Principal curvatures, mean curvature and scalar curvature of the product.
pub fn product_curvatures(ambient: InnerAmbient, k: usize, p: usize, c1: f64, c2: f64) -> Realization {
    let r = ambient.radius();
    let sg = ambient.sign();
    let kappa1 = c2 / (r * c1);
    let kappa2 = sg * c1 / (r * c2);
    let (kf, pf) = (k as f64, p as f64);
    let h1 = (pf * kappa1 + (kf - pf) * kappa2) / kf;
    let norm2 = pf * kappa1 * kappa1 + (kf - pf) * kappa2 * kappa2;
    // Gauss equation for a spacelike hypersurface in a Lorentzian space form
    let r1 = sg * kf * (kf - 1.0) / (r * r) - kf * kf * h1 * h1 + norm2;
    Realization {
        p,
        c1,
        c2,
        kappa1,
        kappa2,
        h1,
        r1,
    }
}

fn constraint(ambient: InnerAmbient, c1: f64, c2: f64) -> f64 {
    let r = ambient.radius();
    c1 * c1 - ambient.sign() * c2 * c2 - r * r
}

/// Radii on the constraint curve for the curve parameter `phi`.
fn on_curve(ambient: InnerAmbient, phi: f64) -> (f64, f64) {
    let r = ambient.radius();
    match ambient {
        InnerAmbient::DeSitter(_) => (r * phi.cosh(), r * phi.sinh()),
        InnerAmbient::AntiDeSitter(_) => (r * phi.cos(), r * phi.sin()),
    }
}

fn curve_grid(ambient: InnerAmbient) -> Vec<f64> {
    let (lo, hi) = match ambient {
        InnerAmbient::DeSitter(_) => (1e-3, 5.0),
        InnerAmbient::AntiDeSitter(_) => (1e-3, std::f64::consts::FRAC_PI_2 - 1e-3),
    };
    (0..=800).map(|i| lo + (hi - lo) * i as f64 / 800.0).collect()
}

/// Best combined residual `max(|H - H1|, |R - R1|)` per split `p`, over a
/// grid on the radius constraint and both normal orientations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandscapeRow {
    pub p: usize,
    pub best_residual: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn residual_landscape(spec: &InnerHypersurfaceSpec, ambient: InnerAmbient) -> Vec<LandscapeRow> {
    (1..spec.k)
        .map(|p| {
            let mut best = LandscapeRow {
                p,
                best_residual: f64::INFINITY,
                c1: f64::NAN,
                c2: f64::NAN,
            };
            for phi in curve_grid(ambient) {
                let (c1, c2) = on_curve(ambient, phi);
                let re = product_curvatures(ambient, spec.k, p, c1, c2);
                for s in [1.0, -1.0] {
                    let res = (s * re.h1 - spec.target_h1).abs().max((re.r1 - spec.target_r1).abs());
                    if res < best.best_residual {
                        best = LandscapeRow {
                            p,
                            best_residual: res,
                            c1,
                            c2,
                        };
                    }
                }
            }
            best
        })
        .collect()
}

/// Tolerance on the recomputed `H` and `R`.
pub const REALIZATION_TOL: f64 = 1e-9;

/// Finds `(p, c1, c2)` whose product hits both targets, by damped Newton on
/// `{radius constraint, H - H1}` from every sign change of `H - H1` along
/// the constraint curve, then checking `R`.
pub fn solve_inner_hypersurface(spec: &InnerHypersurfaceSpec, ambient: InnerAmbient) -> Result<Realization> {
    if spec.k < 2 {
        return Err(Error::ConstraintViolation {
            param: "k".into(),
            bound: ">= 2".into(),
        });
    }
    let r = ambient.radius();
    if !(r > 0.0) {
        return Err(Error::ConstraintViolation {
            param: "r".into(),
            bound: "> 0".into(),
        });
    }
    let grid = curve_grid(ambient);
    let mut best = f64::INFINITY;
    for p in 1..spec.k {
        for s in [1.0, -1.0] {
            let g = |c1: f64, c2: f64| s * product_curvatures(ambient, spec.k, p, c1, c2).h1 - spec.target_h1;
            let mut starts = Vec::new();
            for w in grid.windows(2) {
                let (a1, a2) = on_curve(ambient, w[0]);
                let (b1, b2) = on_curve(ambient, w[1]);
                let (ga, gb) = (g(a1, a2), g(b1, b2));
                if ga == 0.0 || ga.signum() != gb.signum() {
                    starts.push(on_curve(ambient, 0.5 * (w[0] + w[1])));
                }
            }
            for (c1, c2) in starts {
                let sol = newton2(
                    |[c1, c2]| [constraint(ambient, c1, c2) / (r * r), g(c1, c2)],
                    [c1, c2],
                    1e-14,
                    100,
                );
                let [c1, c2] = sol.x;
                if !(c1 > 0.0 && c2 > 0.0) {
                    continue;
                }
                let re = product_curvatures(ambient, spec.k, p, c1, c2);
                let res = (s * re.h1 - spec.target_h1)
                    .abs()
                    .max((re.r1 - spec.target_r1).abs())
                    .max(constraint(ambient, c1, c2).abs());
                best = best.min(res);
                let umbilic_free = (re.kappa1 - re.kappa2).abs() > 1e-9;
                if res <= REALIZATION_TOL && umbilic_free {
                    return Ok(re);
                }
            }
        }
    }
    let landscape = residual_landscape(spec, ambient);
    let grid_best = landscape.iter().map(|l| l.best_residual).fold(f64::INFINITY, f64::min);
    Err(Error::NoRealization {
        best_residual: best.min(grid_best),
    })
}

/// A compatible `(r, lambda)` and radii for a product with split `p` and
/// shape `a = c2 / r` (`a > 0` de Sitter, `0 < a < 1` anti-de Sitter).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Compatible {
    pub r: f64,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Solves the compatibility condition `|h|^2 - k^2 H^2 / n = (n-1)/n` for `r`
/// (the condition is homogeneous of degree -2 in `r`), then `lambda = k H / n`.
pub fn realizable(de_sitter: bool, n: usize, k: usize, p: usize, a: f64) -> Compatible {
    let (nf, kf) = (n as f64, k as f64);
    let unit = if de_sitter {
        InnerAmbient::DeSitter(1.0)
    } else {
        InnerAmbient::AntiDeSitter(1.0)
    };
    let (c1u, c2u) = if de_sitter {
        ((1.0 + a * a).sqrt(), a)
    } else {
        ((1.0 - a * a).sqrt(), a)
    };
    let re = product_curvatures(unit, k, p, c1u, c2u);
    let norm2 = re.p as f64 * re.kappa1 * re.kappa1 + (kf - re.p as f64) * re.kappa2 * re.kappa2;
    let f = norm2 - kf * kf * re.h1 * re.h1 / nf;
    let r = (f * nf / (nf - 1.0)).sqrt();
    Compatible {
        r,
        lambda: kf * re.h1 / (nf * r),
        c1: c1u * r,
        c2: c2u * r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realized_instances_hit_targets() {
        for (ds, a) in [(true, 0.7), (true, 2.0), (false, 0.4), (false, 0.8)] {
            let c = realizable(ds, 4, 3, 1, a);
            let (spec, amb) = if ds {
                (InnerHypersurfaceSpec::de_sitter(4, 3, c.r, c.lambda), InnerAmbient::DeSitter(c.r))
            } else {
                (InnerHypersurfaceSpec::anti_de_sitter(4, 3, c.r, c.lambda), InnerAmbient::AntiDeSitter(c.r))
            };
            let direct = product_curvatures(amb, 3, 1, c.c1, c.c2);
            assert!((direct.h1 - spec.target_h1).abs() < 1e-12);
            assert!((direct.r1 - spec.target_r1).abs() < 1e-12);
            let sol = solve_inner_hypersurface(&spec, amb).unwrap();
            assert!((sol.h1.abs() - spec.target_h1.abs()).abs() < 1e-9);
            assert!((sol.r1 - spec.target_r1).abs() < 1e-9);
        }
    }

    #[test]
    fn minimal_target_has_no_product_in_de_sitter() {
        let spec = InnerHypersurfaceSpec::de_sitter(4, 3, 1.0, 0.0);
        assert_eq!(spec.target_h1, 0.0);
        assert!((spec.target_r1 - 27.0 / 4.0).abs() < 1e-15);
        match solve_inner_hypersurface(&spec, InnerAmbient::DeSitter(1.0)) {
            Err(Error::NoRealization { best_residual }) => assert!(best_residual > 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn huge_scalar_curvature_is_infeasible() {
        let spec = InnerHypersurfaceSpec {
            k: 3,
            target_h1: 0.2,
            target_r1: 1e9,
        };
        assert!(matches!(
            solve_inner_hypersurface(&spec, InnerAmbient::AntiDeSitter(1.0)),
            Err(Error::NoRealization { .. })
        ));
    }
}
