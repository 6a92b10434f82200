//! Scalar and planar root finding.

/// Root of `f` in a sign-changing bracket `[lo, hi]`: Illinois false
/// position with a bisection step whenever it stalls.
pub fn solve_bracketed(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0i8;
    for it in 0..200 {
        let mut x = (a * fb - b * fa) / (fb - fa);
        // every fourth step, or when interpolation leaves the bracket, bisect
        if it % 4 == 3 || !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if !fx.is_finite() {
            return None;
        }
        if fx == 0.0 || (b - a).abs() < xtol {
            return Some(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        if (b - a).abs() < xtol {
            return Some(0.5 * (a + b));
        }
    }
    Some(0.5 * (a + b))
}

/// All roots found by scanning `samples` subintervals of `[lo, hi]` for sign
/// changes and refining each bracket.
pub fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize, xtol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=samples {
        let x1 = if i == samples { hi } else { lo + step * i as f64 };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() {
            if f0 == 0.0 {
                out.push(x0);
            } else if f0.signum() != f1.signum() && f1 != 0.0 {
                if let Some(r) = solve_bracketed(&f, x0, x1, xtol) {
                    out.push(r);
                }
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push(x0);
    }
    out
}

/// Result of [`newton2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Newton2 {
    pub x: [f64; 2],
    /// `max |F_i|` at `x`.
    pub residual: f64,
    pub iterations: usize,
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

/// Damped Newton iteration for `F(x) = 0` in the plane with a central
/// difference Jacobian. Steps are halved until the residual decreases.
pub fn newton2(f: impl Fn([f64; 2]) -> [f64; 2], x0: [f64; 2], tol: f64, max_iter: usize) -> Newton2 {
    let mut x = x0;
    let mut fx = f(x);
    let mut it = 0;
    while it < max_iter && norm(fx).is_finite() && norm(fx) > tol {
        it += 1;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * x[j].abs().max(1.0);
            let (mut xp, mut xm) = (x, x);
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (f(xp), f(xm));
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = [
            (jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
            (-jac[1][0] * fx[0] + jac[0][0] * fx[1]) / det,
        ];
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let cand = [x[0] - t * dx[0], x[1] - t * dx[1]];
            let fc = f(cand);
            if norm(fc).is_finite() && norm(fc) < norm(fx) {
                x = cand;
                fx = fc;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Newton2 {
        x,
        residual: norm(fx),
        iterations: it,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracketed_cubic() {
        let r = solve_bracketed(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
        assert!(solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn scan_finds_all_roots() {
        let roots = scan_roots(|x| (x - 0.3) * (x - 1.7) * (x + 2.2), -3.0, 3.0, 60, 1e-13);
        assert_eq!(roots.len(), 3);
        for (r, w) in roots.iter().zip([-2.2, 0.3, 1.7]) {
            assert!((r - w).abs() < 1e-10);
        }
    }

    #[test]
    fn planar_newton() {
        // circle of radius 2 meets the line y = x/2
        let res = newton2(|[x, y]| [x * x + y * y - 4.0, y - 0.5 * x], [1.0, 1.0], 1e-14, 50);
        assert!(res.residual < 1e-13);
        assert!((res.x[0] - 4.0 / 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn newton_without_root_stalls() {
        let res = newton2(|[x, y]| [x * x + y * y + 1.0, x - y], [0.5, 0.2], 1e-12, 50);
        assert!(res.residual >= 1.0);
    }
}
