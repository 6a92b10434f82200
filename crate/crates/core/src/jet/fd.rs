//! Finite-difference cross-check of jet derivatives.

use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::jet::Jet4;

/// Coarse step of the central differences, per total derivative order.
/// Each balances the `h^4` truncation of the extrapolated stencil against
/// roundoff of order `eps / h^m`.
pub const FD_STEPS: [f64; 5] = [0.0, 1e-3, 3e-3, 1e-2, 2e-2];

/// Second-order central stencil for the `m`-th derivative: `(offset, weight)`.
fn stencil(m: usize) -> &'static [(i32, f64)] {
    match m {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => unreachable!("order above four"),
    }
}

/// Sorted multi-indices of length `order` over `m` variables.
pub(crate) fn multi_indices(m: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..order {
        let mut next = Vec::new();
        for idx in &out {
            let start = idx.last().copied().unwrap_or(0);
            for v in start..m {
                let mut i = idx.clone();
                i.push(v);
                next.push(i);
            }
        }
        out = next;
    }
    out
}

/// Tensor-product central difference of `f` for the multi-index `idx`.
fn central<F: Fn(&[f64]) -> Result<f64>>(f: &F, point: &[f64], idx: &[usize], h: f64) -> Result<f64> {
    let mut counts = vec![0usize; point.len()];
    for &v in idx {
        counts[v] += 1;
    }
    let axes: Vec<(usize, &[(i32, f64)])> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(v, &c)| (v, stencil(c)))
        .collect();
    let mut total = 0.0;
    let mut pos = vec![0usize; axes.len()];
    let mut x = point.to_vec();
    loop {
        let mut w = 1.0;
        x.copy_from_slice(point);
        for (a, &(v, st)) in axes.iter().enumerate() {
            let (off, wt) = st[pos[a]];
            x[v] += off as f64 * h;
            w *= wt;
        }
        total += w * f(&x)?;
        let mut a = 0;
        loop {
            if a == axes.len() {
                return Ok(total / h.powi(idx.len() as i32));
            }
            pos[a] += 1;
            if pos[a] < axes[a].1.len() {
                break;
            }
            pos[a] = 0;
            a += 1;
        }
    }
}

/// Richardson-extrapolated central difference with steps `h` and `h/2`.
pub fn fd_partial<F: Fn(&[f64]) -> Result<f64>>(f: &F, point: &[f64], idx: &[usize], h: f64) -> Result<f64> {
    let coarse = central(f, point, idx, h)?;
    let fine = central(f, point, idx, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Max over all partials of the given order of
/// `|jet - fd| / (1 + |fd|)`.
pub fn fd_check(expr: &Expr, params: &[f64], point: &[f64], order: usize) -> Result<f64> {
    if !(1..=4).contains(&order) {
        return Err(Error::IndexOutOfRange { index: order, count: 5 });
    }
    let seeds = Jet4::seed_all(point)?;
    let jet = expr.eval_jet(&seeds, params)?;
    let f = |x: &[f64]| expr.eval_scalar(x, params);
    let mut worst = 0.0f64;
    for idx in multi_indices(point.len(), order) {
        let fd = fd_partial(&f, point, &idx, FD_STEPS[order])?;
        let err = (jet.partial(&idx) - fd).abs() / (1.0 + fd.abs());
        if !err.is_finite() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_counts() {
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(8, 4).len(), 330);
    }

    #[test]
    fn quartic_exact() {
        let f = |x: &[f64]| Ok(x[0].powi(4));
        let d = fd_partial(&f, &[0.3], &[0, 0, 0, 0], 1e-2).unwrap();
        assert!((d - 24.0).abs() < 1e-6);
    }
}
