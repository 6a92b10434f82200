//! Small dense linear algebra: the matrices here are at most 10 x 10.

use std::ops::{Index, IndexMut};

use crate::jet::Jet4;
use crate::scalar::Real;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).fold(T::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)]))
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| (0..self.n).fold(T::zero(), |acc, k| acc + self[(i, k)] * v[k]))
            .collect()
    }

    /// `P M P^T`.
    pub fn congruence(&self, p: &Self) -> Self {
        p.matmul(self).matmul(&p.transpose())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] * s)
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Sum of squared entries.
    pub fn norm2(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn symmetrized(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.n, |i, j| half * (self[(i, j)] + self[(j, i)]))
    }

    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` if a pivot is below `tiny`.
    pub fn inverse(&self, tiny: T) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).max_by(|&r, &s| {
                a[(r, col)]
                    .abs()
                    .partial_cmp(&a[(s, col)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if !(a[(piv, col)].abs() > tiny) {
                return None;
            }
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let d = T::one() / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= d;
                inv[(col, j)] *= d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f != T::zero() {
                        for j in 0..n {
                            let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                            a[(r, j)] -= f * ac;
                            inv[(r, j)] -= f * ic;
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        if r != s {
            for j in 0..self.n {
                self.data.swap(r * self.n + j, s * self.n + j);
            }
        }
    }

    /// Lower-triangular `L` with `L L^T = self`, or `None` if not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return None;
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix by forward substitution.
    pub fn lower_inverse(&self) -> Self {
        let n = self.n;
        let mut inv = Self::zeros(n);
        for col in 0..n {
            for i in col..n {
                let mut s = if i == col { T::one() } else { T::zero() };
                for k in col..i {
                    s -= self[(i, k)] * inv[(k, col)];
                }
                inv[(i, col)] = s / self[(i, i)];
            }
        }
        inv
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `k` of this matrix is the eigenvector for `values[k]`.
    pub vectors: Mat<T>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass vanishes.
pub fn sym_eigen<T: Real>(m: &Mat<T>) -> SymEigen<T> {
    let n = m.dim();
    let mut a = m.symmetrized();
    let mut v = Mat::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        let scale = a.norm2();
        if off <= eps * eps * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    SymEigen {
        values: order.iter().map(|&i| a[(i, i)]).collect(),
        vectors: Mat::from_fn(n, |r, c| v[(r, order[c])]),
    }
}

pub fn sym_eigenvalues<T: Real>(m: &Mat<T>) -> Vec<T> {
    sym_eigen(m).values
}

/// Square matrix of jets, row-major.
pub type JetMat<T> = Vec<Vec<Jet4<T>>>;

/// Solves `A y = b` over jets by Gaussian elimination, pivoting on values.
pub fn solve_jets<T: Real>(a: &JetMat<T>, b: &[Jet4<T>], tiny: T) -> Option<Vec<Jet4<T>>> {
    let n = a.len();
    let mut a = a.clone();
    let mut b = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| {
            a[r][col]
                .val()
                .abs()
                .partial_cmp(&a[s][col].val().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].val().abs() > tiny) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip().ok()?;
        for r in (col + 1)..n {
            let f = &a[r][col] * &inv;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    let mut y: Vec<Option<Jet4<T>>> = vec![None; n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in (i + 1)..n {
            let t = &a[i][j] * y[j].as_ref().unwrap();
            s = &s - &t;
        }
        y[i] = Some(s.try_div(&a[i][i]).ok()?);
    }
    Some(y.into_iter().map(Option::unwrap).collect())
}

/// Inverse of a jet matrix, column by column.
pub fn invert_jets<T: Real>(a: &JetMat<T>, tiny: T) -> Option<JetMat<T>> {
    let n = a.len();
    let m = a[0][0].vars();
    let order = a.iter().flatten().map(Jet4::order).min().unwrap_or(0);
    let mut inv: JetMat<T> = vec![Vec::with_capacity(n); n];
    for col in 0..n {
        let e: Vec<Jet4<T>> = (0..n)
            .map(|i| Jet4::constant(m, if i == col { T::one() } else { T::zero() }).truncate(order))
            .collect();
        let x = solve_jets(a, &e, tiny)?;
        for (row, xi) in inv.iter_mut().zip(x) {
            row.push(xi);
        }
    }
    Some(inv)
}

pub fn jet_values<T: Real>(a: &JetMat<T>) -> Mat<T> {
    Mat::from_fn(a.len(), |i, j| a[i][j].val())
}

/// Counts clusters in an ascending list; gaps `<= tol` merge.
pub fn count_distinct<T: Real>(sorted: &[T], tol: T) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// Cluster sizes and means of an ascending list.
pub fn clusters<T: Real>(sorted: &[T], tol: T) -> Vec<(T, usize)> {
    let mut out: Vec<(T, usize, T)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if i > 0 && x - sorted[i - 1] <= tol {
            let last = out.last_mut().unwrap();
            last.1 += 1;
            last.2 += x;
        } else {
            out.push((x, 1, x));
        }
    }
    out.into_iter()
        .map(|(_, k, s)| (s / T::lit(k as f64), k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let m = Mat::<f64>::from_fn(3, |i, j| [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]][i][j]);
        let e = sym_eigen(&m);
        let want = [1.0, 3.0, 5.0];
        for (g, w) in e.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        // A v = lambda v
        for k in 0..3 {
            let v: Vec<f64> = (0..3).map(|r| e.vectors[(r, k)]).collect();
            let av = m.matvec(&v);
            for r in 0..3 {
                assert!((av[r] - e.values[k] * v[r]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn inverse_and_cholesky() {
        let m = Mat::from_fn(3, |i, j| [[4.0, 2.0, 0.6], [2.0, 5.0, 1.0], [0.6, 1.0, 3.0]][i][j]);
        let inv = m.inverse(1e-14).unwrap();
        let id = m.matmul(&inv);
        assert!(id.sub(&Mat::identity(3)).max_abs() < 1e-14);
        let l = m.cholesky().unwrap();
        assert!(l.matmul(&l.transpose()).sub(&m).max_abs() < 1e-14);
        let p = l.lower_inverse();
        assert!(m.congruence(&p).sub(&Mat::identity(3)).max_abs() < 1e-14);
        assert!(Mat::diag(&[1.0, -1.0]).cholesky().is_none());
        assert!(Mat::<f64>::zeros(2).inverse(1e-14).is_none());
    }

    #[test]
    fn jet_inverse_matches_pointwise_inverse() {
        let p = [0.4, -0.2];
        let u = Jet4::seed(&p, 0).unwrap();
        let v = Jet4::seed(&p, 1).unwrap();
        let one = Jet4::constant(2, 1.0);
        let a: JetMat<f64> = vec![
            vec![&one + &(&u * &u), &u * &v],
            vec![&u * &v, (&one + &v).exp()],
        ];
        let inv = invert_jets(&a, 1e-14).unwrap();
        let want = jet_values(&a).inverse(1e-14).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv[i][j].val() - want[(i, j)]).abs() < 1e-14);
            }
        }
        // (A A^-1) has vanishing derivatives
        for i in 0..2 {
            for j in 0..2 {
                let e = &(&a[i][0] * &inv[0][j]) + &(&a[i][1] * &inv[1][j]);
                assert!(e.d1(0).abs() < 1e-13 && e.d2(0, 1).abs() < 1e-13);
                assert!(e.d4(0, 0, 1, 1).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn clustering() {
        let xs = [-1.0, -1.0 + 5e-7, 0.5, 0.5, 2.0];
        assert_eq!(count_distinct(&xs, 1e-6), 3);
        let c = clusters(&xs, 1e-6);
        assert_eq!(c.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 2, 1]);
        // ties at exactly the tolerance merge
        assert_eq!(count_distinct(&[0.0, 0.5], 0.5), 1);
    }
}
