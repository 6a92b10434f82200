//! Truncated multivariate Taylor arithmetic up to order four.
//!
//! A [`Jet4`] carries the value and all partial derivatives up to its
//! truncation order of a scalar function of `m <= 8` variables at one point.
//! Coefficients are *partial derivatives* (not Taylor coefficients), stored
//! once per sorted multi-index, so `d3(i, j, k)` is the same number for every
//! ordering of its arguments.

mod fd;
mod layout;

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use fd::{fd_check, fd_partial, FD_STEPS};
pub use layout::{MAX_ORDER, MAX_VARS};
use layout::{layout, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Neg,
    /// Real power with constant exponent; the base must be positive.
    PowConst(f64),
    /// Integer power; negative exponents require a nonzero base.
    PowInt(i32),
}

impl UnaryFn {
    pub fn name(&self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Neg => "neg",
            UnaryFn::PowConst(_) => "pow",
            UnaryFn::PowInt(_) => "powi",
        }
    }

    /// `f, f', f'', f''', f''''` at `x`.
    pub fn derivatives<T: Real>(&self, x: T) -> Result<[T; 5]> {
        let degenerate = || Error::DegenerateEvaluation {
            function: self.name().to_string(),
            value: x.to_f64_lossy(),
        };
        let one = T::one();
        Ok(match *self {
            UnaryFn::Sin => {
                let (s, c) = x.sin_cos();
                [s, c, -s, -c, s]
            }
            UnaryFn::Cos => {
                let (s, c) = x.sin_cos();
                [c, -s, -c, s, c]
            }
            UnaryFn::Sinh => {
                let (s, c) = (x.sinh(), x.cosh());
                [s, c, s, c, s]
            }
            UnaryFn::Cosh => {
                let (s, c) = (x.sinh(), x.cosh());
                [c, s, c, s, c]
            }
            UnaryFn::Exp => {
                let e = x.exp();
                [e; 5]
            }
            UnaryFn::Log => {
                if !(x > T::zero()) {
                    return Err(degenerate());
                }
                let r = one / x;
                [
                    x.ln(),
                    r,
                    -r * r,
                    T::lit(2.0) * r * r * r,
                    T::lit(-6.0) * r * r * r * r,
                ]
            }
            UnaryFn::Sqrt => {
                if !(x > T::zero()) {
                    return Err(degenerate());
                }
                power_derivatives(x, T::lit(0.5))
            }
            UnaryFn::Neg => [-x, -one, T::zero(), T::zero(), T::zero()],
            UnaryFn::PowConst(p) => {
                if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
                    return UnaryFn::PowInt(p as i32).derivatives(x);
                }
                if !(x > T::zero()) {
                    return Err(degenerate());
                }
                power_derivatives(x, T::lit(p))
            }
            UnaryFn::PowInt(n) => {
                if n < 0 && x == T::zero() {
                    return Err(degenerate());
                }
                let mut out = [T::zero(); 5];
                let mut coeff = one;
                for (k, slot) in out.iter_mut().enumerate() {
                    if coeff != T::zero() {
                        *slot = coeff * x.powi(n - k as i32);
                    }
                    coeff *= T::lit((n - k as i32) as f64);
                }
                out
            }
        })
    }

    pub fn apply_scalar<T: Real>(&self, x: T) -> Result<T> {
        match *self {
            UnaryFn::Sin => Ok(x.sin()),
            UnaryFn::Cos => Ok(x.cos()),
            UnaryFn::Sinh => Ok(x.sinh()),
            UnaryFn::Cosh => Ok(x.cosh()),
            UnaryFn::Exp => Ok(x.exp()),
            UnaryFn::Neg => Ok(-x),
            UnaryFn::PowInt(n) if n >= 0 => Ok(x.powi(n)),
            _ => self.derivatives(x).map(|d| d[0]),
        }
    }
}

fn power_derivatives<T: Real>(x: T, p: T) -> [T; 5] {
    let mut out = [T::zero(); 5];
    let mut coeff = T::one();
    for (k, slot) in out.iter_mut().enumerate() {
        let e = p - T::lit(k as f64);
        *slot = coeff * x.powf(e);
        coeff *= e;
    }
    out
}

/// Value plus partial derivatives up to `order` (at most four) in `m` variables.
#[derive(Clone)]
pub struct Jet4<T> {
    m: usize,
    order: usize,
    coef: Vec<T>,
}

impl<T: Real> std::fmt::Debug for Jet4<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet4")
            .field("m", &self.m)
            .field("order", &self.order)
            .field("coef", &self.coef)
            .finish()
    }
}

impl<T: Real> PartialEq for Jet4<T> {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.order == other.order && self.coef == other.coef
    }
}

impl<T: Real> Jet4<T> {
    fn layout(&self) -> &'static Layout {
        layout(self.m)
    }

    fn zeros(m: usize, order: usize) -> Self {
        Self {
            m,
            order,
            coef: vec![T::zero(); layout(m).len(order)],
        }
    }

    /// The constant function `value` as a full order-4 jet.
    pub fn constant(m: usize, value: T) -> Self {
        assert!(m <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut j = Self::zeros(m, MAX_ORDER);
        j.coef[0] = value;
        j
    }

    /// Jet of the coordinate function `u_index` at `point`.
    pub fn seed(point: &[T], index: usize) -> Result<Self> {
        let m = point.len();
        if m > MAX_VARS || index >= m {
            return Err(Error::IndexOutOfRange { index, count: m });
        }
        let mut j = Self::zeros(m, MAX_ORDER);
        j.coef[0] = point[index];
        j.coef[1 + index] = T::one();
        Ok(j)
    }

    /// Jets for every coordinate function at `point`.
    pub fn seed_all(point: &[T]) -> Result<Vec<Self>> {
        (0..point.len()).map(|i| Self::seed(point, i)).collect()
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    /// Highest derivative order carried by this jet.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn val(&self) -> T {
        self.coef[0]
    }

    /// Partial derivative with respect to an arbitrary multi-index of length
    /// at most [`Self::order`]. Index order does not matter.
    pub fn partial(&self, vars: &[usize]) -> T {
        assert!(vars.len() <= self.order, "derivative beyond jet order");
        assert!(vars.iter().all(|&v| v < self.m), "variable out of range");
        let packed: Vec<u8> = vars.iter().map(|&v| v as u8).collect();
        self.coef[self.layout().index(&packed)]
    }

    pub fn d1(&self, i: usize) -> T {
        self.partial(&[i])
    }

    pub fn d2(&self, i: usize, j: usize) -> T {
        self.partial(&[i, j])
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> T {
        self.partial(&[i, j, k])
    }

    pub fn d4(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.partial(&[i, j, k, l])
    }

    pub fn gradient(&self) -> Vec<T> {
        (0..self.m).map(|i| self.d1(i)).collect()
    }

    /// Dense `m x m` Hessian (row-major).
    pub fn hessian(&self) -> Vec<T> {
        let m = self.m;
        let mut h = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                h[i * m + j] = self.d2(i, j);
            }
        }
        h
    }

    /// Drops derivatives above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            m: self.m,
            order,
            coef: self.coef[..self.layout().len(order)].to_vec(),
        }
    }

    /// Jet of `d/du_var` of this function; one order lower.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        assert!(var < self.m, "variable out of range");
        let l = self.layout();
        let order = self.order - 1;
        let coef = l.append[var][..l.len(order)]
            .iter()
            .map(|&g| self.coef[g as usize])
            .collect();
        Self {
            m: self.m,
            order,
            coef,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            m: self.m,
            order: self.order,
            coef: self.coef.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.coef[0] += s;
        out
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.m, other.m, "jets over different variable counts");
        let order = self.order.min(other.order);
        let len = self.layout().len(order);
        Self {
            m: self.m,
            order,
            coef: (0..len).map(|g| f(self.coef[g], other.coef[g])).collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "jets over different variable counts");
        let l = self.layout();
        let order = self.order.min(other.order);
        let len = l.len(order);
        let coef = l.leibniz[..len]
            .iter()
            .map(|pairs| {
                pairs.iter().fold(T::zero(), |acc, &(a, b)| {
                    acc + self.coef[a as usize] * other.coef[b as usize]
                })
            })
            .collect();
        Self {
            m: self.m,
            order,
            coef,
        }
    }

    /// Chain rule with the outer function given by its derivatives at `self.val()`.
    pub fn compose_derivatives(&self, f: &[T; 5]) -> Self {
        let l = self.layout();
        let len = l.len(self.order);
        let mut coef = Vec::with_capacity(len);
        coef.push(f[0]);
        for parts in &l.partitions[1..len] {
            let mut acc = T::zero();
            for p in parts {
                let mut term = f[p.blocks];
                for &b in &p.parts[..p.blocks] {
                    term *= self.coef[b as usize];
                }
                acc += term;
            }
            coef.push(acc);
        }
        Self {
            m: self.m,
            order: self.order,
            coef,
        }
    }

    /// Applies one of the supported elementary functions.
    pub fn compose_unary(&self, f: UnaryFn) -> Result<Self> {
        if let UnaryFn::Neg = f {
            return Ok(-self);
        }
        let d = f.derivatives(self.val())?;
        Ok(self.compose_derivatives(&d))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.val() == T::zero() {
            return Err(Error::DegenerateEvaluation {
                function: "div".into(),
                value: 0.0,
            });
        }
        self.compose_unary(UnaryFn::PowInt(-1))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.product(&other.recip()?))
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::LengthMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
            ArithOp::Div => self.try_div(other)?,
        })
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.compose_unary(UnaryFn::Sqrt)
    }

    pub fn ln(&self) -> Result<Self> {
        self.compose_unary(UnaryFn::Log)
    }

    pub fn exp(&self) -> Self {
        self.compose_unary(UnaryFn::Exp).expect("exp is total")
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        self.compose_unary(UnaryFn::PowConst(p))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        self.compose_unary(UnaryFn::PowInt(n))
    }
}

impl<'a, T: Real> Add<&'a Jet4<T>> for &'a Jet4<T> {
    type Output = Jet4<T>;
    fn add(self, rhs: &'a Jet4<T>) -> Jet4<T> {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<'a, T: Real> Sub<&'a Jet4<T>> for &'a Jet4<T> {
    type Output = Jet4<T>;
    fn sub(self, rhs: &'a Jet4<T>) -> Jet4<T> {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<'a, T: Real> Mul<&'a Jet4<T>> for &'a Jet4<T> {
    type Output = Jet4<T>;
    fn mul(self, rhs: &'a Jet4<T>) -> Jet4<T> {
        self.product(rhs)
    }
}

impl<T: Real> Neg for &Jet4<T> {
    type Output = Jet4<T>;
    fn neg(self) -> Jet4<T> {
        self.scale(-T::one())
    }
}

macro_rules! by_value {
    ($tr:ident, $method:ident) => {
        impl<T: Real> $tr<Jet4<T>> for Jet4<T> {
            type Output = Jet4<T>;
            fn $method(self, rhs: Jet4<T>) -> Jet4<T> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, T: Real> $tr<&'a Jet4<T>> for Jet4<T> {
            type Output = Jet4<T>;
            fn $method(self, rhs: &'a Jet4<T>) -> Jet4<T> {
                (&self).$method(rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<T: Real> Neg for Jet4<T> {
    type Output = Jet4<T>;
    fn neg(self) -> Jet4<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn seed_is_coordinate_function() {
        let j = Jet4::seed(&[2.0], 0).unwrap();
        assert_eq!(j.val(), 2.0);
        assert_eq!(j.d1(0), 1.0);
        assert_eq!(j.d2(0, 0), 0.0);

        let j = Jet4::seed(&[1.0, 3.0], 1).unwrap();
        assert_eq!(j.val(), 3.0);
        assert_eq!(j.gradient(), vec![0.0, 1.0]);
        assert_eq!(j.d4(0, 1, 1, 0), 0.0);
    }

    #[test]
    fn seed_rejects_bad_index() {
        assert_eq!(
            Jet4::seed(&[1.0, 2.0], 2).unwrap_err(),
            Error::IndexOutOfRange { index: 2, count: 2 }
        );
        assert!(Jet4::seed(&[0.0; 9], 0).is_err());
    }

    #[test]
    fn square_at_zero() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let sq = &u * &u;
        assert_eq!(sq.val(), 0.0);
        assert_eq!(sq.d1(0), 0.0);
        assert_eq!(sq.d2(0, 0), 2.0);
    }

    #[test]
    fn square_at_two() {
        let u = Jet4::seed(&[2.0], 0).unwrap();
        let sq = &u * &u;
        assert_eq!(
            [sq.val(), sq.d1(0), sq.d2(0, 0), sq.d3(0, 0, 0), sq.d4(0, 0, 0, 0)],
            [4.0, 4.0, 2.0, 0.0, 0.0]
        );
    }

    #[test]
    fn fourth_power_at_one() {
        let u = Jet4::seed(&[1.0], 0).unwrap();
        let sq = &u * &u;
        let q = &sq * &sq;
        assert_eq!(
            [q.val(), q.d1(0), q.d2(0, 0), q.d3(0, 0, 0), q.d4(0, 0, 0, 0)],
            [1.0, 4.0, 12.0, 24.0, 24.0]
        );
    }

    #[test]
    fn reciprocal_at_two() {
        // values frozen from a Richardson-extrapolated central-difference
        // oracle of 1/u at u = 2 (see tests/jet_oracles.rs)
        let u = Jet4::seed(&[2.0], 0).unwrap();
        let one = Jet4::constant(1, 1.0);
        let r = one.arith(&u, ArithOp::Div).unwrap();
        let got = [r.val(), r.d1(0), r.d2(0, 0), r.d3(0, 0, 0), r.d4(0, 0, 0, 0)];
        let want = [0.5, -0.25, 0.25, -0.375, 0.75];
        for (g, w) in got.iter().zip(want) {
            assert!(close(*g, w, 1e-14), "{got:?}");
        }
    }

    #[test]
    fn division_by_zero_valued_jet() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let one = Jet4::constant(1, 1.0);
        assert!(matches!(
            one.arith(&u, ArithOp::Div),
            Err(Error::DegenerateEvaluation { .. })
        ));
    }

    #[test]
    fn exp_at_zero_has_unit_partials() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let e = u.exp();
        for d in 0..=4 {
            assert_eq!(e.partial(&vec![0; d]), 1.0);
        }
    }

    #[test]
    fn cosh_at_zero() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let c = u.compose_unary(UnaryFn::Cosh).unwrap();
        assert_eq!(
            [c.val(), c.d1(0), c.d2(0, 0), c.d3(0, 0, 0), c.d4(0, 0, 0, 0)],
            [1.0, 0.0, 1.0, 0.0, 1.0]
        );
    }

    #[test]
    fn log_and_sqrt_reject_nonpositive() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let err = u.ln().unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateEvaluation {
                function: "log".into(),
                value: 0.0
            }
        );
        assert!(u.sqrt().is_err());
        assert!(u.powf(0.5).is_err());
    }

    #[test]
    fn mixed_polynomial_partials() {
        // f = u^3 v at (1.5, -0.5): f_uuuv = 6, f_uuv = 6u = 9, f_uv = 3u^2
        let p = [1.5, -0.5];
        let u = Jet4::seed(&p, 0).unwrap();
        let v = Jet4::seed(&p, 1).unwrap();
        let f = &(&(&u * &u) * &u) * &v;
        assert_eq!(f.d4(0, 0, 0, 1), 6.0);
        assert_eq!(f.d4(1, 0, 0, 0), 6.0);
        assert_eq!(f.d3(0, 1, 0), 9.0);
        assert_eq!(f.d2(0, 1), 3.0 * 1.5 * 1.5);
        assert_eq!(f.d4(0, 0, 0, 0), 0.0);
        assert_eq!(f.d2(1, 1), 0.0);
    }

    #[test]
    fn derivative_lowers_order() {
        let p = [0.3, 0.7];
        let u = Jet4::seed(&p, 0).unwrap();
        let v = Jet4::seed(&p, 1).unwrap();
        let f = (&u * &v).exp();
        let fu = f.derivative(0);
        assert_eq!(fu.order(), 3);
        assert!(close(fu.val(), f.d1(0), 1e-15));
        assert!(close(fu.d3(1, 1, 0), f.d4(0, 1, 1, 0), 1e-15));
    }

    #[test]
    fn truncated_products_keep_lowest_order() {
        let u = Jet4::seed(&[1.0], 0).unwrap();
        let t = u.truncate(2);
        let p = &t * &u;
        assert_eq!(p.order(), 2);
        assert_eq!(p.d2(0, 0), 2.0);
    }

    #[test]
    fn integer_power_at_zero_base() {
        let u = Jet4::seed(&[0.0], 0).unwrap();
        let c = u.powi(3).unwrap();
        assert_eq!(c.d3(0, 0, 0), 6.0);
        assert_eq!(c.d4(0, 0, 0, 0), 0.0);
        assert!(u.powi(-2).is_err());
    }
}
