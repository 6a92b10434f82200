use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{Jet4, UnaryFn};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Functions callable from chart expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Neg,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Neg => "-",
        }
    }

    fn as_unary(self) -> UnaryFn {
        match self {
            Func::Sin => UnaryFn::Sin,
            Func::Cos => UnaryFn::Cos,
            Func::Sinh => UnaryFn::Sinh,
            Func::Cosh => UnaryFn::Cosh,
            Func::Exp => UnaryFn::Exp,
            Func::Log => UnaryFn::Log,
            Func::Sqrt => UnaryFn::Sqrt,
            Func::Neg => UnaryFn::Neg,
        }
    }
}

/// Expression tree of one chart component.
///
/// Constants produced by the parser are never negative; a leading minus is a
/// [`Func::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Index into the owning chart's variable list.
    Var(usize),
    /// Index into the owning chart's parameter list.
    Param(usize),
    Unary(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

/// Names needed to print or evaluate an [`Expr`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scope {
    pub vars: Vec<String>,
    pub params: Vec<(String, f64)>,
}

impl Scope {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|(p, _)| p == name)
    }

    pub fn param_map(&self) -> BTreeMap<String, f64> {
        self.params.iter().cloned().collect()
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Unary(Func::Neg, _) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Plain recursive scalar evaluation.
    pub fn eval_scalar<T: Real>(&self, vars: &[T], params: &[T]) -> Result<T> {
        Ok(match self {
            Expr::Const(c) => T::lit(*c),
            Expr::Var(i) => vars[*i],
            Expr::Param(i) => params[*i],
            Expr::Unary(f, a) => f.as_unary().apply_scalar(a.eval_scalar(vars, params)?)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval_scalar(vars, params)?, b.eval_scalar(vars, params)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == T::zero() {
                            return Err(Error::DegenerateEvaluation {
                                function: "div".into(),
                                value: 0.0,
                            });
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, n) => UnaryFn::PowInt(*n).apply_scalar(a.eval_scalar(vars, params)?)?,
        })
    }

    /// Jet evaluation given seeded variable jets.
    pub fn eval_jet<T: Real>(&self, vars: &[Jet4<T>], params: &[T]) -> Result<Jet4<T>> {
        let m = vars.first().map_or(0, |v| v.vars());
        Ok(match self {
            Expr::Const(c) => Jet4::constant(m, T::lit(*c)),
            Expr::Var(i) => vars[*i].clone(),
            Expr::Param(i) => Jet4::constant(m, params[*i]),
            Expr::Unary(f, a) => a.eval_jet(vars, params)?.compose_unary(f.as_unary())?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval_jet(vars, params)?, b.eval_jet(vars, params)?);
                match op {
                    BinOp::Add => &x + &y,
                    BinOp::Sub => &x - &y,
                    BinOp::Mul => &x * &y,
                    BinOp::Div => x.try_div(&y)?,
                }
            }
            Expr::Pow(a, n) => a.eval_jet(vars, params)?.powi(*n)?,
        })
    }

    /// Replaces variable `i` by `subst[i]`.
    pub fn substitute_vars(&self, subst: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => subst[*i].clone(),
            Expr::Unary(f, a) => Expr::Unary(*f, Box::new(a.substitute_vars(subst))),
            Expr::Binary(op, a, b) => Expr::Binary(
                *op,
                Box::new(a.substitute_vars(subst)),
                Box::new(b.substitute_vars(subst)),
            ),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute_vars(subst)), *n),
            other => other.clone(),
        }
    }

    pub fn display<'a>(&'a self, scope: &'a Scope) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, scope }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    scope: &'a Scope,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.scope, f)
    }
}

fn write_child(e: &Expr, scope: &Scope, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_expr(e, scope, f)?;
        f.write_str(")")
    } else {
        write_expr(e, scope, f)
    }
}

fn write_expr(e: &Expr, scope: &Scope, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) => {
            if *c < 0.0 || c.is_sign_negative() {
                write!(f, "(-{})", -c)
            } else {
                write!(f, "{c}")
            }
        }
        Expr::Var(i) => f.write_str(&scope.vars[*i]),
        Expr::Param(i) => f.write_str(&scope.params[*i].0),
        Expr::Unary(Func::Neg, a) => {
            f.write_str("-")?;
            write_child(a, scope, a.precedence() < 3, f)
        }
        Expr::Unary(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(a, scope, f)?;
            f.write_str(")")
        }
        Expr::Binary(op, a, b) => {
            let p = e.precedence();
            write_child(a, scope, a.precedence() < p, f)?;
            f.write_str(match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            })?;
            write_child(b, scope, b.precedence() <= p, f)
        }
        Expr::Pow(a, n) => {
            write_child(a, scope, a.precedence() < 5, f)?;
            write!(f, "^{n}")
        }
    }
}
