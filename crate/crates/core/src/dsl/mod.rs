//! Chart description language: `u -> x(u)` immersions as text.
//!
//! ```text
//! chart <name>
//! ambient <flat1 | desitter | antidesitter> dim <n+1>
//! vars u1 in [lo, hi], u2 in [lo, hi], ...
//! params a = 1.5, lambda = 0.0, ...
//! x1 = <expr>
//! ...
//! xN = <expr>
//! ```
//!
//! `#` starts a comment. Expressions use `+ - * /`, integer powers `^`, and
//! the functions `sin cos sinh cosh exp log sqrt`.

mod ast;
mod chart;
mod parser;

pub use ast::{BinOp, Expr, ExprDisplay, Func, Scope};
pub use chart::{parse_chart, ChartImmersion};
pub use parser::parse_expr;
