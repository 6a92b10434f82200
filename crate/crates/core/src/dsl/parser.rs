//! Lexer and recursive-descent parser for chart expressions.
//!
//! Precedence, loosest first: `+ -`, `* /`, unary `-`, `^` (integer exponent).

use super::ast::{BinOp, Expr, Func, Scope};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex_line(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit() || chars[i] == '_')
            {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(word),
                line,
                col,
            });
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let value = lit.parse::<f64>().map_err(|_| Error::Syntax {
                line,
                col,
                expected: "decimal literal".into(),
            })?;
            out.push(Token {
                tok: Tok::Number(value),
                line,
                col,
            });
        } else if "()[],=+-*/^".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line,
                col,
            });
            i += 1;
        } else {
            return Err(Error::Syntax {
                line,
                col,
                expected: format!("token (found `{c}`)"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col: chars.len() + 1,
    });
    Ok(out)
}

pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn next(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, expected: &str) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.to_string(),
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.error("identifier")),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(&format!("`{kw}`"))),
        }
    }

    /// Optionally signed decimal literal.
    pub fn expect_number(&mut self) -> Result<f64> {
        let neg = if *self.peek() == Tok::Sym('-') {
            self.next();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Number(v) => {
                self.next();
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("number")),
        }
    }

    pub fn expect_end(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }

    pub fn expression(&mut self, scope: &Scope) -> Result<Expr> {
        let mut lhs = self.term(scope)?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term(scope)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self, scope: &Scope) -> Result<Expr> {
        let mut lhs = self.unary(scope)?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary(scope)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self, scope: &Scope) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.next();
            let inner = self.unary(scope)?;
            return Ok(Expr::Unary(Func::Neg, Box::new(inner)));
        }
        self.power(scope)
    }

    fn power(&mut self, scope: &Scope) -> Result<Expr> {
        let base = self.primary(scope)?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        let neg = if *self.peek() == Tok::Sym('-') {
            self.next();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Number(v) if v.fract() == 0.0 && v <= i32::MAX as f64 => {
                self.next();
                let n = v as i32;
                Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
            }
            _ => Err(self.error("integer exponent")),
        }
    }

    fn primary(&mut self, scope: &Scope) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Number(v) => {
                self.next();
                Ok(Expr::Const(v))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expression(scope)?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.next();
                if *self.peek() == Tok::Sym('(') {
                    self.next();
                    let mut args = vec![self.expression(scope)?];
                    while *self.peek() == Tok::Sym(',') {
                        self.next();
                        args.push(self.expression(scope)?);
                    }
                    self.expect_sym(')')?;
                    let func = Func::from_name(&name).ok_or_else(|| Error::UnboundName(name.clone()))?;
                    if args.len() != 1 {
                        return Err(Error::Arity(name));
                    }
                    Ok(Expr::Unary(func, Box::new(args.pop().unwrap())))
                } else if let Some(i) = scope.var_index(&name) {
                    Ok(Expr::Var(i))
                } else if let Some(i) = scope.param_index(&name) {
                    Ok(Expr::Param(i))
                } else {
                    Err(Error::UnboundName(name))
                }
            }
            _ => Err(self.error("expression")),
        }
    }
}

/// Parses a standalone expression against `scope`.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr> {
    let toks = lex_line(text, 1)?;
    let mut cur = Cursor::new(&toks);
    let e = cur.expression(scope)?;
    cur.expect_end()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope() -> Scope {
        Scope {
            vars: vec!["u1".into(), "u2".into()],
            params: vec![("a".into(), 1.5)],
        }
    }

    #[test]
    fn product_of_param_and_call() {
        let e = parse_expr("a*cosh(u1)", &scope()).unwrap();
        assert_eq!(
            e,
            Expr::Binary(
                BinOp::Mul,
                Box::new(Expr::Param(0)),
                Box::new(Expr::Unary(Func::Cosh, Box::new(Expr::Var(0))))
            )
        );
    }

    #[test]
    fn arity_violation() {
        assert_eq!(
            parse_expr("cosh(u1, u2)", &scope()).unwrap_err(),
            Error::Arity("cosh".into())
        );
    }

    #[test]
    fn unknown_names() {
        assert_eq!(
            parse_expr("b*u1", &scope()).unwrap_err(),
            Error::UnboundName("b".into())
        );
        assert_eq!(
            parse_expr("tan(u1)", &scope()).unwrap_err(),
            Error::UnboundName("tan".into())
        );
    }

    #[test]
    fn negation_binds_looser_than_power() {
        let e = parse_expr("-u1^2", &scope()).unwrap();
        assert_eq!(
            e,
            Expr::Unary(Func::Neg, Box::new(Expr::Pow(Box::new(Expr::Var(0)), 2)))
        );
        let v = e.eval_scalar(&[3.0, 0.0], &[1.5]).unwrap();
        assert_eq!(v, -9.0);
    }

    #[test]
    fn left_associative_subtraction() {
        let e = parse_expr("u1 - u2 - 1", &scope()).unwrap();
        assert_eq!(e.eval_scalar(&[5.0, 1.0], &[0.0]).unwrap(), 3.0);
        let e = parse_expr("u1 / u2 * 2", &scope()).unwrap();
        assert_eq!(e.eval_scalar(&[6.0, 3.0], &[0.0]).unwrap(), 4.0);
    }

    #[test]
    fn syntax_error_position() {
        match parse_expr("u1 + * u2", &scope()).unwrap_err() {
            Error::Syntax { line, col, .. } => assert_eq!((line, col), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_expr("u1^1.5", &scope()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("(u1 + u2", &scope()),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn exponent_literals() {
        let e = parse_expr("1.5e-3 * u1^-2", &scope()).unwrap();
        assert!((e.eval_scalar::<f64>(&[0.5, 0.0], &[0.0]).unwrap() - 6e-3).abs() < 1e-15);
    }
}
