use std::fmt::Write as _;

use super::ast::{Expr, Scope};
use super::parser::{lex_line, Cursor, Tok};
use crate::ambient::{AmbientForm, AmbientKind};
use crate::error::{Error, Result};
use crate::jet::{Jet4, MAX_VARS};
use crate::scalar::Real;

/// A hypersurface given by an explicit chart `u -> x(u)` into the embedding
/// space of a Lorentzian space form.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartImmersion {
    pub name: String,
    pub ambient: AmbientForm,
    pub scope: Scope,
    /// Closed sampling interval per variable.
    pub domain: Vec<(f64, f64)>,
    pub components: Vec<Expr>,
}

impl ChartImmersion {
    /// Intrinsic dimension.
    pub fn n(&self) -> usize {
        self.scope.vars.len()
    }

    pub fn embedding_dim(&self) -> usize {
        self.components.len()
    }

    pub fn params<T: Real>(&self) -> Vec<T> {
        self.scope.params.iter().map(|(_, v)| T::lit(*v)).collect()
    }

    /// Returns a copy with parameter `name` re-bound.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let i = c
            .scope
            .param_index(name)
            .ok_or_else(|| Error::UnboundName(name.to_string()))?;
        c.scope.params[i].1 = value;
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if !(2..=MAX_VARS).contains(&n) {
            return Err(Error::InvalidChart(format!(
                "intrinsic dimension {n} outside 2..={MAX_VARS}"
            )));
        }
        if self.ambient.n != n {
            return Err(Error::InvalidChart(format!(
                "ambient dimension {} does not match {n} variables",
                self.ambient.n + 1
            )));
        }
        if self.components.len() != self.ambient.embedding_dim() {
            return Err(Error::InvalidChart(format!(
                "{} components for embedding dimension {}",
                self.components.len(),
                self.ambient.embedding_dim()
            )));
        }
        if self.domain.len() != n {
            return Err(Error::InvalidChart("domain box size mismatch".into()));
        }
        for (name, v) in &self.scope.params {
            if !v.is_finite() {
                return Err(Error::InvalidChart(format!("parameter `{name}` is not finite")));
            }
        }
        Ok(())
    }

    /// Plain scalar evaluation of the immersion.
    pub fn eval_point<T: Real>(&self, point: &[T]) -> Result<Vec<T>> {
        self.check_point(point.len())?;
        let params = self.params::<T>();
        self.components
            .iter()
            .map(|c| c.eval_scalar(point, &params))
            .collect()
    }

    /// Component-wise order-4 jets at `point`.
    pub fn eval_jets<T: Real>(&self, point: &[T]) -> Result<Vec<Jet4<T>>> {
        self.check_point(point.len())?;
        let seeds = Jet4::seed_all(point)?;
        let params = self.params::<T>();
        self.components
            .iter()
            .map(|c| c.eval_jet(&seeds, &params))
            .collect()
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::LengthMismatch {
                left: len,
                right: self.n(),
            });
        }
        Ok(())
    }

    /// Serializes back into the chart file format.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "chart {}", self.name);
        let _ = writeln!(
            s,
            "ambient {} dim {}",
            self.ambient.kind.keyword(),
            self.ambient.n + 1
        );
        let vars: Vec<String> = self
            .scope
            .vars
            .iter()
            .zip(&self.domain)
            .map(|(v, (lo, hi))| format!("{v} in [{lo}, {hi}]"))
            .collect();
        let _ = writeln!(s, "vars {}", vars.join(", "));
        if !self.scope.params.is_empty() {
            let params: Vec<String> = self
                .scope
                .params
                .iter()
                .map(|(p, v)| format!("{p} = {v}"))
                .collect();
            let _ = writeln!(s, "params {}", params.join(", "));
        }
        for (i, c) in self.components.iter().enumerate() {
            let _ = writeln!(s, "x{} = {}", i + 1, c.display(&self.scope));
        }
        s
    }
}

/// Parses one chart file.
pub fn parse_chart(source: &str) -> Result<ChartImmersion> {
    let mut name = None;
    let mut ambient: Option<(AmbientKind, usize)> = None;
    let mut scope = Scope::default();
    let mut domain = Vec::new();
    let mut have_vars = false;
    let mut components: Vec<Option<Expr>> = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        if let Some(rest) = text.trim_start().strip_prefix("chart ") {
            let rest = rest.trim();
            if rest.is_empty() {
                return Err(Error::Syntax {
                    line: line_no,
                    col: 7,
                    expected: "chart name".into(),
                });
            }
            name = Some(rest.to_string());
            continue;
        }
        let toks = lex_line(text, line_no)?;
        let mut cur = Cursor::new(&toks);
        let head = cur.expect_ident()?;
        match head.as_str() {
            "ambient" => {
                let kw = cur.expect_ident()?;
                let kind = AmbientKind::from_keyword(&kw).ok_or_else(|| Error::Syntax {
                    line: line_no,
                    col: toks[1].col,
                    expected: "flat1, desitter or antidesitter".into(),
                })?;
                cur.expect_keyword("dim")?;
                let dim = cur.expect_number()?;
                if dim.fract() != 0.0 || dim < 3.0 {
                    return Err(Error::InvalidChart(format!("bad ambient dimension {dim}")));
                }
                cur.expect_end()?;
                ambient = Some((kind, dim as usize - 1));
            }
            "vars" => {
                loop {
                    let v = cur.expect_ident()?;
                    if scope.var_index(&v).is_some() {
                        return Err(Error::InvalidChart(format!("duplicate variable `{v}`")));
                    }
                    cur.expect_keyword("in")?;
                    cur.expect_sym('[')?;
                    let lo = cur.expect_number()?;
                    cur.expect_sym(',')?;
                    let hi = cur.expect_number()?;
                    cur.expect_sym(']')?;
                    scope.vars.push(v);
                    domain.push((lo, hi));
                    if *cur.peek() == Tok::Sym(',') {
                        cur.next();
                    } else {
                        break;
                    }
                }
                cur.expect_end()?;
                have_vars = true;
            }
            "params" => {
                loop {
                    let p = cur.expect_ident()?;
                    cur.expect_sym('=')?;
                    let v = cur.expect_number()?;
                    if scope.param_index(&p).is_some() {
                        return Err(Error::InvalidChart(format!("duplicate parameter `{p}`")));
                    }
                    scope.params.push((p, v));
                    if *cur.peek() == Tok::Sym(',') {
                        cur.next();
                    } else {
                        break;
                    }
                }
                cur.expect_end()?;
            }
            comp if comp.starts_with('x') && comp[1..].parse::<usize>().is_ok() => {
                if !have_vars {
                    return Err(Error::Syntax {
                        line: line_no,
                        col: 1,
                        expected: "`vars` before components".into(),
                    });
                }
                let k: usize = comp[1..].parse().unwrap();
                if k == 0 {
                    return Err(Error::InvalidChart("components are numbered from x1".into()));
                }
                cur.expect_sym('=')?;
                let e = cur.expression(&scope)?;
                cur.expect_end()?;
                if components.len() < k {
                    components.resize(k, None);
                }
                if components[k - 1].is_some() {
                    return Err(Error::InvalidChart(format!("component {comp} defined twice")));
                }
                components[k - 1] = Some(e);
            }
            _ => {
                return Err(Error::Syntax {
                    line: line_no,
                    col: 1,
                    expected: "chart, ambient, vars, params or component".into(),
                })
            }
        }
    }

    let name = name.ok_or_else(|| Error::InvalidChart("missing `chart` line".into()))?;
    let (kind, n) = ambient.ok_or_else(|| Error::InvalidChart("missing `ambient` line".into()))?;
    let components = components
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::InvalidChart(format!("component x{} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let chart = ChartImmersion {
        name,
        ambient: AmbientForm::new(kind, n),
        scope,
        domain,
        components,
    };
    chart.validate()?;
    Ok(chart)
}
