//! Lorentzian space forms and their flat embedding spaces.
//!
//! | curvature | space form          | embedding  |
//! |-----------|---------------------|------------|
//! | 0         | R^{n+1}_1           | R^{n+1}_1  |
//! | +1        | de Sitter S^{n+1}_1 | R^{n+2}_1  |
//! | -1        | anti-de Sitter H^{n+1}_1 | R^{n+2}_2 |
//!
//! The first `s` coordinates of the embedding space are timelike.

use serde::{Deserialize, Serialize};

use crate::dsl::ChartImmersion;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientKind {
    Flat1,
    DeSitter,
    AntiDeSitter,
}

impl AmbientKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AmbientKind::Flat1 => "flat1",
            AmbientKind::DeSitter => "desitter",
            AmbientKind::AntiDeSitter => "antidesitter",
        }
    }

    pub fn from_keyword(kw: &str) -> Option<Self> {
        match kw {
            "flat1" => Some(AmbientKind::Flat1),
            "desitter" => Some(AmbientKind::DeSitter),
            "antidesitter" => Some(AmbientKind::AntiDeSitter),
            _ => None,
        }
    }

    pub fn curvature(self) -> i8 {
        match self {
            AmbientKind::Flat1 => 0,
            AmbientKind::DeSitter => 1,
            AmbientKind::AntiDeSitter => -1,
        }
    }
}

/// Ambient space form `M^{n+1}_1(c)` for a hypersurface of dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientForm {
    pub kind: AmbientKind,
    pub n: usize,
}

impl AmbientForm {
    pub fn new(kind: AmbientKind, n: usize) -> Self {
        Self { kind, n }
    }

    pub fn curvature(&self) -> i8 {
        self.kind.curvature()
    }

    pub fn embedding_dim(&self) -> usize {
        match self.kind {
            AmbientKind::Flat1 => self.n + 1,
            _ => self.n + 2,
        }
    }

    pub fn signature_index(&self) -> usize {
        match self.kind {
            AmbientKind::AntiDeSitter => 2,
            _ => 1,
        }
    }

    /// `<X, Y>_s` of the embedding space.
    pub fn inner<T: Real>(&self, x: &[T], y: &[T]) -> T {
        inner_unchecked(x, y, self.signature_index())
    }
}

/// `-sum_{i<s} x_i y_i + sum_{i>=s} x_i y_i`.
pub fn inner_s<T: Real>(x: &[T], y: &[T], s: usize) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(inner_unchecked(x, y, s))
}

pub(crate) fn inner_unchecked<T: Real>(x: &[T], y: &[T], s: usize) -> T {
    x.iter().zip(y).enumerate().fold(T::zero(), |acc, (i, (&a, &b))| {
        if i < s {
            acc - a * b
        } else {
            acc + a * b
        }
    })
}

/// `|<x, x>_s - c|` at `point`; zero for the flat ambient.
pub fn space_form_residual(chart: &ChartImmersion, point: &[f64]) -> Result<f64> {
    let c = chart.ambient.curvature();
    if c == 0 {
        return Ok(0.0);
    }
    let x = chart.eval_point(point)?;
    Ok((chart.ambient.inner(&x, &x) - c as f64).abs())
}
