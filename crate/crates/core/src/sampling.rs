//! Deterministic low-discrepancy sample points.

use crate::dsl::ChartImmersion;
use crate::error::{Error, Result};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Fraction of each side trimmed from the domain box.
pub const BOX_MARGIN: f64 = 0.05;

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// Halton points in `box`, shrunk by [`BOX_MARGIN`] per side. The sequence
/// starts at index `seed + 1`.
pub fn halton_in_box(domain: &[(f64, f64)], count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if domain.is_empty() || domain.len() > PRIMES.len() {
        return Err(Error::EmptyDomain);
    }
    for &(lo, hi) in domain {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::EmptyDomain);
        }
    }
    Ok((0..count as u64)
        .map(|i| {
            domain
                .iter()
                .zip(PRIMES)
                .map(|(&(lo, hi), b)| {
                    let m = BOX_MARGIN * (hi - lo);
                    let (lo, hi) = (lo + m, hi - m);
                    lo + (hi - lo) * radical_inverse(seed + 1 + i, b)
                })
                .collect()
        })
        .collect())
}

/// Sample points of a chart's domain box.
pub fn sample_points(chart: &ChartImmersion, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    halton_in_box(&chart.domain, count, seed)
}
