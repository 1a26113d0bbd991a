//! Constrained weighted median: `argmin_{x >= 0} sum_i |a_i x - b_i|`.
//!
//! Each term equals `a_i |x - b_i / a_i|`, so the objective is convex and
//! piecewise linear with breakpoints `b_i / a_i` and slopes `a_i`. Sorting the
//! breakpoints and scanning normalized weights until half the mass is reached
//! yields an unconstrained minimizer; convexity makes clamping it at zero
//! optimal for the constrained problem.

use crate::error::{Error, Result};

/// Returns a minimizer of `sum_i |a_i x - b_i|` over `x >= 0`.
///
/// Terms with `a_i == 0` are constant and ignored; if every weight is zero the
/// objective is flat and `0` is returned. When the cumulative weight reaches
/// one half at a breakpoint (within [`HALF_SLACK`]) the objective is flat up
/// to the next one, and the smaller breakpoint is returned.
pub fn constrained_weighted_median(a: &[f64], b: &[f64]) -> Result<f64> {
    let mut scratch = Vec::with_capacity(a.len());
    constrained_weighted_median_with(a, b, &mut scratch)
}

/// Same as [`constrained_weighted_median`], reusing `scratch` for the
/// breakpoint list.
pub fn constrained_weighted_median_with(
    a: &[f64],
    b: &[f64],
    scratch: &mut Vec<(f64, f64)>,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "weights have length {} but targets have length {}",
            a.len(),
            b.len()
        )));
    }
    scratch.clear();
    let mut total = 0.0;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai.is_nan() || bi.is_nan() {
            return Err(Error::InvalidArgument("NaN in weighted median input".into()));
        }
        if ai < 0.0 {
            return Err(Error::InvalidArgument(format!("negative weight {ai}")));
        }
        if ai != 0.0 {
            scratch.push((bi / ai, ai));
            total += ai;
        }
    }
    Ok(scan(scratch, total))
}

/// Cumulative normalized weight within this of one half counts as a tie, so
/// that equal weights summed in different orders resolve the same way.
pub const HALF_SLACK: f64 = 1e-12;

/// Breakpoint scan over `(breakpoint, weight)` pairs with positive weights.
pub(crate) fn scan(points: &mut [(f64, f64)], total: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    points.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
    let mut cumulated = 0.0;
    let mut x = points[0].0;
    for &(s, w) in points.iter() {
        if cumulated >= 0.5 - HALF_SLACK {
            break;
        }
        cumulated += w / total;
        x = s;
    }
    x.max(0.0)
}

/// `sum_i |a_i x - b_i|`.
pub fn objective(a: &[f64], b: &[f64], x: f64) -> f64 {
    a.iter().zip(b).map(|(&ai, &bi)| (ai * x - bi).abs()).sum()
}
