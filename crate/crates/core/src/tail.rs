//! Geometric tail estimation for truncated sums.
//!
//! Given the absolute mass of a sum at each stored level, fit a geometric
//! ratio to the highest levels and bound the missing tail. The bound is a
//! heuristic; it is always reported next to the value it qualifies.

use serde::Serialize;

use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailFit {
  /// Fitted decay per unit level, `None` for finite sums.
  pub ratio: Option<f64>,
  /// Estimated absolute mass beyond the last stored level (may be infinite).
  pub tail_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
  Converged { ratio: Option<f64>, tail_bound: f64 },
  TailUnbounded { ratio: Option<f64>, tail_bound: f64 },
}

impl Verdict {
  pub fn from_fit(fit: TailFit, tolerance: f64) -> Self {
    if fit.tail_bound <= tolerance {
      Verdict::Converged { ratio: fit.ratio, tail_bound: fit.tail_bound }
    } else {
      Verdict::TailUnbounded { ratio: fit.ratio, tail_bound: fit.tail_bound }
    }
  }

  pub fn converged(&self) -> bool { matches!(self, Verdict::Converged { .. }) }

  pub fn tail_bound(&self) -> f64 {
    match self {
      Verdict::Converged { tail_bound, .. } | Verdict::TailUnbounded { tail_bound, .. } => *tail_bound,
    }
  }

  pub fn ratio(&self) -> Option<f64> {
    match self {
      Verdict::Converged { ratio, .. } | Verdict::TailUnbounded { ratio, .. } => *ratio,
    }
  }

  pub fn label(&self) -> &'static str {
    match self {
      Verdict::Converged { .. } => "converged",
      Verdict::TailUnbounded { .. } => "tail-unbounded",
    }
  }
}

/// Fits the tail of `(level, mass)` points, sorted by increasing level with
/// one entry per level. Zero masses are ignored.
pub fn fit_tail(points: &[(f64, f64)]) -> TailFit {
  let pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, m)| m > 0.0).collect();
  if pts.len() < tolerances::FINITE_SUPPORT_LEVELS {
    return TailFit { ratio: None, tail_bound: 0.0 };
  }
  let window = ((pts.len() as f64 * tolerances::TAIL_WINDOW_FRACTION).ceil() as usize).max(tolerances::TAIL_MIN_POINTS);
  let window = &pts[pts.len() - window.min(pts.len())..];
  let (intercept, slope) = linear_fit(window.iter().map(|&(l, m)| (l, m.ln())));
  let (last_level, last_mass) = *window.last().expect("window is non-empty");
  let first_level = window[0].0;
  let spacing = (last_level - first_level) / (window.len() - 1) as f64;
  let ratio = slope.exp();
  let step = (slope * spacing).exp();
  let reference = last_mass.max((intercept + slope * last_level).exp());
  let tail_bound = if step < 1.0 { reference * step / (1.0 - step) } else { f64::INFINITY };
  TailFit { ratio: Some(ratio), tail_bound }
}

/// Least-squares line through `(x, y)`; returns `(intercept, slope)`.
fn linear_fit(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
  let pts: Vec<(f64, f64)> = points.collect();
  let n = pts.len() as f64;
  let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
  let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
  let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
  let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
  let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
  (my - slope * mx, slope)
}
