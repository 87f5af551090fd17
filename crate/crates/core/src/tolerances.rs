//! Numerical thresholds, collected in one place.
//!
//! Exact (rational) routes never consult these; they only govern the float
//! path and the convergence heuristics.

/// Float pivots below this fraction of the largest entry are treated as zero.
pub const ELIMINATION_REL: f64 = 1e-12;

/// Singular values below this fraction of the largest one do not count
/// towards the numerical rank.
pub const RANK_REL: f64 = 1e-9;

/// Eigenvalues closer than this are treated as one cluster.
pub const EIGEN_CLUSTER: f64 = 1e-8;

/// Relative half-width of the forbidden band around a spectral-split radius.
pub const SPECTRAL_GUARD_REL: f64 = 0.05;

/// Target accuracy of the contour-integral spectral projector.
pub const PROJECTOR_ACCURACY: f64 = 1e-15;

/// Upper bound on quadrature nodes for the spectral projector.
pub const PROJECTOR_MAX_NODES: usize = 8192;

/// Default tail bound below which a truncated sum is called converged.
pub const DEFAULT_VERDICT_TOL: f64 = 1e-6;

/// Fraction of the highest stored levels used to fit the geometric tail.
pub const TAIL_WINDOW_FRACTION: f64 = 0.25;

/// Minimum number of points in a tail fit.
pub const TAIL_MIN_POINTS: usize = 3;

/// Series with fewer nonzero levels than this are treated as finite sums.
pub const FINITE_SUPPORT_LEVELS: usize = 4;

/// Minimum distinct levels `abscissa_estimate` accepts by default.
pub const ABSCISSA_MIN_LEVELS: usize = 8;

/// Levels closer than this are considered equal when aggregating floats.
pub const LEVEL_EPS: f64 = 1e-12;
