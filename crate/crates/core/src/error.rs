use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
  #[error("rank mismatch: expected {expected}, found {found}")]
  RankMismatch { expected: usize, found: usize },

  #[error("unknown zero `{0}`")]
  UnknownZero(String),

  #[error("shape mismatch: {0}")]
  ShapeMismatch(String),

  #[error("leading coefficient is singular")]
  SingularLeading,

  #[error("support condition violated: {0}")]
  SupportViolation(String),

  #[error("insufficient data: need at least {needed} distinct levels, found {found}")]
  InsufficientData { needed: usize, found: usize },

  #[error("Laplace transform for pair ({from}, {to}) did not converge")]
  DivergentEntry { from: String, to: String },

  #[error("complex is not acyclic (degree {degree})")]
  NotAcyclic { degree: usize },

  #[error("bilinear form is singular in degree {degree}")]
  SingularForm { degree: usize },

  #[error("Laplacian is singular in degree {degree}")]
  SingularLaplacian { degree: usize },

  #[error("eigenvalue {eigenvalue:.3e} lies in the guard band of radius {radius:.3e}")]
  GuardBand { eigenvalue: f64, radius: f64 },

  #[error("not a chain map in degree {degree}")]
  NotChainMap { degree: usize },

  #[error("d∘d is nonzero in degree {degree}")]
  NotAComplex { degree: usize },

  #[error("matrix is not hyperbolic: {0}")]
  NotHyperbolic(String),

  #[error("invalid input: {0}")]
  Schema(String),

  #[error("precondition failed: {0}")]
  Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
  /// Input problems (bad files, bad shapes) as opposed to mathematical preconditions.
  pub fn is_input_error(&self) -> bool {
    matches!(self, Error::Schema(_) | Error::RankMismatch { .. } | Error::ShapeMismatch(_) | Error::UnknownZero(_))
  }
}
