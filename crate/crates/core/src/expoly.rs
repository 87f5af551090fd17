//! Exact exponential sums `Σ c_j · e^{θ_j}` with Gaussian-rational `c_j` and `θ_j`.
//!
//! Laplace transforms of finitely supported counting data live here: their
//! exponents are exact weight evaluations, so identities such as `δ∘δ = 0`
//! and the gauge laws can be checked without rounding.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};

use crate::scalar::{fmt_gq, gq_int, gq_to_c64, Gq, Ring, C64};

/// Exponent key with a total order (real part, then imaginary part).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Gq);

impl Ord for Exponent {
  fn cmp(&self, other: &Self) -> Ordering { (&self.0.re, &self.0.im).cmp(&(&other.0.re, &other.0.im)) }
}

impl PartialOrd for Exponent {
  fn partial_cmp(&self, other: &Self) -> Option<Ordering> { Some(self.cmp(other)) }
}

impl fmt::Debug for Exponent {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{}", fmt_gq(&self.0)) }
}

#[derive(Clone, PartialEq, Default)]
pub struct ExpPoly {
  terms: BTreeMap<Exponent, Gq>,
}

impl fmt::Debug for ExpPoly {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.terms.is_empty() {
      return write!(f, "0");
    }
    let parts: Vec<String> = self
      .terms
      .iter()
      .map(|(e, c)| if e.0.is_zero() { fmt_gq(c) } else { format!("({})·e^({})", fmt_gq(c), fmt_gq(&e.0)) })
      .collect();
    write!(f, "{}", parts.join(" + "))
  }
}

impl ExpPoly {
  /// `c · e^θ`.
  pub fn monomial(coeff: Gq, exponent: Gq) -> Self {
    let mut p = Self::default();
    p.add_term(coeff, exponent);
    p
  }

  pub fn constant(c: Gq) -> Self { Self::monomial(c, Gq::zero()) }

  /// `e^θ`.
  pub fn exp(exponent: Gq) -> Self { Self::monomial(gq_int(1), exponent) }

  pub fn add_term(&mut self, coeff: Gq, exponent: Gq) {
    if coeff.is_zero() {
      return;
    }
    let key = Exponent(exponent);
    let sum = match self.terms.remove(&key) {
      Some(c) => c + coeff,
      None => coeff,
    };
    if !sum.is_zero() {
      self.terms.insert(key, sum);
    }
  }

  pub fn terms(&self) -> impl Iterator<Item = (&Gq, &Gq)> { self.terms.iter().map(|(e, c)| (&e.0, c)) }

  pub fn len(&self) -> usize { self.terms.len() }

  pub fn is_empty(&self) -> bool { self.terms.is_empty() }

  /// The value if every exponent is zero.
  pub fn as_constant(&self) -> Option<Gq> {
    match self.terms.len() {
      0 => Some(Gq::zero()),
      1 => self.terms.get(&Exponent(Gq::zero())).cloned(),
      _ => None,
    }
  }

  /// Multiplies by `e^θ` by shifting every exponent.
  pub fn shift(&self, theta: &Gq) -> Self {
    Self { terms: self.terms.iter().map(|(e, c)| (Exponent(e.0.clone() + theta.clone()), c.clone())).collect() }
  }

  pub fn scale(&self, s: &Gq) -> Self {
    let mut out = Self::default();
    for (e, c) in &self.terms {
      out.add_term(c.clone() * s.clone(), e.0.clone());
    }
    out
  }

  pub fn eval(&self) -> C64 { self.terms.iter().map(|(e, c)| gq_to_c64(c) * gq_to_c64(&e.0).exp()).sum() }
}

impl Add for ExpPoly {
  type Output = Self;

  fn add(mut self, rhs: Self) -> Self {
    for (e, c) in rhs.terms {
      self.add_term(c, e.0);
    }
    self
  }
}

impl Sub for ExpPoly {
  type Output = Self;

  fn sub(self, rhs: Self) -> Self { self + (-rhs) }
}

impl Neg for ExpPoly {
  type Output = Self;

  fn neg(self) -> Self { Self { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() } }
}

impl Mul for ExpPoly {
  type Output = Self;

  fn mul(self, rhs: Self) -> Self {
    let mut out = Self::default();
    for (ea, ca) in &self.terms {
      for (eb, cb) in &rhs.terms {
        out.add_term(ca.clone() * cb.clone(), ea.0.clone() + eb.0.clone());
      }
    }
    out
  }
}

impl Zero for ExpPoly {
  fn zero() -> Self { Self::default() }

  fn is_zero(&self) -> bool { self.terms.is_empty() }
}

impl One for ExpPoly {
  fn one() -> Self { Self::constant(gq_int(1)) }
}

impl Ring for ExpPoly {
  const EXACT: bool = true;

  fn from_int(n: i64) -> Self { Self::constant(gq_int(n)) }

  fn to_c64(&self) -> C64 { self.eval() }
}

/// Coefficients that embed into exponential sums.
pub trait ToExpPoly {
  fn to_exp_poly(&self) -> ExpPoly;
}

impl ToExpPoly for Gq {
  fn to_exp_poly(&self) -> ExpPoly { ExpPoly::constant(self.clone()) }
}

impl ToExpPoly for ExpPoly {
  fn to_exp_poly(&self) -> ExpPoly { self.clone() }
}
