//! Univariate polynomials and rational functions over ℚ, for zeta functions.

use std::fmt;

use num::traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::Matrix;
use crate::scalar::{fmt_rat, rat_int, Rat};

/// Polynomial with ascending coefficients; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
  pub fn new(mut coeffs: Vec<Rat>) -> Self {
    while coeffs.last().is_some_and(Zero::is_zero) {
      coeffs.pop();
    }
    Poly(coeffs)
  }

  pub fn from_ints(c: &[i64]) -> Self { Self::new(c.iter().map(|&x| rat_int(x)).collect()) }

  pub fn one() -> Self { Poly(vec![Rat::one()]) }

  pub fn coeffs(&self) -> &[Rat] { &self.0 }

  pub fn coeff(&self, i: usize) -> Rat { self.0.get(i).cloned().unwrap_or_else(Rat::zero) }

  pub fn is_zero(&self) -> bool { self.0.is_empty() }

  /// Degree; `None` for the zero polynomial.
  pub fn degree(&self) -> Option<usize> { self.0.len().checked_sub(1) }

  pub fn mul(&self, other: &Self) -> Self {
    if self.is_zero() || other.is_zero() {
      return Poly::default();
    }
    let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
    for (i, a) in self.0.iter().enumerate() {
      for (j, b) in other.0.iter().enumerate() {
        out[i + j] += a * b;
      }
    }
    Self::new(out)
  }

  pub fn scale(&self, s: &Rat) -> Self { Self::new(self.0.iter().map(|c| c * s).collect()) }

  pub fn sub(&self, other: &Self) -> Self {
    let n = self.0.len().max(other.0.len());
    Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
  }

  /// Euclidean division; panics on a zero divisor.
  pub fn divrem(&self, d: &Self) -> (Self, Self) {
    let dd = d.degree().expect("division by the zero polynomial");
    let lead = d.0[dd].clone();
    let mut r = self.0.clone();
    let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
    for i in (dd..r.len()).rev() {
      let c = &r[i] / &lead;
      if c.is_zero() {
        continue;
      }
      for (j, dj) in d.0.iter().enumerate() {
        r[i - dd + j] -= &c * dj;
      }
      q[i - dd] = c;
    }
    (Self::new(q), Self::new(r))
  }

  /// Greatest common divisor, scaled to be monic.
  pub fn gcd(&self, other: &Self) -> Self {
    let (mut a, mut b) = (self.clone(), other.clone());
    while !b.is_zero() {
      let r = a.divrem(&b).1;
      a = b;
      b = r;
    }
    match a.degree() {
      None => a,
      Some(d) => {
        let lead = a.0[d].clone();
        a.scale(&(Rat::one() / lead))
      }
    }
  }

  /// First `n` Taylor coefficients of `self / den`; `den(0)` must be nonzero.
  pub fn series_div(&self, den: &Self, n: usize) -> Vec<Rat> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "denominator vanishes at 0");
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    for k in 0..n {
      let mut acc = self.coeff(k);
      for j in 1..=k {
        acc -= den.coeff(j) * &out[k - j];
      }
      out.push(acc / &d0);
    }
    out
  }

  /// Coefficients `s_1..s_n` of `log(self)` for `self(0) = 1`, from `P' = P·s'`.
  pub fn log_coeffs(&self, n: usize) -> Vec<Rat> {
    assert!(self.coeff(0).is_one(), "log needs constant term 1");
    let mut s: Vec<Rat> = vec![Rat::zero(); n + 1];
    for k in 1..=n {
      let mut acc = rat_int(k as i64) * self.coeff(k);
      for j in 1..k {
        acc -= rat_int(j as i64) * &s[j] * self.coeff(k - j);
      }
      s[k] = acc / rat_int(k as i64);
    }
    s.remove(0);
    s
  }
}

fn fmt_poly(p: &Poly, var: &str) -> String {
  if p.is_zero() {
    return "0".into();
  }
  let mut out = String::new();
  for (i, c) in p.0.iter().enumerate() {
    if c.is_zero() {
      continue;
    }
    let neg = c.is_negative();
    let mag = c.abs();
    if out.is_empty() {
      if neg {
        out.push('-');
      }
    } else {
      out.push_str(if neg { " - " } else { " + " });
    }
    let mono = match i {
      0 => String::new(),
      1 => var.to_string(),
      _ => format!("{var}^{i}"),
    };
    if mag.is_one() && i > 0 {
      out.push_str(&mono);
    } else {
      out.push_str(&fmt_rat(&mag));
      out.push_str(&mono);
    }
  }
  out
}

impl fmt::Debug for Poly {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { f.write_str(&fmt_poly(self, "z")) }
}

impl fmt::Display for Poly {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { f.write_str(&fmt_poly(self, "z")) }
}

impl Serialize for Poly {
  fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(self.0.iter().map(fmt_rat))
  }
}

/// `num / den` in lowest terms with `den(0) = 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RationalFunction {
  pub numerator: Poly,
  pub denominator: Poly,
}

impl RationalFunction {
  pub fn new(num: Poly, den: Poly) -> Self {
    let g = num.gcd(&den);
    let (mut n, mut d) = if g.degree().unwrap_or(0) > 0 { (num.divrem(&g).0, den.divrem(&g).0) } else { (num, den) };
    let d0 = d.coeff(0);
    if !d0.is_zero() {
      let inv = Rat::one() / d0;
      n = n.scale(&inv);
      d = d.scale(&inv);
    }
    Self { numerator: n, denominator: d }
  }

  pub fn taylor(&self, n: usize) -> Vec<Rat> { self.numerator.series_div(&self.denominator, n) }

  /// `c_1..c_n` of `log(num/den)`; both must have constant term 1.
  pub fn log_taylor(&self, n: usize) -> Vec<Rat> {
    let a = self.numerator.log_coeffs(n);
    let b = self.denominator.log_coeffs(n);
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
  }
}

impl fmt::Display for RationalFunction {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "({})/({})", self.numerator, self.denominator) }
}

/// `det(I − z·φ)` from the power traces via Newton's identities.
pub fn det_one_minus_z(phi: &Matrix<Rat>) -> Poly {
  let n = phi.rows();
  let mut traces = Vec::with_capacity(n);
  let mut power = Matrix::identity(n);
  for _ in 0..n {
    power = power.mul(phi);
    traces.push(power.trace());
  }
  // e_k = (1/k) Σ_{i=1..k} (−1)^{i−1} e_{k−i} p_i; det(I − zφ) = Σ (−1)^k e_k z^k
  let mut e = vec![Rat::one()];
  for k in 1..=n {
    let mut acc = Rat::zero();
    for i in 1..=k {
      let term = &e[k - i] * &traces[i - 1];
      if i % 2 == 1 { acc += term } else { acc -= term }
    }
    e.push(acc / rat_int(k as i64));
  }
  Poly::new(e.into_iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c }).collect())
}
