//! Scalar rings used throughout the crate.
//!
//! Exact work happens over Gaussian rationals ([`Gq`]); the float path uses
//! [`C64`]. Both implement [`Field`], so the same elimination code serves the
//! exact and the numeric routes.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigRational, Complex};

/// Exact rational number.
pub type Rat = BigRational;
/// Exact Gaussian rational `re + i·im`.
pub type Gq = Complex<Rat>;
/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Commutative ring with the conversions the crate needs.
pub trait Ring:
  Clone
  + PartialEq
  + Debug
  + Send
  + Sync
  + 'static
  + Add<Output = Self>
  + Sub<Output = Self>
  + Mul<Output = Self>
  + Neg<Output = Self>
  + Zero
  + One
{
  /// Whether equality tests on this ring are exact.
  const EXACT: bool;

  fn from_int(n: i64) -> Self;
  /// Numerical value, used for reporting and float fallbacks.
  fn to_c64(&self) -> C64;
  /// Magnitude used for residual reporting.
  fn magnitude(&self) -> f64 { self.to_c64().norm() }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
  /// Whether `self` counts as zero when eliminating against entries of size `scale`.
  fn is_negligible(&self, scale: f64) -> bool {
    if Self::EXACT {
      self.is_zero()
    } else {
      self.magnitude() <= crate::tolerances::ELIMINATION_REL * scale.max(f64::MIN_POSITIVE)
    }
  }

  fn inv(&self) -> Self { Self::one() / self.clone() }

  /// `self^n` for any integer `n`; panics on `0^n` with `n < 0`.
  fn powi(&self, n: i64) -> Self {
    let base = if n < 0 { self.inv() } else { self.clone() };
    let mut acc = Self::one();
    for _ in 0..n.unsigned_abs() {
      acc = acc * base.clone();
    }
    acc
  }
}

pub fn rat(num: i64, den: i64) -> Rat { Rat::new(BigInt::from(num), BigInt::from(den)) }

pub fn rat_int(n: i64) -> Rat { Rat::from_integer(BigInt::from(n)) }

pub fn gq(re: Rat, im: Rat) -> Gq { Complex::new(re, im) }

pub fn gq_int(n: i64) -> Gq { Complex::new(rat_int(n), Rat::zero()) }

pub fn gq_real(r: Rat) -> Gq { Complex::new(r, Rat::zero()) }

pub fn rat_to_f64(r: &Rat) -> f64 {
  if let Some(x) = r.to_f64() {
    return x;
  }
  // keep 60 significant bits of each part and carry the exponent separately
  let top = |n: &BigInt| -> (f64, i64) {
    let shift = (n.bits() as i64 - 60).max(0);
    ((n >> shift as usize).to_f64().unwrap_or(0.0), shift)
  };
  let (n, sn) = top(r.numer());
  let (d, sd) = top(r.denom());
  (n / d) * 2f64.powi((sn - sd) as i32)
}

pub fn gq_to_c64(z: &Gq) -> C64 { C64::new(rat_to_f64(&z.re), rat_to_f64(&z.im)) }

/// Exact conversion of a finite double into a rational.
pub fn rat_from_f64(x: f64) -> Option<Rat> { Rat::from_float(x) }

impl Ring for Gq {
  const EXACT: bool = true;

  fn from_int(n: i64) -> Self { gq_int(n) }

  fn to_c64(&self) -> C64 { gq_to_c64(self) }
}

impl Field for Gq {}

impl Ring for C64 {
  const EXACT: bool = false;

  fn from_int(n: i64) -> Self { C64::new(n as f64, 0.0) }

  fn to_c64(&self) -> C64 { *self }

  fn magnitude(&self) -> f64 { self.norm() }
}

impl Field for C64 {}

impl Ring for Rat {
  const EXACT: bool = true;

  fn from_int(n: i64) -> Self { rat_int(n) }

  fn to_c64(&self) -> C64 { C64::new(rat_to_f64(self), 0.0) }

  fn magnitude(&self) -> f64 { rat_to_f64(&self.abs()) }
}

impl Field for Rat {}

impl Ring for BigInt {
  const EXACT: bool = true;

  fn from_int(n: i64) -> Self { BigInt::from(n) }

  fn to_c64(&self) -> C64 { C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0) }
}

/// Renders an exact rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
  if r.is_integer() {
    r.numer().to_string()
  } else {
    format!("{}/{}", r.numer(), r.denom())
  }
}

pub fn fmt_gq(z: &Gq) -> String {
  if Zero::is_zero(&z.im) {
    fmt_rat(&z.re)
  } else if Zero::is_zero(&z.re) {
    format!("{}i", fmt_rat(&z.im))
  } else if z.im.is_negative() {
    format!("{}-{}i", fmt_rat(&z.re), fmt_rat(&-z.im.clone()))
  } else {
    format!("{}+{}i", fmt_rat(&z.re), fmt_rat(&z.im))
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn powi_handles_negative_exponents() {
    let two = gq_int(2);
    assert_eq!(two.powi(-3), gq_real(rat(1, 8)));
    assert_eq!(two.powi(0), gq_int(1));
  }

  #[test]
  fn formatting_is_compact() {
    assert_eq!(fmt_gq(&gq(rat(3, 2), rat(-1, 1))), "3/2-1i");
    assert_eq!(fmt_gq(&gq_int(4)), "4");
  }

  #[test]
  fn float_negligibility_is_relative() {
    assert!(C64::new(1e-14, 0.0).is_negligible(1.0));
    assert!(!C64::new(1e-6, 0.0).is_negligible(1.0));
  }
}
