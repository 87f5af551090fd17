//! Lattice elements and weight systems.
//!
//! The lattice is the free part of first homology, modeled as `ℤ^rank`. A
//! [`WeightSystem`] carries a complex class (a homomorphism from the lattice
//! to ℂ), gauge potentials at the zeros, and an optional real ray direction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{gq_int, gq_real, Gq, Rat};

/// Element of the lattice `ℤ^rank`. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Gamma(pub Vec<i64>);

impl fmt::Debug for Gamma {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{:?}", self.0) }
}

impl Gamma {
  pub fn zero(rank: usize) -> Self { Gamma(vec![0; rank]) }

  /// `k` times the `i`-th generator.
  pub fn basis(rank: usize, i: usize, k: i64) -> Self {
    let mut v = vec![0; rank];
    v[i] = k;
    Gamma(v)
  }

  pub fn rank(&self) -> usize { self.0.len() }

  pub fn is_zero(&self) -> bool { self.0.iter().all(|&x| x == 0) }

  pub fn check_rank(&self, rank: usize) -> Result<()> {
    if self.rank() == rank { Ok(()) } else { Err(Error::RankMismatch { expected: rank, found: self.rank() }) }
  }

  /// Exact pairing with a rational covector.
  pub fn pair_rat(&self, v: &[Rat]) -> Rat {
    self.0.iter().zip(v).fold(Rat::zero(), |acc, (&g, w)| acc + w * Rat::from_integer(g.into()))
  }

  pub fn pair_gq(&self, v: &[Gq]) -> Gq {
    self.0.iter().zip(v).fold(Gq::zero(), |acc, (&g, w)| acc + w.clone() * gq_int(g))
  }
}

impl Add for &Gamma {
  type Output = Gamma;

  fn add(self, rhs: &Gamma) -> Gamma { Gamma(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()) }
}

impl Sub for &Gamma {
  type Output = Gamma;

  fn sub(self, rhs: &Gamma) -> Gamma { Gamma(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()) }
}

impl Neg for &Gamma {
  type Output = Gamma;

  fn neg(self) -> Gamma { Gamma(self.0.iter().map(|a| -a).collect()) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem {
  class: Vec<Gq>,
  potentials: BTreeMap<String, Gq>,
  ray: Option<Vec<Rat>>,
}

impl WeightSystem {
  /// Zero class of the given rank, no registered zeros.
  pub fn new(rank: usize) -> Self { Self { class: vec![Gq::zero(); rank], potentials: BTreeMap::new(), ray: None } }

  pub fn from_class(class: Vec<Gq>) -> Self { Self { class, potentials: BTreeMap::new(), ray: None } }

  /// Registers zeros with potential 0 unless already present.
  pub fn with_zeros<'a>(mut self, ids: impl IntoIterator<Item = &'a str>) -> Self {
    for id in ids {
      self.potentials.entry(id.to_string()).or_insert_with(Gq::zero);
    }
    self
  }

  pub fn with_potential(mut self, id: &str, value: Gq) -> Self {
    self.potentials.insert(id.to_string(), value);
    self
  }

  pub fn with_ray(mut self, ray: Vec<Rat>) -> Self {
    self.ray = Some(ray);
    self
  }

  pub fn rank(&self) -> usize { self.class.len() }

  pub fn class(&self) -> &[Gq] { &self.class }

  pub fn potentials(&self) -> &BTreeMap<String, Gq> { &self.potentials }

  pub fn ray(&self) -> Option<&[Rat]> { self.ray.as_deref() }

  pub fn potential(&self, id: &str) -> Result<&Gq> { self.potentials.get(id).ok_or_else(|| Error::UnknownZero(id.to_string())) }

  /// `⟨class, γ⟩`. Potentials do not enter loop evaluations.
  pub fn weight_eval(&self, gamma: &Gamma) -> Result<Gq> {
    gamma.check_rank(self.rank())?;
    Ok(gamma.pair_gq(&self.class))
  }

  /// Exponent of the weight factor for a path class from `from` to `to`:
  /// `⟨class, γ⟩ + potential(to) − potential(from)`.
  pub fn path_weight(&self, from: &str, to: &str, gamma: &Gamma) -> Result<Gq> {
    let p_from = self.potential(from)?;
    let p_to = self.potential(to)?;
    Ok(self.weight_eval(gamma)? + p_to.clone() - p_from.clone())
  }

  /// The weight `η + z·ω`; potentials are unchanged.
  pub fn ray_weight(&self, omega: &[Rat], z: &Gq) -> Result<WeightSystem> {
    if omega.len() != self.rank() {
      return Err(Error::RankMismatch { expected: self.rank(), found: omega.len() });
    }
    let class = self.class.iter().zip(omega).map(|(c, w)| c.clone() + z.clone() * gq_real(w.clone())).collect();
    Ok(WeightSystem { class, potentials: self.potentials.clone(), ray: self.ray.clone() })
  }

  /// Adds `h` to the potentials; every registered zero must appear in `h`.
  pub fn gauge_shift(&self, h: &BTreeMap<String, Gq>) -> Result<WeightSystem> {
    let mut out = self.clone();
    for (id, p) in out.potentials.iter_mut() {
      let dh = h.get(id).ok_or_else(|| Error::UnknownZero(id.clone()))?;
      *p = p.clone() + dh.clone();
    }
    Ok(out)
  }
}

/// A point `η + z·ω` on an affine line of weights.
#[derive(Clone, Debug, PartialEq)]
pub struct RayPoint {
  pub base: WeightSystem,
  pub direction: Vec<Rat>,
  pub parameter: Gq,
}

impl RayPoint {
  pub fn weight(&self) -> Result<WeightSystem> { self.base.ray_weight(&self.direction, &self.parameter) }
}
