//! Euler zero-chains and Chern–Simons one-chains on a 1-skeleton.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Neg, Sub};

use num::traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{gq_int, Gq};
use crate::weights::{Gamma, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
  pub id: String,
  pub from: String,
  pub to: String,
  /// Class of the edge closed up by the chosen lifts.
  pub gamma: Option<Gamma>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonGraph {
  vertices: BTreeSet<String>,
  edges: BTreeMap<String, Edge>,
}

/// Integer chain with finite support, keyed by vertex or edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Chain(BTreeMap<String, i64>);

pub type ZeroChain = Chain;
pub type OneChain = Chain;

impl Chain {
  pub fn new() -> Self { Self::default() }

  pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
    let mut c = Self::new();
    for (k, v) in pairs {
      c.add_to(k, v);
    }
    c
  }

  pub fn add_to(&mut self, key: &str, v: i64) {
    let e = self.0.entry(key.to_string()).or_insert(0);
    *e += v;
    if *e == 0 {
      self.0.remove(key);
    }
  }

  pub fn get(&self, key: &str) -> i64 { self.0.get(key).copied().unwrap_or(0) }

  pub fn is_zero(&self) -> bool { self.0.is_empty() }

  pub fn iter(&self) -> impl Iterator<Item = (&String, &i64)> { self.0.iter() }
}

impl Add for &Chain {
  type Output = Chain;

  fn add(self, rhs: &Chain) -> Chain {
    let mut out = self.clone();
    for (k, v) in &rhs.0 {
      out.add_to(k, *v);
    }
    out
  }
}

impl Neg for &Chain {
  type Output = Chain;

  fn neg(self) -> Chain { Chain(self.0.iter().map(|(k, v)| (k.clone(), -v)).collect()) }
}

impl Sub for &Chain {
  type Output = Chain;

  fn sub(self, rhs: &Chain) -> Chain { self + &-rhs }
}

impl SkeletonGraph {
  pub fn new(vertices: impl IntoIterator<Item = String>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
    let vertices: BTreeSet<String> = vertices.into_iter().collect();
    let mut map = BTreeMap::new();
    for e in edges {
      for v in [&e.from, &e.to] {
        if !vertices.contains(v) {
          return Err(Error::Schema(format!("edge `{}` ends at unknown vertex `{v}`", e.id)));
        }
      }
      if map.insert(e.id.clone(), e.clone()).is_some() {
        return Err(Error::Schema(format!("edge id `{}` used twice", e.id)));
      }
    }
    Ok(Self { vertices, edges: map })
  }

  pub fn vertices(&self) -> &BTreeSet<String> { &self.vertices }

  pub fn edges(&self) -> impl Iterator<Item = &Edge> { self.edges.values() }

  fn edge(&self, id: &str) -> Result<&Edge> { self.edges.get(id).ok_or_else(|| Error::Schema(format!("unknown edge `{id}`"))) }

  /// `∂(from → to) = to − from`, extended linearly.
  pub fn boundary(&self, c: &OneChain) -> Result<ZeroChain> {
    let mut out = Chain::new();
    for (id, &k) in c.iter() {
      let e = self.edge(id)?;
      out.add_to(&e.to, k);
      out.add_to(&e.from, -k);
    }
    Ok(out)
  }

  /// Whether `∂c = ec2 − ec1`.
  pub fn cs_boundary_check(&self, c: &OneChain, ec1: &ZeroChain, ec2: &ZeroChain) -> Result<bool> {
    for v in ec1.iter().chain(ec2.iter()).map(|(v, _)| v) {
      if !self.vertices.contains(v) {
        return Err(Error::UnknownZero(v.clone()));
      }
    }
    Ok(self.boundary(c)? == ec2 - ec1)
  }

  /// `Σ_e c(e)·(⟨η, γ_e⟩ + p(to) − p(from))`. Vertices without a registered
  /// potential contribute 0.
  pub fn eval_weight_on_chain(&self, w: &WeightSystem, c: &OneChain) -> Result<Gq> {
    let p = |v: &str| w.potentials().get(v).cloned().unwrap_or_else(Gq::zero);
    let mut acc = Gq::zero();
    for (id, &k) in c.iter() {
      let e = self.edge(id)?;
      let g = e.gamma.as_ref().ok_or_else(|| Error::Schema(format!("edge `{id}` has no lattice label")))?;
      acc += gq_int(k) * (w.weight_eval(g)? + p(&e.to) - p(&e.from));
    }
    Ok(acc)
  }

  /// Change of `eval_weight_on_chain` under the gauge shift `h`: `Σ_v (∂c)(v)·h(v)`.
  pub fn gauge_delta(&self, c: &OneChain, h: &BTreeMap<String, Gq>) -> Result<Gq> {
    let mut acc = Gq::zero();
    for (v, &k) in self.boundary(c)?.iter() {
      acc += gq_int(k) * h.get(v).cloned().unwrap_or_else(Gq::zero);
    }
    Ok(acc)
  }
}

/// `ec(X) = Σ IND(x)·x` from Hopf indices.
pub fn euler_chain(indices: &BTreeMap<String, i64>) -> ZeroChain { Chain::from_pairs(indices.iter().map(|(k, &v)| (k.as_str(), v))) }

/// Euler chain of Morse data on an `n`-manifold: `IND(x) = (−1)^{n − ind(x)}`.
pub fn morse_euler_chain<'a>(n: usize, zeros: impl IntoIterator<Item = (&'a str, usize)>) -> Result<ZeroChain> {
  let mut c = Chain::new();
  for (id, q) in zeros {
    if q > n {
      return Err(Error::Schema(format!("zero `{id}` has index {q} above the dimension {n}")));
    }
    c.add_to(id, if (n - q).is_multiple_of(2) { 1 } else { -1 });
  }
  Ok(c)
}
