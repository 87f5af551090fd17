//! Counting functions of instantons and closed orbits, and their Laplace transforms.

use std::collections::BTreeMap;

use num::traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expoly::ExpPoly;
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::scalar::{gq_int, gq_real, rat_to_f64, Gq, Rat, C64};
use crate::tail::{fit_tail, Verdict};
use crate::weights::{Gamma, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ZeroPoint {
  pub index: usize,
  pub id: String,
}

/// Signed instanton counts per ordered pair of zeros and lattice class.
#[derive(Clone, Debug, PartialEq)]
pub struct InstantonCounts {
  rank: usize,
  omega: Vec<Rat>,
  /// Sorted by `(index, id)`; this is the basis order everywhere.
  zeros: Vec<ZeroPoint>,
  counts: BTreeMap<(String, String), BTreeMap<Gamma, i64>>,
}

/// Closed-orbit counts pushed forward to the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitCounts {
  rank: usize,
  omega: Vec<Rat>,
  values: BTreeMap<Gamma, Rat>,
}

/// A Laplace transform of finitely supported data: the exact exponential sum,
/// its numerical value, and the convergence verdict of the truncated sum.
#[derive(Clone, Debug)]
pub struct Transform {
  pub exact: ExpPoly,
  pub value: C64,
  pub verdict: Verdict,
}

impl InstantonCounts {
  pub fn new(rank: usize, omega: Vec<Rat>, zeros: impl IntoIterator<Item = (String, usize)>) -> Result<Self> {
    if omega.len() != rank {
      return Err(Error::RankMismatch { expected: rank, found: omega.len() });
    }
    let mut zs: Vec<ZeroPoint> = zeros.into_iter().map(|(id, index)| ZeroPoint { index, id }).collect();
    zs.sort();
    let mut ids: Vec<&str> = zs.iter().map(|z| z.id.as_str()).collect();
    ids.sort();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
      return Err(Error::Schema(format!("zero `{}` listed twice", w[0])));
    }
    Ok(Self { rank, omega, zeros: zs, counts: BTreeMap::new() })
  }

  /// Adds `count` instantons from `from` to `to` in class `gamma`.
  pub fn add(&mut self, from: &str, to: &str, gamma: Gamma, count: i64) -> Result<()> {
    gamma.check_rank(self.rank)?;
    let (i_from, i_to) = (self.index_of(from)?, self.index_of(to)?);
    if i_from != i_to + 1 {
      return Err(Error::Schema(format!("instanton {from}→{to} joins indices {i_from} and {i_to}; the difference must be 1")));
    }
    let per_pair = self.counts.entry((from.to_string(), to.to_string())).or_default();
    let entry = per_pair.entry(gamma.clone()).or_insert(0);
    *entry += count;
    if *entry == 0 {
      per_pair.remove(&gamma);
    }
    Ok(())
  }

  pub fn rank(&self) -> usize { self.rank }

  pub fn omega(&self) -> &[Rat] { &self.omega }

  pub fn zeros(&self) -> &[ZeroPoint] { &self.zeros }

  pub fn index_of(&self, id: &str) -> Result<usize> {
    self.zeros.iter().find(|z| z.id == id).map(|z| z.index).ok_or_else(|| Error::UnknownZero(id.to_string()))
  }

  /// Position of `id` in the basis order.
  pub fn position(&self, id: &str) -> Result<usize> {
    self.zeros.iter().position(|z| z.id == id).ok_or_else(|| Error::UnknownZero(id.to_string()))
  }

  pub fn max_index(&self) -> usize { self.zeros.iter().map(|z| z.index).max().unwrap_or(0) }

  /// Zeros of the given Morse index, in basis order.
  pub fn zeros_of_index(&self, q: usize) -> Vec<&ZeroPoint> { self.zeros.iter().filter(|z| z.index == q).collect() }

  pub fn counts(&self, from: &str, to: &str) -> Option<&BTreeMap<Gamma, i64>> { self.counts.get(&(from.to_string(), to.to_string())) }

  pub fn pairs(&self) -> impl Iterator<Item = (&(String, String), &BTreeMap<Gamma, i64>)> { self.counts.iter() }

  /// Weight system of rank `rank` with every zero registered at potential 0.
  pub fn default_weight(&self) -> WeightSystem { WeightSystem::new(self.rank).with_zeros(self.zeros.iter().map(|z| z.id.as_str())) }

  pub fn level(&self, g: &Gamma) -> Rat { -g.pair_rat(&self.omega) }
}

impl OrbitCounts {
  pub fn new(rank: usize, omega: Vec<Rat>) -> Result<Self> {
    if omega.len() != rank {
      return Err(Error::RankMismatch { expected: rank, found: omega.len() });
    }
    Ok(Self { rank, omega, values: BTreeMap::new() })
  }

  pub fn add(&mut self, gamma: Gamma, value: Rat) -> Result<()> {
    gamma.check_rank(self.rank)?;
    let entry = self.values.entry(gamma.clone()).or_insert_with(Rat::zero);
    *entry += value;
    if entry.is_zero() {
      self.values.remove(&gamma);
    }
    Ok(())
  }

  pub fn rank(&self) -> usize { self.rank }

  pub fn omega(&self) -> &[Rat] { &self.omega }

  pub fn values(&self) -> &BTreeMap<Gamma, Rat> { &self.values }

  pub fn is_empty(&self) -> bool { self.values.is_empty() }

  /// The counts as a scalar Novikov series truncated at `cap`.
  pub fn to_series(&self, cap: Rat) -> Result<NovikovSeries<Gq>> {
    NovikovSeries::scalar_from(self.rank, self.omega.clone(), cap, self.values.iter().map(|(g, v)| (g.clone(), gq_real(v.clone()))))
  }
}

fn verdict_from_terms(levels_and_masses: impl Iterator<Item = (Rat, f64)>, tolerance: f64) -> Verdict {
  let mut by_level: BTreeMap<Rat, f64> = BTreeMap::new();
  for (l, m) in levels_and_masses {
    *by_level.entry(l).or_default() += m;
  }
  let pts: Vec<(f64, f64)> = by_level.iter().map(|(l, m)| (rat_to_f64(l), *m)).collect();
  Verdict::from_fit(fit_tail(&pts), tolerance)
}

/// `Σ_γ 𝕀_{x,y}(γ)·exp(path_weight(w, x, y, γ))` over the stored support.
pub fn laplace_instanton(counts: &InstantonCounts, w: &WeightSystem, from: &str, to: &str, tolerance: f64) -> Result<Transform> {
  let (i_from, i_to) = (counts.index_of(from)?, counts.index_of(to)?);
  if i_from != i_to + 1 {
    return Err(Error::Precondition(format!("({from}, {to}) is not an index-difference-one pair")));
  }
  if w.rank() != counts.rank {
    return Err(Error::RankMismatch { expected: counts.rank, found: w.rank() });
  }
  let mut exact = ExpPoly::default();
  let mut masses = Vec::new();
  if let Some(per_pair) = counts.counts(from, to) {
    for (g, &c) in per_pair {
      let theta = w.path_weight(from, to, g)?;
      masses.push((counts.level(g), (c.unsigned_abs() as f64) * rat_to_f64(&theta.re).exp()));
      exact.add_term(gq_int(c), theta);
    }
  }
  Ok(Transform { value: exact.eval(), exact, verdict: verdict_from_terms(masses.into_iter(), tolerance) })
}

/// `Σ_a P(a)·e^{⟨η,a⟩}`; potentials do not enter.
pub fn laplace_orbits(orbits: &OrbitCounts, w: &WeightSystem, tolerance: f64) -> Result<Transform> {
  if w.rank() != orbits.rank {
    return Err(Error::RankMismatch { expected: orbits.rank, found: w.rank() });
  }
  let mut exact = ExpPoly::default();
  let mut masses = Vec::new();
  for (g, v) in &orbits.values {
    let theta = w.weight_eval(g)?;
    masses.push((-g.pair_rat(&orbits.omega), rat_to_f64(v).abs() * rat_to_f64(&theta.re).exp()));
    exact.add_term(gq_real(v.clone()), theta);
  }
  Ok(Transform { value: exact.eval(), exact, verdict: verdict_from_terms(masses.into_iter(), tolerance) })
}

/// The weight `η + dh`: potentials shifted by `h`.
pub fn gauge_transform(w: &WeightSystem, h: &BTreeMap<String, Gq>) -> Result<WeightSystem> { w.gauge_shift(h) }

#[derive(Clone, Debug, Serialize)]
pub struct PairGaugeCheck {
  pub from: String,
  pub to: String,
  pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeReport {
  pub instantons: Vec<PairGaugeCheck>,
  pub orbits_invariant: bool,
}

impl GaugeReport {
  pub fn holds(&self) -> bool { self.orbits_invariant && self.instantons.iter().all(|p| p.holds) }
}

/// Checks, exactly, that every instanton transform scales by `e^{h(y)−h(x)}`
/// under `η ↦ η + dh` and that the orbit transform is unchanged.
pub fn check_gauge_laws(counts: &InstantonCounts, orbits: Option<&OrbitCounts>, w: &WeightSystem, h: &BTreeMap<String, Gq>) -> Result<GaugeReport> {
  let shifted = gauge_transform(w, h)?;
  let tol = f64::INFINITY;
  let mut instantons = Vec::new();
  for x in counts.zeros() {
    for y in counts.zeros().iter().filter(|y| y.index + 1 == x.index) {
      let before = laplace_instanton(counts, w, &x.id, &y.id, tol)?.exact;
      let after = laplace_instanton(counts, &shifted, &x.id, &y.id, tol)?.exact;
      let factor = h.get(&y.id).cloned().unwrap_or_else(Gq::zero) - h.get(&x.id).cloned().unwrap_or_else(Gq::zero);
      instantons.push(PairGaugeCheck { from: x.id.clone(), to: y.id.clone(), holds: after == before.shift(&factor) });
    }
  }
  let orbits_invariant = match orbits {
    Some(p) => laplace_orbits(p, w, tol)?.exact == laplace_orbits(p, &shifted, tol)?.exact,
    None => true,
  };
  Ok(GaugeReport { instantons, orbits_invariant })
}

/// Packs the counts into a matrix-valued series over the zeros (basis order).
/// The `(x, y)` entry at `γ` is `𝕀_{x,y}(γ)·e^{potential(y) − potential(x)}`;
/// the class part stays symbolic in `γ`.
pub fn to_novikov(counts: &InstantonCounts, w: &WeightSystem, cap: Rat) -> Result<NovikovSeries<ExpPoly>> {
  let n = counts.zeros.len();
  let mut acc: BTreeMap<Gamma, Matrix<ExpPoly>> = BTreeMap::new();
  for ((from, to), per_pair) in &counts.counts {
    let (i, j) = (counts.position(from)?, counts.position(to)?);
    let offset = w.potential(to)?.clone() - w.potential(from)?.clone();
    for (g, &c) in per_pair {
      let m = acc.entry(g.clone()).or_insert_with(|| Matrix::zeros(n, n));
      m.set(i, j, m.get(i, j).clone() + ExpPoly::monomial(gq_int(c), offset.clone()));
    }
  }
  NovikovSeries::from_terms(counts.rank, counts.omega.clone(), cap, (n, n), acc)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalar::{gq, rat, rat_from_f64, rat_int};

  fn circle() -> InstantonCounts {
    let mut c = InstantonCounts::new(1, vec![rat_int(-1)], [("x".to_string(), 1), ("y".to_string(), 0)]).unwrap();
    c.add("x", "y", Gamma(vec![0]), 1).unwrap();
    c.add("x", "y", Gamma(vec![1]), -1).unwrap();
    c
  }

  fn ln_half() -> Gq { gq_real(rat_from_f64(-std::f64::consts::LN_2).unwrap()) }

  #[test]
  fn single_instanton() {
    let mut c = InstantonCounts::new(1, vec![rat_int(-1)], [("x".to_string(), 1), ("y".to_string(), 0)]).unwrap();
    c.add("x", "y", Gamma(vec![0]), 1).unwrap();
    let t = laplace_instanton(&c, &c.default_weight(), "x", "y", 1e-6).unwrap();
    assert_eq!(t.exact, ExpPoly::constant(gq_int(1)));
    assert!(t.verdict.converged());
  }

  #[test]
  fn circle_transform_is_one_minus_exponential() {
    let c = circle();
    let theta = gq(rat(1, 3), rat(2, 1));
    let w = WeightSystem::from_class(vec![theta.clone()]).with_zeros(["x", "y"]);
    let t = laplace_instanton(&c, &w, "x", "y", 1e-6).unwrap();
    assert_eq!(t.exact, ExpPoly::constant(gq_int(1)) - ExpPoly::exp(theta));
  }

  #[test]
  fn geometric_tower_converges() {
    let mut c = InstantonCounts::new(1, vec![rat_int(-1)], [("x".to_string(), 1), ("y".to_string(), 0)]).unwrap();
    for k in 0..=40 {
      c.add("x", "y", Gamma(vec![k]), 1).unwrap();
    }
    let w = WeightSystem::from_class(vec![ln_half()]).with_zeros(["x", "y"]);
    let t = laplace_instanton(&c, &w, "x", "y", 1e-6).unwrap();
    assert!((t.value.re - 2.0).abs() < 1e-11);
    assert!(t.verdict.converged());
  }

  #[test]
  fn errors_on_unknown_zero_and_bad_pairs() {
    let c = circle();
    let w = c.default_weight();
    assert!(matches!(laplace_instanton(&c, &w, "x", "q", 1e-6), Err(Error::UnknownZero(_))));
    assert!(matches!(laplace_instanton(&c, &w, "y", "x", 1e-6), Err(Error::Precondition(_))));
    let mut c2 = circle();
    assert!(matches!(c2.add("y", "x", Gamma(vec![0]), 1), Err(Error::Schema(_))));
  }

  #[test]
  fn orbit_transform_examples() {
    let empty = OrbitCounts::new(1, vec![rat_int(-1)]).unwrap();
    assert_eq!(laplace_orbits(&empty, &WeightSystem::new(1), 1e-6).unwrap().value, C64::new(0.0, 0.0));
    let mut one = OrbitCounts::new(2, vec![rat_int(-1), rat_int(0)]).unwrap();
    one.add(Gamma(vec![1, 1]), rat(1, 2)).unwrap();
    let w = WeightSystem::from_class(vec![gq_int(1), gq_int(-1)]);
    assert_eq!(laplace_orbits(&one, &w, 1e-6).unwrap().value, C64::new(0.5, 0.0));
  }

  #[test]
  fn gauge_examples() {
    let c = circle();
    let w = c.default_weight();
    let zero_h: BTreeMap<String, Gq> = [("x".into(), gq_int(0)), ("y".into(), gq_int(0))].into();
    assert_eq!(gauge_transform(&w, &zero_h).unwrap(), w);

    // prior value 2 (a single count of 2 at γ = 0), h(x) = 1, h(y) = 0 → 2e^{−1}
    let mut two = InstantonCounts::new(1, vec![rat_int(-1)], [("x".to_string(), 1), ("y".to_string(), 0)]).unwrap();
    two.add("x", "y", Gamma(vec![0]), 2).unwrap();
    let h: BTreeMap<String, Gq> = [("x".into(), gq_int(1)), ("y".into(), gq_int(0))].into();
    let after = laplace_instanton(&two, &gauge_transform(&w, &h).unwrap(), "x", "y", 1e-6).unwrap();
    assert_eq!(after.exact, ExpPoly::monomial(gq_int(2), gq_int(-1)));
    assert!((after.value.re - 2.0 * (-1f64).exp()).abs() < 1e-15);

    let mut orbits = OrbitCounts::new(1, vec![rat_int(-1)]).unwrap();
    orbits.add(Gamma(vec![2]), rat(-5, 2)).unwrap();
    let report = check_gauge_laws(&c, Some(&orbits), &w, &h).unwrap();
    assert!(report.holds());
  }

  #[test]
  fn to_novikov_packs_entries() {
    let empty = InstantonCounts::new(1, vec![rat_int(-1)], [("x".to_string(), 1), ("y".to_string(), 0)]).unwrap();
    assert!(to_novikov(&empty, &empty.default_weight(), rat_int(4)).unwrap().is_zero());

    let c = circle();
    let s = to_novikov(&c, &c.default_weight(), rat_int(4)).unwrap();
    assert_eq!(s.len(), 2);
    // basis order: y (index 0) then x (index 1); the entry lives at (x, y) = (1, 0)
    assert_eq!(s.coeff(&Gamma(vec![1])).unwrap().get(1, 0), &ExpPoly::constant(gq_int(-1)));
    assert!(s.coeff(&Gamma(vec![1])).unwrap().get(0, 1).is_zero());
  }
}
