//! Seeded random complexes, weights, gauges and series for property checks.

use std::collections::BTreeMap;

use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::BasedComplex;
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::numeric;
use crate::scalar::{gq, rat, rat_int, Gq, Rat, C64};
use crate::weights::{Gamma, WeightSystem};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng { ChaCha8Rng::seed_from_u64(seed) }

/// Product of a few elementary integer row operations, with a random sign.
pub(crate) fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rat> {
  let mut u = Matrix::<Rat>::identity(n);
  if n < 2 {
    return if rng.gen_bool(0.5) { u } else { u.neg() };
  }
  for _ in 0..rng.gen_range(0..=2) {
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    let s = if rng.gen_bool(0.5) { Rat::one() } else { -Rat::one() };
    for c in 0..n {
      let v = u.get(i, c).clone() + s.clone() * u.get(j, c).clone();
      u.set(i, c, v);
    }
  }
  u
}

pub(crate) fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix<Rat> {
  Matrix::from_fn(rows, cols, |_, _| rat_int(rng.gen_range(-bound..=bound)))
}

pub fn random_rat(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> Rat { rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=max_den)) }

pub fn random_gq(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> Gq { gq(random_rat(rng, bound, max_den), random_rat(rng, bound, max_den)) }

/// Invertible rational matrix with integer entries in `[−bound, bound]`, and its inverse.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> (Matrix<Rat>, Matrix<Rat>) {
  loop {
    let t = random_int_matrix(rng, n, n, bound);
    if let Some(inv) = t.inverse() {
      return (t, inv);
    }
  }
}

/// Degree dimensions and differential ranks of a random complex: `dims[q] =
/// r[q−1] + h[q] + r[q]`, all at most `max_dim`.
fn random_shape(rng: &mut ChaCha8Rng, max_dim: usize, with_homology: bool) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
  loop {
    let degrees = rng.gen_range(2..=4usize);
    let r: Vec<usize> = (0..degrees - 1).map(|_| rng.gen_range(if with_homology { 0..=2 } else { 1..=2 })).collect();
    let h: Vec<usize> = (0..degrees).map(|_| if with_homology { rng.gen_range(0..=1) } else { 0 }).collect();
    let dims: Vec<usize> = (0..degrees).map(|q| (if q > 0 { r[q - 1] } else { 0 }) + h[q] + r.get(q).copied().unwrap_or(0)).collect();
    if dims.iter().all(|&n| n <= max_dim) && dims.iter().any(|&n| n > 0) {
      return (dims, r, h);
    }
  }
}

/// Differentials in standard form: degree `q` has basis `[image | homology | preimage]`
/// and `d_q` sends the preimage block identically onto the image block of `q + 1`.
fn standard_diffs<R: crate::scalar::Ring>(dims: &[usize], r: &[usize], h: &[usize]) -> Vec<Matrix<R>> {
  (0..dims.len() - 1)
    .map(|q| {
      let offset = (if q > 0 { r[q - 1] } else { 0 }) + h[q];
      Matrix::from_fn(dims[q + 1], dims[q], |i, j| if j >= offset && i == j - offset { R::one() } else { R::zero() })
    })
    .collect()
}

/// Random acyclic rational complex with every degree of dimension at most
/// `max_dim`, carrying the standard form `b = I`.
pub fn random_acyclic_complex(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> BasedComplex<Rat> {
  let (dims, r, h) = random_shape(rng, max_dim, false);
  let diffs: Vec<Matrix<Rat>> = standard_diffs(&dims, &r, &h);
  let t: Vec<(Matrix<Rat>, Matrix<Rat>)> = dims.iter().map(|&n| random_invertible(rng, n, bound)).collect();
  let diffs = diffs.iter().enumerate().map(|(q, d)| t[q + 1].0.mul(d).mul(&t[q].1)).collect();
  let form = dims.iter().map(|&n| Matrix::identity(n)).collect();
  BasedComplex::new(dims, diffs).expect("standard shapes").with_form(form).expect("square forms")
}

fn random_real_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix<C64> { Matrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0)) }

/// Random real invertible matrix with condition number at most `max_cond`, and its inverse.
fn random_conditioned(rng: &mut ChaCha8Rng, n: usize, max_cond: f64) -> (Matrix<C64>, Matrix<C64>) {
  loop {
    let t = random_real_matrix(rng, n);
    let sv = numeric::singular_values(&t);
    let (hi, lo) = (sv.first().copied().unwrap_or(1.0), sv.last().copied().unwrap_or(1.0));
    if n == 0 || lo > 0.0 && hi / lo <= max_cond {
      if let Some(inv) = numeric::inverse(&t) {
        return (t, inv);
      }
    }
  }
}

/// Random acyclic floating-point complex (dimensions at most `max_dim`) with
/// `b = I`, conjugated by matrices of condition number at most `max_cond`.
pub fn random_acyclic_complex_c64(rng: &mut ChaCha8Rng, max_dim: usize, max_cond: f64) -> BasedComplex<C64> {
  let (dims, r, h) = random_shape(rng, max_dim, false);
  conjugated_c64(rng, dims, &r, &h, max_cond, false)
}

/// Random floating-point complex, possibly with cohomology, carrying a random
/// symmetric positive definite form. `max_cond` bounds the condition numbers
/// of the conjugating matrices and of the form.
pub fn random_complex_with_form(rng: &mut ChaCha8Rng, max_dim: usize, max_cond: f64) -> BasedComplex<C64> {
  let (dims, r, h) = random_shape(rng, max_dim, true);
  conjugated_c64(rng, dims, &r, &h, max_cond, true)
}

fn conjugated_c64(rng: &mut ChaCha8Rng, dims: Vec<usize>, r: &[usize], h: &[usize], max_cond: f64, random_form: bool) -> BasedComplex<C64> {
  let diffs: Vec<Matrix<C64>> = standard_diffs(&dims, r, h);
  let t: Vec<(Matrix<C64>, Matrix<C64>)> = dims.iter().map(|&n| random_conditioned(rng, n, max_cond)).collect();
  let diffs = diffs.iter().enumerate().map(|(q, d)| t[q + 1].0.mul(d).mul(&t[q].1)).collect();
  let form = dims
    .iter()
    .map(|&n| {
      if random_form {
        // s·sᵀ has condition number at most max_cond²; adding I only lowers it
        let (s, _) = random_conditioned(rng, n, max_cond.sqrt());
        s.mul(&s.transpose()).add(&Matrix::identity(n))
      } else {
        Matrix::identity(n)
      }
    })
    .collect();
  BasedComplex::new(dims, diffs).expect("standard shapes").with_form(form).expect("square forms")
}

/// Weight system of the given rank with small random rational class and potentials.
pub fn random_weight<'a>(rng: &mut ChaCha8Rng, rank: usize, ids: impl IntoIterator<Item = &'a str>) -> WeightSystem {
  let class = (0..rank).map(|_| random_gq(rng, 3, 4)).collect();
  let mut w = WeightSystem::from_class(class);
  for id in ids {
    w = w.with_potential(id, random_gq(rng, 3, 4));
  }
  w
}

pub fn random_gauge<'a>(rng: &mut ChaCha8Rng, ids: impl IntoIterator<Item = &'a str>) -> BTreeMap<String, Gq> {
  ids.into_iter().map(|id| (id.to_string(), random_gq(rng, 3, 5))).collect()
}

/// Random series `1 + (terms at positive level)` through `cap` for rank-1
/// `ω = (−1)` or rank-2 `ω = (−1, −1/2)` lattices.
pub fn random_unit_series(rng: &mut ChaCha8Rng, rank: usize, cap: &Rat, max_terms: usize) -> NovikovSeries<Gq> {
  let omega: Vec<Rat> = [rat_int(-1), rat(-1, 2)][..rank].to_vec();
  let top = cap.to_integer().try_into().unwrap_or(i64::MAX).max(1);
  let mut terms = vec![(Gamma::zero(rank), Matrix::scalar(gq(Rat::one(), Rat::zero())))];
  for _ in 0..rng.gen_range(0..=max_terms) {
    let g = Gamma((0..rank).map(|_| rng.gen_range(0..=top)).collect());
    if g.is_zero() || -g.pair_rat(&omega) > *cap {
      continue;
    }
    let c = random_gq(rng, 3, 3);
    if !c.is_zero() {
      terms.push((g, Matrix::scalar(c)));
    }
  }
  NovikovSeries::from_terms(rank, omega, cap.clone(), (1, 1), terms).expect("terms match the lattice")
}
