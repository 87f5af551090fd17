//! Finite based cochain complexes, chain maps, and truncated Novikov complexes.
//!
//! Differentials raise degree: `d_q` maps degree `q` to `q + 1` and is stored
//! as a `dim(q+1) × dim(q)` matrix acting on column vectors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::counting::{laplace_instanton, InstantonCounts};
use crate::error::{Error, Result};
use crate::expoly::{ExpPoly, ToExpPoly};
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::numeric;
use crate::scalar::{gq_int, rat_to_f64, Field, Gq, Rat, Ring, C64};
use crate::tolerances;
use crate::weights::{Gamma, WeightSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct BasedComplex<R> {
  dims: Vec<usize>,
  diffs: Vec<Matrix<R>>,
  basis: Vec<Vec<String>>,
  b: Option<Vec<Matrix<R>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
  pub degree: usize,
  pub zero: bool,
  pub residual: f64,
}

/// Outcome of `d_{q+1}·d_q = 0`, one entry per composable pair.
#[derive(Clone, Debug, Serialize)]
pub struct DSquaredReport {
  pub exact: bool,
  pub degrees: Vec<DegreeCheck>,
}

impl DSquaredReport {
  pub fn holds(&self) -> bool { self.degrees.iter().all(|d| d.zero) }

  pub fn max_residual(&self) -> f64 { self.degrees.iter().map(|d| d.residual).fold(0.0, f64::max) }
}

fn default_basis(dims: &[usize]) -> Vec<Vec<String>> {
  dims.iter().enumerate().map(|(q, &n)| (0..n).map(|i| format!("e{q}.{i}")).collect()).collect()
}

/// Whether `x` vanishes: exactly for exact rings, relative to `scale` otherwise.
fn vanishes<R: Ring>(x: &Matrix<R>, scale: f64) -> bool {
  if R::EXACT { x.is_zero() } else { x.max_magnitude() <= tolerances::RANK_REL * scale.max(1.0) }
}

impl<R: Ring> BasedComplex<R> {
  /// Complex with the given differentials; `dims` fixes the degree count.
  pub fn new(dims: Vec<usize>, diffs: Vec<Matrix<R>>) -> Result<Self> {
    if diffs.len() != dims.len().saturating_sub(1) {
      return Err(Error::ShapeMismatch(format!("{} degrees need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), diffs.len())));
    }
    for (q, d) in diffs.iter().enumerate() {
      if d.shape() != (dims[q + 1], dims[q]) {
        return Err(Error::ShapeMismatch(format!("d_{q} has shape {:?}, expected {:?}", d.shape(), (dims[q + 1], dims[q]))));
      }
    }
    let basis = default_basis(&dims);
    Ok(Self { dims, diffs, basis, b: None })
  }

  pub fn with_basis(mut self, basis: Vec<Vec<String>>) -> Result<Self> {
    if basis.len() != self.dims.len() || basis.iter().zip(&self.dims).any(|(l, &n)| l.len() != n) {
      return Err(Error::ShapeMismatch("basis labels do not match the dimensions".into()));
    }
    self.basis = basis;
    Ok(self)
  }

  pub fn with_form(mut self, b: Vec<Matrix<R>>) -> Result<Self> {
    if b.len() != self.dims.len() || b.iter().zip(&self.dims).any(|(m, &n)| m.shape() != (n, n)) {
      return Err(Error::ShapeMismatch("bilinear form does not match the dimensions".into()));
    }
    self.b = Some(b);
    Ok(self)
  }

  pub fn without_form(mut self) -> Self {
    self.b = None;
    self
  }

  /// Number of degrees, counting empty ones inside the range.
  pub fn degrees(&self) -> usize { self.dims.len() }

  pub fn dims(&self) -> &[usize] { &self.dims }

  /// Dimension in degree `q`; 0 outside the stored range.
  pub fn dim(&self, q: isize) -> usize {
    if q < 0 { 0 } else { self.dims.get(q as usize).copied().unwrap_or(0) }
  }

  pub fn diffs(&self) -> &[Matrix<R>] { &self.diffs }

  /// `d_q`, or the zero map when `q` is out of range.
  pub fn diff(&self, q: isize) -> Matrix<R> {
    if q >= 0 && (q as usize) < self.diffs.len() {
      self.diffs[q as usize].clone()
    } else {
      Matrix::zeros(self.dim(q + 1), self.dim(q))
    }
  }

  pub fn basis(&self) -> &[Vec<String>] { &self.basis }

  pub fn form(&self) -> Option<&[Matrix<R>]> { self.b.as_deref() }

  pub fn total_dim(&self) -> usize { self.dims.iter().sum() }

  pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> BasedComplex<S> {
    BasedComplex {
      dims: self.dims.clone(),
      diffs: self.diffs.iter().map(|d| d.map(&f)).collect(),
      basis: self.basis.clone(),
      b: self.b.as_ref().map(|b| b.iter().map(|m| m.map(&f)).collect()),
    }
  }

  pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Option<S>) -> Option<BasedComplex<S>> {
    let conv = |m: &Matrix<R>| -> Option<Matrix<S>> {
      let e: Option<Vec<S>> = m.entries().iter().map(&f).collect();
      Some(Matrix::from_vec(m.rows(), m.cols(), e?))
    };
    let diffs: Option<Vec<_>> = self.diffs.iter().map(conv).collect();
    let b = match &self.b {
      Some(b) => Some(b.iter().map(conv).collect::<Option<Vec<_>>>()?),
      None => None,
    };
    Some(BasedComplex { dims: self.dims.clone(), diffs: diffs?, basis: self.basis.clone(), b })
  }

  pub fn to_c64(&self) -> BasedComplex<C64> { self.map(Ring::to_c64) }

  pub fn check_d_squared(&self) -> DSquaredReport {
    let degrees = self
      .diffs
      .windows(2)
      .enumerate()
      .map(|(q, w)| {
        let prod = w[1].mul(&w[0]);
        let scale = w[1].row_sum_norm() * w[0].row_sum_norm();
        DegreeCheck { degree: q, zero: vanishes(&prod, scale), residual: prod.max_magnitude() }
      })
      .collect();
    DSquaredReport { exact: R::EXACT, degrees }
  }

  /// Replaces the degree-`q` basis: new basis vectors are the columns of `t`
  /// in old coordinates, so matrices transform as `d_q ↦ d_q·t`, `d_{q−1} ↦ t⁻¹·d_{q−1}`.
  pub fn change_basis(&self, q: usize, t: &Matrix<R>, t_inv: &Matrix<R>) -> Self {
    let mut out = self.clone();
    if q < out.diffs.len() {
      out.diffs[q] = out.diffs[q].mul(t);
    }
    if q > 0 && q - 1 < out.diffs.len() {
      out.diffs[q - 1] = t_inv.mul(&out.diffs[q - 1]);
    }
    if let Some(b) = out.b.as_mut() {
      b[q] = t.transpose().mul(&b[q]).mul(t);
    }
    out
  }
}

impl<F: Field> BasedComplex<F> {
  /// `dim ker d_q − rank d_{q−1}` per degree.
  pub fn betti(&self) -> Vec<usize> {
    let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
    (0..self.dims.len())
      .map(|q| {
        let out = ranks.get(q).copied().unwrap_or(0);
        let inc = if q > 0 { ranks[q - 1] } else { 0 };
        self.dims[q].saturating_sub(out + inc)
      })
      .collect()
  }

  pub fn is_acyclic(&self) -> bool { self.betti().iter().all(|&b| b == 0) }

  fn form_or_err(&self) -> Result<&[Matrix<F>]> {
    self.b.as_deref().ok_or_else(|| Error::Precondition("complex carries no bilinear form".into()))
  }

  /// `d^t_q = b_q⁻¹·d_qᵀ·b_{q+1}`, mapping degree `q+1` back to `q`.
  pub fn transpose_wrt_b(&self) -> Result<Vec<Matrix<F>>> {
    let b = self.form_or_err()?;
    let inverses = b.iter().enumerate().map(|(q, m)| m.inverse().ok_or(Error::SingularForm { degree: q })).collect::<Result<Vec<_>>>()?;
    Ok(self.diffs.iter().enumerate().map(|(q, d)| inverses[q].mul(&d.transpose()).mul(&b[q + 1])).collect())
  }

  /// `B_q = d_{q−1}·d^t_{q−1} + d^t_q·d_q`.
  pub fn b_laplacian(&self) -> Result<Vec<Matrix<F>>> {
    let dt = self.transpose_wrt_b()?;
    Ok((0..self.dims.len())
      .map(|q| {
        let mut acc = Matrix::zeros(self.dims[q], self.dims[q]);
        if q > 0 {
          acc = acc.add(&self.diffs[q - 1].mul(&dt[q - 1]));
        }
        if q < self.diffs.len() {
          acc = acc.add(&dt[q].mul(&self.diffs[q]));
        }
        acc
      })
      .collect())
  }
}

impl BasedComplex<ExpPoly> {
  pub fn evaluate(&self) -> BasedComplex<C64> { self.map(ExpPoly::eval) }

  /// The same complex over `ℚ(i)` when every entry is a constant.
  pub fn exact_constants(&self) -> Option<BasedComplex<Gq>> { self.try_map(ExpPoly::as_constant) }
}

/// Conjugate transpose.
fn adjoint(m: &Matrix<C64>) -> Matrix<C64> { m.transpose().map(|z| z.conj()) }

fn spectral_norm(m: &Matrix<C64>) -> f64 { numeric::singular_values(m).first().copied().unwrap_or(0.0) }

/// Orthonormal bases of the generalized eigenspaces of `m` inside and outside
/// the circle `|λ| = radius`.
pub fn spectral_subspaces(m: &Matrix<C64>, radius: f64) -> Result<(Matrix<C64>, Matrix<C64>)> {
  let n = m.rows();
  let eig = numeric::eigenvalues(m);
  let band = tolerances::SPECTRAL_GUARD_REL * radius;
  if let Some(bad) = eig.iter().find(|l| (l.norm() - radius).abs() < band) {
    return Err(Error::GuardBand { eigenvalue: bad.norm(), radius });
  }
  let inside = eig.iter().filter(|l| l.norm() < radius).count();
  if inside == 0 {
    return Ok((Matrix::zeros(n, 0), Matrix::identity(n)));
  }
  if inside == n {
    return Ok((Matrix::identity(n), Matrix::zeros(n, 0)));
  }
  let inner = eig.iter().map(|l| l.norm()).filter(|&r| r < radius).fold(0.0, f64::max);
  let outer = eig.iter().map(|l| l.norm()).filter(|&r| r > radius).fold(f64::INFINITY, f64::min);
  let p = numeric::riesz_projector(m, radius, inner, outer);
  let q = Matrix::<C64>::identity(n).sub(&p);
  Ok((numeric::dominant_range(&p, inside), numeric::dominant_range(&q, n - inside)))
}

/// The two factors of a spectral split with the bases that embed them.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
  pub inside: BasedComplex<C64>,
  pub outside: BasedComplex<C64>,
  pub inside_basis: Vec<Matrix<C64>>,
  pub outside_basis: Vec<Matrix<C64>>,
  /// Largest relative failure of `d` and `d^t` to preserve either factor.
  pub invariance_residual: f64,
  /// Largest `|b(u, v)| / (‖b‖·‖u‖·‖v‖)` over basis vectors `u` inside, `v` outside.
  pub cross_pairing: f64,
}

impl SpectralSplit {
  /// Whether the outside factor has invertible Laplacian and no cohomology.
  pub fn outside_acyclic(&self) -> bool {
    let Ok(lap) = self.outside.b_laplacian() else { return false };
    lap.iter().all(|m| m.rows() == 0 || numeric::rank(m) == m.rows()) && self.outside.is_acyclic()
  }
}

fn restrict(c: &BasedComplex<C64>, bases: &[Matrix<C64>], tag: &str) -> (BasedComplex<C64>, f64) {
  let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
  let mut residual: f64 = 0.0;
  let diffs = (0..c.diffs.len())
    .map(|q| {
      let image = c.diffs[q].mul(&bases[q]);
      let x = adjoint(&bases[q + 1]).mul(&image);
      let err = image.sub(&bases[q + 1].mul(&x));
      let scale = spectral_norm(&c.diffs[q]).max(f64::MIN_POSITIVE);
      residual = residual.max(spectral_norm(&err) / scale);
      x
    })
    .collect();
  let b = c.b.as_ref().map(|b| b.iter().zip(bases).map(|(m, u)| u.transpose().mul(m).mul(u)).collect());
  let basis = dims.iter().enumerate().map(|(q, &n)| (0..n).map(|i| format!("{tag}{q}.{i}")).collect()).collect();
  (BasedComplex { dims, diffs, basis, b }, residual)
}

fn transpose_invariance(c: &BasedComplex<C64>, bases: &[Matrix<C64>]) -> Result<f64> {
  let dt = c.transpose_wrt_b()?;
  let mut residual: f64 = 0.0;
  for (q, m) in dt.iter().enumerate() {
    let image = m.mul(&bases[q + 1]);
    let err = image.sub(&bases[q].mul(&adjoint(&bases[q]).mul(&image)));
    residual = residual.max(spectral_norm(&err) / spectral_norm(m).max(f64::MIN_POSITIVE));
  }
  Ok(residual)
}

impl BasedComplex<C64> {
  /// Splits off the generalized eigenspaces of the b-Laplacian with `|λ| < radius`.
  pub fn spectral_split(&self, radius: f64) -> Result<SpectralSplit> {
    let lap = self.b_laplacian()?;
    let mut inside_basis = Vec::new();
    let mut outside_basis = Vec::new();
    for m in &lap {
      let (u, v) = spectral_subspaces(m, radius)?;
      inside_basis.push(u);
      outside_basis.push(v);
    }
    let (inside, r1) = restrict(self, &inside_basis, "in");
    let (outside, r2) = restrict(self, &outside_basis, "out");
    let r3 = transpose_invariance(self, &inside_basis)?.max(transpose_invariance(self, &outside_basis)?);
    let b = self.form_or_err()?;
    let mut cross: f64 = 0.0;
    for q in 0..self.dims.len() {
      let scale = spectral_norm(&b[q]).max(f64::MIN_POSITIVE);
      let pairing = inside_basis[q].transpose().mul(&b[q]).mul(&outside_basis[q]);
      cross = cross.max(pairing.max_magnitude() / scale);
    }
    Ok(SpectralSplit { inside, outside, inside_basis, outside_basis, invariance_residual: r1.max(r2).max(r3), cross_pairing: cross })
  }
}

/// Degree-wise maps between complexes with the same degree range.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<R> {
  source: BasedComplex<R>,
  target: BasedComplex<R>,
  maps: Vec<Matrix<R>>,
}

impl<R: Ring> ChainMap<R> {
  /// Validates shapes and `f_{q+1}·d^S_q = d^T_q·f_q` in every degree.
  pub fn new(source: BasedComplex<R>, target: BasedComplex<R>, maps: Vec<Matrix<R>>) -> Result<Self> {
    if source.degrees() != target.degrees() || maps.len() != source.degrees() {
      return Err(Error::ShapeMismatch("chain map needs one matrix per degree of matching complexes".into()));
    }
    for (q, f) in maps.iter().enumerate() {
      if f.shape() != (target.dims[q], source.dims[q]) {
        return Err(Error::ShapeMismatch(format!("f_{q} has shape {:?}, expected {:?}", f.shape(), (target.dims[q], source.dims[q]))));
      }
    }
    for q in 0..source.diffs.len() {
      let lhs = maps[q + 1].mul(&source.diffs[q]);
      let rhs = target.diffs[q].mul(&maps[q]);
      let scale = maps[q + 1].row_sum_norm() * source.diffs[q].row_sum_norm() + target.diffs[q].row_sum_norm() * maps[q].row_sum_norm();
      if !vanishes(&lhs.sub(&rhs), scale) {
        return Err(Error::NotChainMap { degree: q });
      }
    }
    Ok(Self { source, target, maps })
  }

  pub fn identity(c: &BasedComplex<R>) -> Self {
    let maps = c.dims.iter().map(|&n| Matrix::identity(n)).collect();
    Self { source: c.clone(), target: c.clone(), maps }
  }

  pub fn source(&self) -> &BasedComplex<R> { &self.source }

  pub fn target(&self) -> &BasedComplex<R> { &self.target }

  pub fn maps(&self) -> &[Matrix<R>] { &self.maps }

  /// `other ∘ self`.
  pub fn then(&self, other: &ChainMap<R>) -> Result<Self> {
    if other.source.dims != self.target.dims {
      return Err(Error::ShapeMismatch("maps are not composable".into()));
    }
    let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| g.mul(f)).collect();
    Ok(Self { source: self.source.clone(), target: other.target.clone(), maps })
  }

  /// `𝒞^q = T^{q−1} ⊕ S^q` with differential `(x, α) ↦ (−d_T x + f α, d_S α)`.
  /// The cone has one more degree than its inputs.
  pub fn mapping_cone(&self) -> BasedComplex<R> {
    let (s, t) = (&self.source, &self.target);
    let n = s.degrees() + 1;
    let dims: Vec<usize> = (0..n as isize).map(|q| t.dim(q - 1) + s.dim(q)).collect();
    let map = |q: isize| -> Matrix<R> {
      if q >= 0 && (q as usize) < self.maps.len() { self.maps[q as usize].clone() } else { Matrix::zeros(t.dim(q), s.dim(q)) }
    };
    let diffs = (0..n as isize - 1)
      .map(|q| Matrix::block(&t.diff(q - 1).neg(), &map(q), &Matrix::zeros(s.dim(q + 1), t.dim(q - 1)), &s.diff(q)))
      .collect();
    let basis = (0..n as isize)
      .map(|q| {
        let tl = if q >= 1 { t.basis[q as usize - 1].iter().map(|l| format!("target:{l}")).collect() } else { Vec::new() };
        let sl: Vec<String> = s.basis.get(q as usize).map(|v| v.iter().map(|l| format!("source:{l}")).collect()).unwrap_or_default();
        [tl, sl].concat()
      })
      .collect();
    let b = match (&s.b, &t.b) {
      (Some(bs), Some(bt)) => Some(
        (0..n as isize)
          .map(|q| {
            let tb = if q >= 1 { bt[q as usize - 1].clone() } else { Matrix::zeros(0, 0) };
            let sb = bs.get(q as usize).cloned().unwrap_or_else(|| Matrix::zeros(0, 0));
            Matrix::block(&tb, &Matrix::zeros(tb.rows(), sb.cols()), &Matrix::zeros(sb.rows(), tb.cols()), &sb)
          })
          .collect(),
      ),
      _ => None,
    };
    BasedComplex { dims, diffs, basis, b }
  }
}

/// Differential with entries `L(𝕀_{x,y})(w)`, graded by Morse index and based
/// by zeros. Entries whose truncated sums are not judged converged are an
/// error unless `allow_divergent` is set.
pub fn build_morse_differential(counts: &InstantonCounts, w: &WeightSystem, tolerance: f64, allow_divergent: bool) -> Result<BasedComplex<ExpPoly>> {
  let top = counts.max_index();
  let by_index: Vec<Vec<String>> = (0..=top).map(|q| counts.zeros_of_index(q).into_iter().map(|z| z.id.clone()).collect()).collect();
  let dims: Vec<usize> = by_index.iter().map(Vec::len).collect();
  let mut diffs = Vec::new();
  for q in 0..top {
    let mut d = Matrix::zeros(dims[q + 1], dims[q]);
    for (i, x) in by_index[q + 1].iter().enumerate() {
      for (j, y) in by_index[q].iter().enumerate() {
        let t = laplace_instanton(counts, w, x, y, tolerance)?;
        if !t.verdict.converged() && !allow_divergent {
          return Err(Error::DivergentEntry { from: x.clone(), to: y.clone() });
        }
        d.set(i, j, t.exact);
      }
    }
    diffs.push(d);
  }
  BasedComplex::new(dims, diffs)?.with_basis(by_index)
}

/// `D_{q+1}⁻¹·d_q·D_q` with `D = diag(e^{h(x)})` over the basis labels.
pub fn gauge_conjugate(c: &BasedComplex<ExpPoly>, h: &BTreeMap<String, Gq>) -> Result<BasedComplex<ExpPoly>> {
  let shift = |label: &String| h.get(label).cloned().ok_or_else(|| Error::UnknownZero(label.clone()));
  let mut out = c.clone();
  for (q, d) in out.diffs.iter_mut().enumerate() {
    for i in 0..d.rows() {
      let hi = shift(&c.basis[q + 1][i])?;
      for j in 0..d.cols() {
        let hj = shift(&c.basis[q][j])?;
        let v = d.get(i, j).shift(&(hj - hi.clone()));
        d.set(i, j, v);
      }
    }
  }
  Ok(out)
}

/// A complex of free modules over a truncated Novikov ring. Each differential
/// is one rectangular series.
#[derive(Clone, Debug, PartialEq)]
pub struct NovikovComplex<C> {
  dims: Vec<usize>,
  diffs: Vec<NovikovSeries<C>>,
  basis: Vec<Vec<String>>,
  rank: usize,
  omega: Vec<Rat>,
  cap: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct NovikovDegreeCheck {
  pub degree: usize,
  pub zero: bool,
  /// Level through which the composite was determined.
  pub through_level: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NovikovDSquaredReport {
  pub degrees: Vec<NovikovDegreeCheck>,
}

impl NovikovDSquaredReport {
  pub fn holds(&self) -> bool { self.degrees.iter().all(|d| d.zero) }
}

impl<C: Ring> NovikovComplex<C> {
  pub fn new(dims: Vec<usize>, diffs: Vec<NovikovSeries<C>>, rank: usize, omega: Vec<Rat>, cap: Rat) -> Result<Self> {
    if omega.len() != rank {
      return Err(Error::RankMismatch { expected: rank, found: omega.len() });
    }
    if diffs.len() != dims.len().saturating_sub(1) {
      return Err(Error::ShapeMismatch("one differential per consecutive pair of degrees".into()));
    }
    for (q, d) in diffs.iter().enumerate() {
      if d.shape() != (dims[q + 1], dims[q]) {
        return Err(Error::ShapeMismatch(format!("δ_{q} has shape {:?}, expected {:?}", d.shape(), (dims[q + 1], dims[q]))));
      }
      if d.rank() != rank || d.omega() != omega.as_slice() {
        return Err(Error::ShapeMismatch(format!("δ_{q} lives over a different lattice")));
      }
    }
    let basis = default_basis(&dims);
    Ok(Self { dims, diffs, basis, rank, omega, cap })
  }

  pub fn with_basis(mut self, basis: Vec<Vec<String>>) -> Result<Self> {
    if basis.len() != self.dims.len() || basis.iter().zip(&self.dims).any(|(l, &n)| l.len() != n) {
      return Err(Error::ShapeMismatch("basis labels do not match the dimensions".into()));
    }
    self.basis = basis;
    Ok(self)
  }

  pub fn dims(&self) -> &[usize] { &self.dims }

  pub fn diffs(&self) -> &[NovikovSeries<C>] { &self.diffs }

  pub fn basis(&self) -> &[Vec<String>] { &self.basis }

  pub fn rank(&self) -> usize { self.rank }

  pub fn omega(&self) -> &[Rat] { &self.omega }

  pub fn cap(&self) -> &Rat { &self.cap }

  pub fn check_d_squared(&self) -> Result<NovikovDSquaredReport> {
    let mut degrees = Vec::new();
    for (q, w) in self.diffs.windows(2).enumerate() {
      let prod = w[1].convolve(&w[0], &self.cap)?;
      degrees.push(NovikovDegreeCheck { degree: q, zero: prod.is_zero(), through_level: rat_to_f64(prod.cap()) });
    }
    Ok(NovikovDSquaredReport { degrees })
  }

  /// The complex of constant terms (the coefficient at `γ = 0`).
  pub fn leading_complex(&self) -> BasedComplex<C> {
    let diffs = self.diffs.iter().map(NovikovSeries::constant_term).collect();
    BasedComplex { dims: self.dims.clone(), diffs, basis: self.basis.clone(), b: None }
  }

  pub fn try_map<D: Ring>(&self, f: impl Fn(&C) -> Option<D>) -> Option<NovikovComplex<D>> {
    let diffs: Option<Vec<_>> = self.diffs.iter().map(|d| d.try_map(&f)).collect();
    Some(NovikovComplex { dims: self.dims.clone(), diffs: diffs?, basis: self.basis.clone(), rank: self.rank, omega: self.omega.clone(), cap: self.cap.clone() })
  }
}

impl<C: Ring + ToExpPoly> NovikovComplex<C> {
  /// Applies `t^γ ↦ e^{⟨η,γ⟩}` entrywise.
  pub fn specialize(&self, w: &WeightSystem) -> Result<BasedComplex<ExpPoly>> {
    let diffs = self.diffs.iter().map(|d| d.specialize(w)).collect::<Result<Vec<_>>>()?;
    BasedComplex::new(self.dims.clone(), diffs)?.with_basis(self.basis.clone())
  }
}

impl NovikovComplex<ExpPoly> {
  /// The same complex over `ℚ(i)`; requires constant potentials offsets.
  pub fn exact_constants(&self) -> Option<NovikovComplex<Gq>> { self.try_map(ExpPoly::as_constant) }
}

/// Novikov complex of the counting data, with `e^{potential(y) − potential(x)}`
/// folded into each coefficient.
pub fn build_novikov_complex(counts: &InstantonCounts, w: &WeightSystem, cap: Rat) -> Result<NovikovComplex<ExpPoly>> {
  let top = counts.max_index();
  let by_index: Vec<Vec<String>> = (0..=top).map(|q| counts.zeros_of_index(q).into_iter().map(|z| z.id.clone()).collect()).collect();
  let dims: Vec<usize> = by_index.iter().map(Vec::len).collect();
  let (rank, omega) = (counts.rank(), counts.omega().to_vec());
  let mut diffs = Vec::new();
  for q in 0..top {
    let mut acc: BTreeMap<Gamma, Matrix<ExpPoly>> = BTreeMap::new();
    for (i, x) in by_index[q + 1].iter().enumerate() {
      for (j, y) in by_index[q].iter().enumerate() {
        let Some(per_pair) = counts.counts(x, y) else { continue };
        let offset = w.potential(y)?.clone() - w.potential(x)?.clone();
        for (g, &c) in per_pair {
          let m = acc.entry(g.clone()).or_insert_with(|| Matrix::zeros(dims[q + 1], dims[q]));
          m.set(i, j, m.get(i, j).clone() + ExpPoly::monomial(gq_int(c), offset.clone()));
        }
      }
    }
    diffs.push(NovikovSeries::from_terms(rank, omega.clone(), cap.clone(), (dims[q + 1], dims[q]), acc)?);
  }
  NovikovComplex::new(dims, diffs, rank, omega, cap)?.with_basis(by_index)
}

/// Whether specializing the Novikov complex reproduces the Morse differential exactly.
pub fn specialization_commutes(counts: &InstantonCounts, w: &WeightSystem, cap: Rat) -> Result<bool> {
  let nc = build_novikov_complex(counts, w, cap)?;
  let morse = build_morse_differential(counts, w, f64::INFINITY, true)?;
  Ok(nc.specialize(w)?.diffs == morse.diffs)
}
