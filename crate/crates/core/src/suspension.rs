//! Mapping-torus models: Lefschetz numbers, fixed points of toral
//! automorphisms, orbit counts of the suspension, zeta functions, and the
//! torsion/zeta identity on algebraic mapping tori.
//!
//! The lattice of a suspension is `ℤ` with `ω = (−1)`, so the level of `k` is
//! the winding number `k`.

use std::collections::BTreeSet;

use num::traits::{One, Signed, Zero};
use num::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexes::{BasedComplex, ChainMap, NovikovComplex};
use crate::counting::OrbitCounts;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::poly::{det_one_minus_z, Poly, RationalFunction};
use crate::sampling::{random_int_matrix, random_unimodular};
use crate::scalar::{fmt_rat, rat_int, Rat};
use crate::torsion::{novikov_torsion, Convention};
use crate::weights::Gamma;

/// `ω` for suspensions.
pub fn suspension_omega() -> Vec<Rat> { vec![rat_int(-1)] }

/// Input to the Lefschetz machinery.
#[derive(Clone, Debug, PartialEq)]
pub enum LefschetzData {
  /// Induced maps `φ_q` on homology, one integer matrix per degree.
  Maps(Vec<Matrix<Rat>>),
  /// Lefschetz numbers `L_1, L_2, …` given directly.
  List(Vec<BigInt>),
}

/// A hyperbolic automorphism of the 2-torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusAutomorphism {
  a: [[i64; 2]; 2],
}

type M2 = [[i128; 2]; 2];

fn mul2(x: &M2, y: &M2) -> M2 {
  let mut out = [[0i128; 2]; 2];
  for i in 0..2 {
    for j in 0..2 {
      out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    }
  }
  out
}

impl TorusAutomorphism {
  pub fn new(a: [[i64; 2]; 2]) -> Result<Self> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let tr = a[0][0] + a[1][1];
    if det.abs() != 1 {
      return Err(Error::NotHyperbolic(format!("determinant {det} is not ±1")));
    }
    if tr.abs() <= 2 {
      return Err(Error::NotHyperbolic(format!("trace {tr} has absolute value at most 2")));
    }
    Ok(Self { a })
  }

  pub fn cat_map() -> Self { Self { a: [[2, 1], [1, 1]] } }

  pub fn matrix(&self) -> [[i64; 2]; 2] { self.a }

  pub fn det(&self) -> i64 { self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0] }

  pub fn trace(&self) -> i64 { self.a[0][0] + self.a[1][1] }

  /// `A^k` in 128-bit arithmetic; `None` on overflow.
  pub fn power(&self, k: u32) -> Option<M2> {
    let base = self.a.map(|r| r.map(i128::from));
    let mut acc: M2 = [[1, 0], [0, 1]];
    for _ in 0..k {
      let next = mul2(&acc, &base);
      if next.iter().flatten().any(|x| x.unsigned_abs() > (1u128 << 100)) {
        return None;
      }
      acc = next;
    }
    Some(acc)
  }

  /// `φ₀ = (1)`, `φ₁ = A`, `φ₂ = (det A)` on the homology of the torus.
  pub fn homology_maps(&self) -> LefschetzData {
    let a = Matrix::from_fn(2, 2, |i, j| rat_int(self.a[i][j]));
    LefschetzData::Maps(vec![Matrix::scalar(rat_int(1)), a, Matrix::scalar(rat_int(self.det()))])
  }

  /// Largest eigenvalue modulus.
  pub fn dominant_eigenvalue(&self) -> f64 {
    let t = self.trace() as f64;
    let d = self.det() as f64;
    (t.abs() + (t * t - 4.0 * d).sqrt()) / 2.0
  }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
  let (mut a, mut b) = (a.abs(), b.abs());
  while b != 0 {
    (a, b) = (b, a % b);
  }
  a
}

fn fixed_point_matrix(a: &TorusAutomorphism, k: u32) -> Result<M2> {
  let p = a.power(k).ok_or_else(|| Error::Precondition(format!("A^{k} overflows 128-bit arithmetic")))?;
  let m = [[p[0][0] - 1, p[0][1]], [p[1][0], p[1][1] - 1]];
  if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
    return Err(Error::NotHyperbolic(format!("A^{k} − I is singular")));
  }
  Ok(m)
}

/// Elementary divisors `(d₁, d₂)` of `A^k − I`, with `d₁ | d₂`.
pub fn elementary_divisors(a: &TorusAutomorphism, k: u32) -> Result<(u128, u128)> {
  let m = fixed_point_matrix(a, k)?;
  let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).unsigned_abs();
  let d1 = gcd_i128(gcd_i128(m[0][0], m[0][1]), gcd_i128(m[1][0], m[1][1])).unsigned_abs();
  Ok((d1, det / d1))
}

/// Number of `x ∈ [0,1)²` with `(A^k − I)x ∈ ℤ²`: the order of
/// `ℤ²/(A^k − I)ℤ² ≅ ℤ/d₁ ⊕ ℤ/d₂`.
pub fn fixed_point_count(a: &TorusAutomorphism, k: u32) -> Result<u128> {
  let (d1, d2) = elementary_divisors(a, k)?;
  Ok(d1 * d2)
}

/// Enumerates the fixed points of `A^k` on `(1/N)ℤ² ∩ [0,1)²`, `N = |det(A^k − I)|`,
/// by testing every grid point. Quadratic in `N`; for small cases only.
pub fn enumerate_fixed_points(a: &TorusAutomorphism, k: u32) -> Result<Vec<(i128, i128)>> {
  let m = fixed_point_matrix(a, k)?;
  let n = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
  if n > 1 << 13 {
    return Err(Error::Precondition(format!("grid of size {n}² is too large to enumerate")));
  }
  let mut found = BTreeSet::new();
  for i in 0..n {
    for j in 0..n {
      if (m[0][0] * i + m[0][1] * j) % n == 0 && (m[1][0] * i + m[1][1] * j) % n == 0 {
        found.insert((i, j));
      }
    }
  }
  Ok(found.into_iter().collect())
}

/// `Σ_{x ∈ Fix(A^k)} ind_x(A^k)`: every fixed point has index `sign det(I − A^k)`.
pub fn fixed_point_index_sum(a: &TorusAutomorphism, k: u32) -> Result<BigInt> {
  let m = fixed_point_matrix(a, k)?;
  // det(I − A^k) = det(A^k − I) for 2×2
  Ok(BigInt::from(m[0][0] * m[1][1] - m[0][1] * m[1][0]))
}

/// `L_k = Σ_q (−1)^q tr(φ_q^k)` for `k = 1..=k_max`.
pub fn lefschetz_numbers(data: &LefschetzData, k_max: usize) -> Result<Vec<BigInt>> {
  match data {
    LefschetzData::List(l) => {
      if l.len() < k_max {
        return Err(Error::InsufficientData { needed: k_max, found: l.len() });
      }
      Ok(l[..k_max].to_vec())
    }
    LefschetzData::Maps(phis) => {
      let mut powers: Vec<Matrix<Rat>> = phis.iter().map(|p| Matrix::identity(p.rows())).collect();
      let mut out = Vec::with_capacity(k_max);
      for _ in 0..k_max {
        let mut l = Rat::zero();
        for (q, (pw, phi)) in powers.iter_mut().zip(phis).enumerate() {
          *pw = pw.mul(phi);
          if q % 2 == 0 { l += pw.trace() } else { l -= pw.trace() }
        }
        if !l.is_integer() {
          return Err(Error::Schema("homology maps must have integer entries".into()));
        }
        out.push(l.to_integer());
      }
      Ok(out)
    }
  }
}

/// Orbit counts of the suspension flow: `L_k / k` at `k ∈ ℤ`.
pub fn orbit_counts_from_map(data: &LefschetzData, k_max: usize) -> Result<OrbitCounts> {
  let mut counts = OrbitCounts::new(1, suspension_omega())?;
  for (i, l) in lefschetz_numbers(data, k_max)?.into_iter().enumerate() {
    let k = i as i64 + 1;
    counts.add(Gamma(vec![k]), Rat::new(l, BigInt::from(k)))?;
  }
  Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum Zeta {
  Rational(RationalFunction),
  /// Taylor coefficients `ζ_0..ζ_n` when only finitely many `L_k` are known.
  Series {
    #[serde(serialize_with = "ser_rats")]
    coefficients: Vec<Rat>,
  },
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> { s.collect_seq(v.iter().map(fmt_rat)) }

/// `ζ(z) = exp Σ L_k z^k / k`. Matrix data gives the reduced rational function
/// `∏_q det(I − zφ_q)^{(−1)^{q+1}}`; list data gives the series through `z^{len}`.
pub fn lefschetz_zeta(data: &LefschetzData) -> Result<Zeta> {
  match data {
    LefschetzData::Maps(phis) => {
      let (mut num, mut den) = (Poly::one(), Poly::one());
      for (q, phi) in phis.iter().enumerate() {
        let p = det_one_minus_z(phi);
        if q % 2 == 1 { num = num.mul(&p) } else { den = den.mul(&p) }
      }
      Ok(Zeta::Rational(RationalFunction::new(num, den)))
    }
    LefschetzData::List(l) => {
      let n = l.len();
      let mut log = vec![Rat::zero(); n + 1];
      for (i, lk) in l.iter().enumerate() {
        log[i + 1] = Rat::new(lk.clone(), BigInt::from(i as i64 + 1));
      }
      Ok(Zeta::Series { coefficients: exp_taylor(&log) })
    }
  }
}

/// Taylor coefficients of `exp(f)` for `f(0) = 0`, through the length of `f`.
fn exp_taylor(f: &[Rat]) -> Vec<Rat> {
  // E' = f'·E  ⇒  k·e_k = Σ_{j=1..k} j·f_j·e_{k−j}
  let mut e = vec![Rat::one()];
  for k in 1..f.len() {
    let mut acc = Rat::zero();
    for j in 1..=k {
      acc += rat_int(j as i64) * &f[j] * &e[k - j];
    }
    e.push(acc / rat_int(k as i64));
  }
  e
}

/// The homology complex of matrix data: zero differentials, `φ` as a chain map.
pub fn homology_chain_map(phis: &[Matrix<Rat>]) -> Result<ChainMap<Rat>> {
  let dims: Vec<usize> = phis.iter().map(Matrix::rows).collect();
  let diffs = dims.windows(2).map(|w| Matrix::zeros(w[1], w[0])).collect();
  let c = BasedComplex::new(dims, diffs)?;
  ChainMap::new(c.clone(), c, phis.to_vec())
}

/// Cone of `1 − t·φ` over `Λ = ℚ[[t]]`: `𝒞^q = D^{q−1} ⊕ D^q` with
/// differential `[[−d_{q−1}, 1 − tφ_q], [0, d_q]]`.
pub fn algebraic_mapping_torus(phi: &ChainMap<Rat>, cap: Rat) -> Result<NovikovComplex<Rat>> {
  let d = phi.source();
  if phi.target() != d {
    return Err(Error::Precondition("mapping torus needs a self-map".into()));
  }
  let n = d.degrees() as isize;
  let dims: Vec<usize> = (0..=n).map(|q| d.dim(q - 1) + d.dim(q)).collect();
  let omega = suspension_omega();
  let map = |q: isize| -> Matrix<Rat> {
    if q >= 0 && q < n { phi.maps()[q as usize].clone() } else { Matrix::zeros(d.dim(q), d.dim(q)) }
  };
  let mut diffs = Vec::new();
  for q in 0..n {
    let (a, b, c) = (d.dim(q - 1), d.dim(q), d.dim(q + 1));
    let lead = Matrix::block(&d.diff(q - 1).neg(), &Matrix::identity(b), &Matrix::zeros(c, a), &d.diff(q));
    let shift = Matrix::block(&Matrix::zeros(b, a), &map(q).neg(), &Matrix::zeros(c, a), &Matrix::zeros(c, b));
    let terms = [(Gamma(vec![0]), lead), (Gamma(vec![1]), shift)];
    diffs.push(NovikovSeries::from_terms(1, omega.clone(), cap.clone(), (b + c, a + b), terms)?);
  }
  let basis = (0..=n)
    .map(|q| {
      let shifted = if q >= 1 { d.basis()[q as usize - 1].iter().map(|l| format!("shift:{l}")).collect() } else { Vec::new() };
      let base: Vec<String> = if q < n { d.basis()[q as usize].clone() } else { Vec::new() };
      [shifted, base].concat()
    })
    .collect();
  NovikovComplex::new(dims, diffs, 1, omega, cap.clone())?.with_basis(basis)
}

/// Outcome of comparing torsion and zeta through a truncation level.
#[derive(Clone, Debug, Serialize)]
pub struct TorReport {
  pub truncation: usize,
  pub passed: bool,
  /// Whether the representatives agree before squaring.
  pub representatives_agree: bool,
  /// Lowest level where the squared series differ.
  pub first_mismatch: Option<usize>,
  #[serde(serialize_with = "ser_rats")]
  pub lefschetz: Vec<Rat>,
  #[serde(serialize_with = "ser_rats")]
  pub torsion: Vec<Rat>,
  #[serde(serialize_with = "ser_rats")]
  pub zeta: Vec<Rat>,
}

fn coefficients(s: &NovikovSeries<Rat>, k: usize) -> Vec<Rat> {
  (0..=k as i64).map(|j| s.coeff(&Gamma(vec![j])).map(|m| m.get(0, 0).clone()).unwrap_or_else(Rat::zero)).collect()
}

/// Torsion of the algebraic mapping torus against `exp Σ_{k≤K} L_k t^k / k`,
/// compared after squaring, exactly through level `K`.
pub fn verify_theorem_tor(phi: &ChainMap<Rat>, k: usize) -> Result<TorReport> {
  let cap = rat_int(k as i64);
  let torus = algebraic_mapping_torus(phi, cap.clone())?;
  let s1 = novikov_torsion(&torus, &cap, Convention::ConeInverse)?;
  let data = LefschetzData::Maps(phi.maps().to_vec());
  let lefschetz: Vec<Rat> = lefschetz_numbers(&data, k)?.into_iter().map(Rat::from_integer).collect();
  let log = NovikovSeries::scalar_from(1, suspension_omega(), cap.clone(), lefschetz.iter().enumerate().map(|(i, l)| (Gamma(vec![i as i64 + 1]), l / rat_int(i as i64 + 1))))?;
  let s2 = log.exp_series(&cap)?;
  let sq1 = s1.convolve(&s1, &cap)?;
  let sq2 = s2.convolve(&s2, &cap)?;
  let (c1, c2) = (coefficients(&sq1, k), coefficients(&sq2, k));
  let first_mismatch = (0..=k).find(|&j| c1[j] != c2[j]);
  Ok(TorReport {
    truncation: k,
    passed: first_mismatch.is_none() && sq1.cap() >= &cap && sq2.cap() >= &cap,
    representatives_agree: s1.agrees_through(&s2, &cap),
    first_mismatch,
    lefschetz,
    torsion: coefficients(&s1, k),
    zeta: coefficients(&s2, k),
  })
}

fn within(m: &Matrix<Rat>, bound: i64) -> bool { m.entries().iter().all(|x| x.is_integer() && x.abs() <= rat_int(bound)) }

/// A random integer chain self-map `φ` on a random integer complex, every
/// degree of dimension at most `max_dim` and all entries in `[−bound, bound]`.
///
/// The complex starts in standard form (homology ⊕ boundaries ⊕ their
/// preimages) and `φ = G + dh + hd`, where `G` acts on homology and into the
/// boundaries; both are then conjugated by random unimodular matrices.
pub fn random_chain_self_map(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> ChainMap<Rat> {
  loop {
    let degrees = rng.gen_range(1..=3usize);
    let mut h = Vec::new();
    let mut c = Vec::new();
    for q in 0..degrees {
      h.push(rng.gen_range(0..=2usize));
      c.push(if q + 1 < degrees { rng.gen_range(0..=1usize) } else { 0 });
    }
    let b: Vec<usize> = (0..degrees).map(|q| if q > 0 { c[q - 1] } else { 0 }).collect();
    let dims: Vec<usize> = (0..degrees).map(|q| b[q] + h[q] + c[q]).collect();
    if dims.iter().any(|&n| n > max_dim) || dims.iter().all(|&n| n == 0) {
      continue;
    }
    // basis order per degree: [boundaries | homology | preimages]
    let diffs: Vec<Matrix<Rat>> = (0..degrees - 1)
      .map(|q| Matrix::from_fn(dims[q + 1], dims[q], |i, j| if i < b[q + 1] && j >= b[q] + h[q] && i == j - b[q] - h[q] { rat_int(1) } else { rat_int(0) }))
      .collect();
    let g: Vec<Matrix<Rat>> = (0..degrees)
      .map(|q| {
        let mut m = Matrix::zeros(dims[q], dims[q]);
        for i in 0..b[q] + h[q] {
          for j in b[q]..b[q] + h[q] {
            m.set(i, j, rat_int(rng.gen_range(if i < b[q] { -1..=1 } else { -2..=2 })));
          }
        }
        m
      })
      .collect();
    let homotopy: Vec<Matrix<Rat>> = (0..degrees).map(|q| if q == 0 { Matrix::zeros(0, dims[0]) } else { random_int_matrix(rng, dims[q - 1], dims[q], 1) }).collect();
    let cx = match BasedComplex::new(dims.clone(), diffs) {
      Ok(cx) => cx,
      Err(_) => continue,
    };
    let phi: Vec<Matrix<Rat>> = (0..degrees)
      .map(|q| {
        let mut m = g[q].clone();
        if q > 0 {
          m = m.add(&cx.diff(q as isize - 1).mul(&homotopy[q]));
        }
        if q + 1 < degrees {
          m = m.add(&homotopy[q + 1].mul(&cx.diff(q as isize)));
        }
        m
      })
      .collect();
    let u: Vec<Matrix<Rat>> = dims.iter().map(|&n| random_unimodular(rng, n)).collect();
    let u_inv: Vec<Matrix<Rat>> = u.iter().map(|m| m.inverse().expect("unimodular")).collect();
    let diffs2: Vec<Matrix<Rat>> = (0..degrees - 1).map(|q| u[q + 1].mul(&cx.diffs()[q]).mul(&u_inv[q])).collect();
    let phi2: Vec<Matrix<Rat>> = (0..degrees).map(|q| u[q].mul(&phi[q]).mul(&u_inv[q])).collect();
    if !phi2.iter().chain(&diffs2).all(|m| within(m, bound)) {
      continue;
    }
    let cx2 = BasedComplex::new(dims, diffs2).expect("shapes are preserved");
    return ChainMap::new(cx2.clone(), cx2, phi2).expect("conjugate of a chain map is a chain map");
  }
}

/// `L_k` of the cat map by the trace recurrence `t_{k+1} = 3t_k − t_{k−1}`.
pub fn cat_map_lefschetz(k_max: usize) -> Vec<BigInt> {
  let (mut prev, mut cur) = (BigInt::from(2), BigInt::from(3));
  let mut out = Vec::with_capacity(k_max);
  for _ in 0..k_max {
    out.push(BigInt::from(2) - &cur);
    let next = BigInt::from(3) * &cur - &prev;
    prev = cur;
    cur = next;
  }
  out
}
