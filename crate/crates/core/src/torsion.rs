//! Torsion of acyclic based complexes, over a field and over truncated Novikov rings.
//!
//! The contraction algorithm: walking up the degrees, `B_q = d_{q−1}(e_{S_{q−1}})`
//! is extended greedily by standard basis vectors `e_{S_q}` to a basis of
//! degree `q`, and the torsion is the alternating product of the transition
//! determinants `det[B_q | e_{S_q}]`.

use serde::Serialize;

use crate::complexes::{BasedComplex, ChainMap, NovikovComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::scalar::{Field, Rat};
use crate::weights::Gamma;

/// Sign and exponent conventions for torsion representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
  /// `∏_q det[B_q | e_{S_q}]^{(−1)^{q+1}}`; the two-term complex `D` gives `det D`.
  MilnorDet,
  /// The inverse of `MilnorDet`. Used for cones, so that the cone of
  /// `1 − a·t` gives `(1 − a·t)⁻¹` and the identity map gives 1.
  ConeInverse,
}

impl Convention {
  pub fn id(self) -> &'static str {
    match self {
      Convention::MilnorDet => "milnor-det",
      Convention::ConeInverse => "cone-inverse",
    }
  }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue<F> {
  pub squared: F,
  pub representative: Option<F>,
  pub convention: Convention,
}

impl<F: Field> TorsionValue<F> {
  fn from_representative(r: F, convention: Convention) -> Self {
    Self { squared: r.clone() * r.clone(), representative: Some(r), convention }
  }
}

/// Chooses `S_q` for every degree; fails at the first degree where the
/// complex is not exact.
fn select_bases<F: Field>(c: &BasedComplex<F>) -> Result<Vec<Vec<usize>>> {
  let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(c.degrees());
  for q in 0..c.degrees() {
    let n = c.dims()[q];
    let image = if q == 0 { Matrix::zeros(n, 0) } else { c.diffs()[q - 1].select_cols(&chosen[q - 1]) };
    let k = image.cols();
    let pivots = image.hstack(&Matrix::identity(n)).pivot_columns();
    if pivots.len() < k || pivots[..k].iter().enumerate().any(|(i, &p)| p != i) {
      return Err(Error::NotAcyclic { degree: q });
    }
    let s: Vec<usize> = pivots[k..].iter().map(|p| p - k).collect();
    if q + 1 == c.degrees() && !s.is_empty() {
      return Err(Error::NotAcyclic { degree: q });
    }
    chosen.push(s);
  }
  Ok(chosen)
}

fn transition_matrix<F: Field>(c: &BasedComplex<F>, chosen: &[Vec<usize>], q: usize) -> Matrix<F> {
  let n = c.dims()[q];
  let image = if q == 0 { Matrix::zeros(n, 0) } else { c.diffs()[q - 1].select_cols(&chosen[q - 1]) };
  image.hstack(&Matrix::<F>::identity(n).select_cols(&chosen[q]))
}

/// Torsion of an acyclic complex under `convention`.
pub fn torsion_with<F: Field>(c: &BasedComplex<F>, convention: Convention) -> Result<TorsionValue<F>> {
  if let Some(bad) = c.check_d_squared().degrees.iter().find(|d| !d.zero) {
    return Err(Error::NotAComplex { degree: bad.degree });
  }
  let chosen = select_bases(c)?;
  let mut value = F::one();
  for q in 0..c.degrees() {
    let det = transition_matrix(c, &chosen, q).det();
    value = if q % 2 == 1 { value * det } else { value / det };
  }
  if convention == Convention::ConeInverse {
    value = value.inv();
  }
  Ok(TorsionValue::from_representative(value, convention))
}

pub fn milnor_torsion<F: Field>(c: &BasedComplex<F>) -> Result<TorsionValue<F>> { torsion_with(c, Convention::MilnorDet) }

/// `∏_q (det B_q)^{(−1)^{q+1}·q}`, the squared torsion from the b-Laplacian.
pub fn torsion_via_laplacian<F: Field>(c: &BasedComplex<F>) -> Result<F> {
  let lap = c.b_laplacian()?;
  let mut value = F::one();
  for (q, b) in lap.iter().enumerate() {
    if b.rank() < b.rows() {
      return Err(Error::SingularLaplacian { degree: q });
    }
    let det = b.det();
    let e = if q % 2 == 1 { q as i64 } else { -(q as i64) };
    value = value * det.powi(e);
  }
  Ok(value)
}

/// Torsion of the mapping cone under the cone convention.
pub fn relative_torsion<F: Field>(f: &ChainMap<F>) -> Result<TorsionValue<F>> { torsion_with(&f.mapping_cone(), Convention::ConeInverse) }

/// Scalar series `det m` by elimination over the truncated ring.
fn series_det<F: Field>(m: &NovikovSeries<F>, k: &Rat) -> Result<NovikovSeries<F>> {
  let n = m.shape().0;
  let mut a: Vec<Vec<NovikovSeries<F>>> = (0..n).map(|i| (0..n).map(|j| m.entry(i, j)).collect()).collect();
  let mut det = NovikovSeries::one(m.rank(), m.omega().to_vec(), k.clone(), 1);
  for j in 0..n {
    let lead = |s: &NovikovSeries<F>| s.constant_term().get(0, 0).clone();
    let scale = (j..n).map(|i| lead(&a[i][j]).magnitude()).fold(0.0, f64::max);
    let p = (j..n).find(|&i| !lead(&a[i][j]).is_negligible(scale)).ok_or(Error::SingularLeading)?;
    if p != j {
      a.swap(p, j);
      det = det.neg();
    }
    let inv = a[j][j].invert(k)?;
    det = det.convolve(&a[j][j], k)?;
    for i in j + 1..n {
      let factor = a[i][j].convolve(&inv, k)?;
      if factor.is_zero() {
        continue;
      }
      for l in j..n {
        let update = factor.convolve(&a[j][l], k)?;
        a[i][l] = a[i][l].sub(&update)?;
      }
    }
  }
  Ok(det.truncate(k))
}

/// Torsion over the truncated ring, as a scalar unit series through level `k`.
///
/// Entries of every differential must lie in the closed positive part
/// (a constant term plus terms at positive level); the complement bases are
/// chosen on the complex of constant terms, which must be acyclic.
pub fn novikov_torsion<F: Field>(c: &NovikovComplex<F>, k: &Rat, convention: Convention) -> Result<NovikovSeries<F>> {
  for (q, d) in c.diffs().iter().enumerate() {
    if !d.is_unit_form() {
      return Err(Error::SupportViolation(format!("δ_{q} has terms at non-positive level other than γ = 0")));
    }
  }
  let chosen = select_bases(&c.leading_complex())?;
  let dims = c.dims();
  let (rank, omega) = (c.rank(), c.omega().to_vec());
  let mut value = NovikovSeries::one(rank, omega.clone(), k.clone(), 1);
  for q in 0..dims.len() {
    let n = dims[q];
    let mut unit = Matrix::zeros(n, n);
    let offset = if q == 0 { 0 } else { chosen[q - 1].len() };
    for (j, &s) in chosen[q].iter().enumerate() {
      unit.set(s, offset + j, F::one());
    }
    let mut m = NovikovSeries::from_terms(rank, omega.clone(), k.clone(), (n, n), [(Gamma::zero(rank), unit)])?;
    if q > 0 {
      let mut selector = Matrix::zeros(dims[q - 1], n);
      for (i, &s) in chosen[q - 1].iter().enumerate() {
        selector.set(s, i, F::one());
      }
      m = m.add(&c.diffs()[q - 1].right_mul(&selector).with_cap(k.clone().min(c.diffs()[q - 1].cap().clone())))?;
    }
    let det = series_det(&m, k)?;
    let odd = q % 2 == 1;
    let factor = if odd == (convention == Convention::MilnorDet) { det } else { det.invert(k)? };
    value = value.convolve(&factor, k)?;
  }
  Ok(value.truncate(k))
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalar::{gq_int, rat, rat_int, Gq, C64};
  use crate::weights::WeightSystem;

  fn two_term(d: Matrix<Rat>) -> BasedComplex<Rat> {
    let n = d.rows();
    BasedComplex::new(vec![n, n], vec![d]).unwrap()
  }

  #[test]
  fn milnor_examples() {
    assert_eq!(milnor_torsion(&two_term(Matrix::scalar(rat_int(5)))).unwrap().representative, Some(rat_int(5)));
    assert_eq!(milnor_torsion(&two_term(Matrix::identity(3))).unwrap().representative, Some(rat_int(1)));
    let three = BasedComplex::new(
      vec![1, 2, 1],
      vec![Matrix::from_rows(vec![vec![rat_int(1)], vec![rat_int(0)]]), Matrix::from_rows(vec![vec![rat_int(0), rat_int(1)]])],
    )
    .unwrap();
    assert_eq!(milnor_torsion(&three).unwrap().squared, rat_int(1));
    let d = Matrix::from_rows(vec![vec![rat_int(1), rat_int(2)], vec![rat_int(3), rat_int(4)]]);
    assert_eq!(milnor_torsion(&two_term(d)).unwrap().representative, Some(rat_int(-2)));
  }

  #[test]
  fn non_acyclic_is_rejected() {
    let z = two_term(Matrix::zeros(1, 1));
    assert_eq!(milnor_torsion(&z), Err(Error::NotAcyclic { degree: 1 }));
  }

  #[test]
  fn laplacian_examples() {
    let five = two_term(Matrix::scalar(rat_int(5))).with_form(vec![Matrix::identity(1), Matrix::identity(1)]).unwrap();
    assert_eq!(torsion_via_laplacian(&five).unwrap(), rat_int(25));
    let id = two_term(Matrix::identity(2)).with_form(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
    assert_eq!(torsion_via_laplacian(&id).unwrap(), rat_int(1));

    let (a, c) = (rat(3, 2), rat(-7, 5));
    let three = BasedComplex::new(
      vec![1, 2, 1],
      vec![Matrix::from_rows(vec![vec![a.clone()], vec![rat_int(0)]]), Matrix::from_rows(vec![vec![rat_int(0), c.clone()]])],
    )
    .unwrap()
    .with_form(vec![Matrix::identity(1), Matrix::identity(2), Matrix::identity(1)])
    .unwrap();
    assert_eq!(torsion_via_laplacian(&three).unwrap(), milnor_torsion(&three).unwrap().squared);
  }

  #[test]
  fn relative_examples() {
    let one = BasedComplex::<Rat>::new(vec![1], vec![]).unwrap();
    let id = ChainMap::identity(&two_term(Matrix::scalar(rat_int(4))));
    assert_eq!(relative_torsion(&id).unwrap().representative, Some(rat_int(1)));
    let a = ChainMap::new(one.clone(), one, vec![Matrix::scalar(rat_int(7))]).unwrap();
    assert_eq!(relative_torsion(&a).unwrap().representative, Some(rat(1, 7)));
    let two = BasedComplex::<Rat>::new(vec![2], vec![]).unwrap();
    let f = ChainMap::new(two.clone(), two, vec![Matrix::diagonal(vec![rat_int(2), rat_int(3)])]).unwrap();
    assert_eq!(relative_torsion(&f).unwrap().squared, rat(1, 36));
  }

  fn scalar_complex(terms: &[(i64, i64)], cap: i64) -> NovikovComplex<Gq> {
    let d = NovikovSeries::scalar_from(1, vec![rat_int(-1)], rat_int(cap), terms.iter().map(|&(g, c)| (Gamma(vec![g]), gq_int(c)))).unwrap();
    NovikovComplex::new(vec![1, 1], vec![d], 1, vec![rat_int(-1)], rat_int(cap)).unwrap()
  }

  #[test]
  fn novikov_examples() {
    let k = rat_int(4);
    let t = novikov_torsion(&scalar_complex(&[(0, 1), (1, -1)], 4), &k, Convention::ConeInverse).unwrap();
    let expected = NovikovSeries::scalar_from(1, vec![rat_int(-1)], k.clone(), (0..=4).map(|j| (Gamma(vec![j]), gq_int(1)))).unwrap();
    assert!(t.agrees_through(&expected, &k));

    assert!(novikov_torsion(&scalar_complex(&[(0, 1)], 4), &k, Convention::ConeInverse).unwrap().is_one());

    // at t = 1/2 the truncated series is within 2^{-4} of 1/(1 − 1/2)
    let half = WeightSystem::from_class(vec![crate::scalar::gq_real(crate::scalar::rat_from_f64(-std::f64::consts::LN_2).unwrap())]);
    let v = t.evaluate(&half, 1e-6).unwrap().scalar();
    assert!((v - C64::new(2.0, 0.0)).norm() <= 2f64.powi(-4) + 1e-12);

    assert_eq!(novikov_torsion(&scalar_complex(&[(1, 1)], 4), &k, Convention::ConeInverse), Err(Error::NotAcyclic { degree: 1 }));
  }

  #[test]
  fn novikov_torsion_matches_field_torsion_on_constants() {
    let d = Matrix::from_rows(vec![vec![gq_int(2), gq_int(1)], vec![gq_int(1), gq_int(3)]]);
    let series = NovikovSeries::from_terms(1, vec![rat_int(-1)], rat_int(3), (2, 2), [(Gamma(vec![0]), d.clone())]).unwrap();
    let nc = NovikovComplex::new(vec![2, 2], vec![series], 1, vec![rat_int(-1)], rat_int(3)).unwrap();
    let t = novikov_torsion(&nc, &rat_int(3), Convention::MilnorDet).unwrap();
    assert_eq!(t.constant_term().get(0, 0), &gq_int(5));
    assert_eq!(t.len(), 1);
  }
}
