//! Float linear algebra backed by nalgebra: SVD ranks, eigenvalues, and the
//! contour-integral spectral projector.

use nalgebra::DMatrix;

use crate::matrix::Matrix;
use crate::scalar::C64;
use crate::tolerances;

pub fn to_na(m: &Matrix<C64>) -> DMatrix<C64> { DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j)) }

pub fn from_na(m: &DMatrix<C64>) -> Matrix<C64> { Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]) }

/// Singular values in descending order.
pub fn singular_values(m: &Matrix<C64>) -> Vec<f64> {
  if m.rows() == 0 || m.cols() == 0 {
    return Vec::new();
  }
  let svd = nalgebra::SVD::new(to_na(m), false, false);
  let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
  s.sort_by(|a, b| b.total_cmp(a));
  s
}

pub fn rank(m: &Matrix<C64>) -> usize {
  let s = singular_values(m);
  let Some(&top) = s.first() else { return 0 };
  if top == 0.0 {
    return 0;
  }
  s.iter().filter(|&&x| x > tolerances::RANK_REL * top).count()
}

/// Orthonormal basis (columns) for the range of `m`, assumed to have rank `k`
/// with a wide gap below its `k` largest singular values (as for projectors).
///
/// Uses column-pivoted QR; nalgebra's complex SVD can return inaccurate left
/// singular vectors for nearly real rank-deficient input.
pub fn dominant_range(m: &Matrix<C64>, k: usize) -> Matrix<C64> {
  let n = m.rows();
  if k == 0 || m.cols() == 0 {
    return Matrix::zeros(n, 0);
  }
  let q = to_na(m).col_piv_qr().q();
  Matrix::from_fn(n, k, |i, j| q[(i, j)])
}

/// Eigenvalues of a square complex matrix via the complex Schur form.
pub fn eigenvalues(m: &Matrix<C64>) -> Vec<C64> {
  assert!(m.is_square());
  if m.rows() == 0 {
    return Vec::new();
  }
  let (_, t) = nalgebra::Schur::new(to_na(m)).unpack();
  (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Inverse by LU with partial pivoting. nalgebra's `try_inverse` switches to
/// cofactor formulas up to 4×4, which lose accuracy on ill-conditioned input.
pub fn inverse(m: &Matrix<C64>) -> Option<Matrix<C64>> { to_na(m).lu().try_inverse().map(|x| from_na(&x)) }

/// Riesz projector onto the generalized eigenspaces of `m` with `|λ| < radius`,
/// evaluated by the trapezoidal rule on the circle `|z| = radius`.
///
/// `inner` and `outer` bound the moduli of the inside and outside eigenvalues;
/// the node count is chosen so the geometric quadrature error falls below
/// [`tolerances::PROJECTOR_ACCURACY`].
pub fn riesz_projector(m: &Matrix<C64>, radius: f64, inner: f64, outer: f64) -> Matrix<C64> {
  let n = m.rows();
  let ratio = (inner / radius).max(if outer.is_finite() { radius / outer } else { 0.0 });
  let nodes = if ratio <= 0.0 {
    16
  } else {
    let needed = (tolerances::PROJECTOR_ACCURACY.ln() / ratio.ln()).ceil() as usize;
    needed.clamp(16, tolerances::PROJECTOR_MAX_NODES)
  };
  let a = to_na(m);
  let mut acc = DMatrix::<C64>::zeros(n, n);
  for k in 0..nodes {
    let theta = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
    let z = C64::from_polar(radius, theta);
    let shifted = DMatrix::<C64>::identity(n, n) * z - &a;
    let resolvent = shifted.lu().try_inverse().expect("contour avoids the spectrum");
    // (1/2πi)∮ R(z) dz with dz = i z dθ reduces to the mean of z·R(z).
    acc += resolvent * z;
  }
  acc /= C64::new(nodes as f64, 0.0);
  from_na(&acc)
}

#[cfg(test)]
mod tests {
  use super::*;

  fn c(x: f64) -> C64 { C64::new(x, 0.0) }

  #[test]
  fn projector_of_diagonal() {
    let m = Matrix::diagonal(vec![c(0.0), c(3.0)]);
    let p = riesz_projector(&m, 1.0, 0.0, 3.0);
    assert!((p.get(0, 0) - c(1.0)).norm() < 1e-13);
    assert!(p.get(1, 1).norm() < 1e-13);
  }

  #[test]
  fn projector_handles_jordan_block_at_zero() {
    let m = Matrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]);
    let p = riesz_projector(&m, 1.0, 0.0, f64::INFINITY);
    assert!((p.get(0, 0) - c(1.0)).norm() < 1e-13);
    assert!((p.get(1, 1) - c(1.0)).norm() < 1e-13);
    assert!(p.get(0, 1).norm() < 1e-13);
  }

  #[test]
  fn range_of_nearly_real_rank_one_projector() {
    let p = Matrix::from_rows(vec![
      vec![C64::new(0.38969245740936514, -2.68e-17), C64::new(-0.5394874504500405, 3.77e-17)],
      vec![C64::new(-0.44084852362963123, 2.58e-17), C64::new(0.6103075425906324, -4.06e-17)],
    ]);
    let q = Matrix::<C64>::identity(2).sub(&p);
    for m in [&p, &q] {
      let u = dominant_range(m, 1);
      assert!(m.mul(&u).sub(&u).max_magnitude() < 1e-12);
    }
  }

  #[test]
  fn eigenvalues_of_triangular() {
    let m = Matrix::from_rows(vec![vec![c(2.0), c(1.0)], vec![c(0.0), c(5.0)]]);
    let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] - 2.0).abs() < 1e-12 && (ev[1] - 5.0).abs() < 1e-12);
  }
}
