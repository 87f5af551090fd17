//! Small dense matrices over a [`Ring`], with elimination routines over a [`Field`].

use std::fmt;

use num::traits::Zero;

use crate::numeric;
use crate::scalar::{Field, Ring, C64};

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
  rows: usize,
  cols: usize,
  data: Vec<R>,
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let rows: Vec<&[R]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
    f.debug_list().entries(rows).finish()
  }
}

impl<R: Ring> Matrix<R> {
  pub fn zeros(rows: usize, cols: usize) -> Self { Self { rows, cols, data: vec![R::zero(); rows * cols] } }

  pub fn identity(n: usize) -> Self {
    let mut m = Self::zeros(n, n);
    for i in 0..n {
      m.data[i * n + i] = R::one();
    }
    m
  }

  pub fn scalar(value: R) -> Self { Self { rows: 1, cols: 1, data: vec![value] } }

  pub fn diagonal(values: Vec<R>) -> Self {
    let n = values.len();
    let mut m = Self::zeros(n, n);
    for (i, v) in values.into_iter().enumerate() {
      m.data[i * n + i] = v;
    }
    m
  }

  /// Builds a matrix from row vectors; panics on ragged input.
  pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
    Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
  }

  pub fn from_vec(rows: usize, cols: usize, data: Vec<R>) -> Self {
    assert_eq!(data.len(), rows * cols);
    Self { rows, cols, data }
  }

  pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
      for j in 0..cols {
        data.push(f(i, j));
      }
    }
    Self { rows, cols, data }
  }

  pub fn column(v: Vec<R>) -> Self { Self { rows: v.len(), cols: 1, data: v } }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn shape(&self) -> (usize, usize) { (self.rows, self.cols) }

  pub fn is_square(&self) -> bool { self.rows == self.cols }

  pub fn get(&self, i: usize, j: usize) -> &R { &self.data[i * self.cols + j] }

  pub fn set(&mut self, i: usize, j: usize, v: R) { self.data[i * self.cols + j] = v; }

  pub fn entries(&self) -> &[R] { &self.data }

  pub fn row(&self, i: usize) -> Vec<R> { self.data[i * self.cols..(i + 1) * self.cols].to_vec() }

  pub fn col(&self, j: usize) -> Vec<R> { (0..self.rows).map(|i| self.get(i, j).clone()).collect() }

  pub fn to_rows(&self) -> Vec<Vec<R>> { (0..self.rows).map(|i| self.row(i)).collect() }

  pub fn is_zero(&self) -> bool { self.data.iter().all(Zero::is_zero) }

  pub fn transpose(&self) -> Self { Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()) }

  pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
    Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
  }

  pub fn mul(&self, rhs: &Self) -> Self {
    assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch {:?} x {:?}", self.shape(), rhs.shape());
    let mut out = Self::zeros(self.rows, rhs.cols);
    for i in 0..self.rows {
      for k in 0..self.cols {
        let a = self.get(i, k);
        if a.is_zero() {
          continue;
        }
        for j in 0..rhs.cols {
          let b = rhs.get(k, j);
          if b.is_zero() {
            continue;
          }
          let idx = i * rhs.cols + j;
          out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
        }
      }
    }
    out
  }

  pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
    assert_eq!(self.cols, v.len());
    (0..self.rows)
      .map(|i| (0..self.cols).fold(R::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
      .collect()
  }

  pub fn add(&self, rhs: &Self) -> Self {
    assert_eq!(self.shape(), rhs.shape());
    Self {
      rows: self.rows,
      cols: self.cols,
      data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
    }
  }

  pub fn sub(&self, rhs: &Self) -> Self {
    assert_eq!(self.shape(), rhs.shape());
    Self {
      rows: self.rows,
      cols: self.cols,
      data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
    }
  }

  pub fn neg(&self) -> Self { self.map(|a| -a.clone()) }

  pub fn scale(&self, s: &R) -> Self { self.map(|a| s.clone() * a.clone()) }

  pub fn trace(&self) -> R {
    assert!(self.is_square());
    (0..self.rows).fold(R::zero(), |acc, i| acc + self.get(i, i).clone())
  }

  pub fn pow(&self, k: u32) -> Self {
    assert!(self.is_square());
    let mut acc = Self::identity(self.rows);
    for _ in 0..k {
      acc = acc.mul(self);
    }
    acc
  }

  /// Sub-matrix with the given columns, in order.
  pub fn select_cols(&self, cols: &[usize]) -> Self {
    Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
  }

  pub fn hstack(&self, rhs: &Self) -> Self {
    assert_eq!(self.rows, rhs.rows);
    Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
      if j < self.cols { self.get(i, j).clone() } else { rhs.get(i, j - self.cols).clone() }
    })
  }

  /// Block matrix `[[a, b], [c, d]]`.
  pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
    assert_eq!(a.rows, b.rows);
    assert_eq!(c.rows, d.rows);
    assert_eq!(a.cols, c.cols);
    assert_eq!(b.cols, d.cols);
    Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
      (true, true) => a.get(i, j).clone(),
      (true, false) => b.get(i, j - a.cols).clone(),
      (false, true) => c.get(i - a.rows, j).clone(),
      (false, false) => d.get(i - a.rows, j - a.cols).clone(),
    })
  }

  pub fn max_magnitude(&self) -> f64 { self.data.iter().map(Ring::magnitude).fold(0.0, f64::max) }

  /// Max-row-sum operator norm of the entry magnitudes.
  pub fn row_sum_norm(&self) -> f64 {
    (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().map(Ring::magnitude).sum()).fold(0.0, f64::max)
  }

  pub fn to_c64(&self) -> Matrix<C64> { self.map(Ring::to_c64) }
}

/// Result of Gauss–Jordan elimination.
struct Echelon<F> {
  reduced: Matrix<F>,
  pivots: Vec<usize>,
  swaps: usize,
  pivot_product: F,
}

impl<F: Field> Matrix<F> {
  fn echelon(&self) -> Echelon<F> {
    let mut m = self.clone();
    let scale = self.max_magnitude();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut pivot_product = F::one();
    let mut row = 0;
    for col in 0..m.cols {
      if row == m.rows {
        break;
      }
      let candidate = if F::EXACT {
        (row..m.rows).find(|&i| !m.get(i, col).is_zero())
      } else {
        (row..m.rows)
          .max_by(|&a, &b| m.get(a, col).magnitude().total_cmp(&m.get(b, col).magnitude()))
          .filter(|&i| !m.get(i, col).is_negligible(scale))
      };
      let Some(p) = candidate else { continue };
      if p != row {
        m.swap_rows(p, row);
        swaps += 1;
      }
      let pivot = m.get(row, col).clone();
      pivot_product = pivot_product * pivot.clone();
      let inv = pivot.inv();
      for j in 0..m.cols {
        let v = m.get(row, j).clone() * inv.clone();
        m.set(row, j, v);
      }
      for i in 0..m.rows {
        if i == row {
          continue;
        }
        let factor = m.get(i, col).clone();
        if factor.is_zero() {
          continue;
        }
        for j in 0..m.cols {
          let v = m.get(i, j).clone() - factor.clone() * m.get(row, j).clone();
          m.set(i, j, v);
        }
      }
      pivots.push(col);
      row += 1;
    }
    Echelon { reduced: m, pivots, swaps, pivot_product }
  }

  fn swap_rows(&mut self, a: usize, b: usize) {
    for j in 0..self.cols {
      self.data.swap(a * self.cols + j, b * self.cols + j);
    }
  }

  /// Rank: exact elimination for exact fields, singular-value threshold otherwise.
  pub fn rank(&self) -> usize {
    if self.rows == 0 || self.cols == 0 {
      return 0;
    }
    if F::EXACT { self.echelon().pivots.len() } else { numeric::rank(&self.to_c64()) }
  }

  pub fn det(&self) -> F {
    assert!(self.is_square(), "determinant of non-square matrix");
    if self.rows == 0 {
      return F::one();
    }
    let e = self.echelon();
    if e.pivots.len() < self.rows {
      return F::zero();
    }
    if e.swaps % 2 == 1 { -e.pivot_product } else { e.pivot_product }
  }

  pub fn inverse(&self) -> Option<Self> {
    if !self.is_square() {
      return None;
    }
    let n = self.rows;
    if n == 0 {
      return Some(Self::zeros(0, 0));
    }
    let aug = self.hstack(&Self::identity(n));
    let e = aug.echelon();
    if e.pivots.len() < n || e.pivots[n - 1] >= n {
      return None;
    }
    Some(Self::from_fn(n, n, |i, j| e.reduced.get(i, n + j).clone()))
  }

  /// Indices of columns forming a maximal independent set, chosen greedily left to right.
  pub fn pivot_columns(&self) -> Vec<usize> { self.echelon().pivots }

  /// Basis of the right null space, as columns (exact fields only).
  pub fn nullspace(&self) -> Matrix<F> {
    let e = self.echelon();
    let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
    let mut out = Matrix::zeros(self.cols, free.len());
    for (k, &f) in free.iter().enumerate() {
      out.set(f, k, F::one());
      for (r, &p) in e.pivots.iter().enumerate() {
        out.set(p, k, -e.reduced.get(r, f).clone());
      }
    }
    out
  }

  /// Solves `self · x = rhs`; `None` if inconsistent. Picks the particular
  /// solution with free variables set to zero.
  pub fn solve(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(self.rows, rhs.rows);
    let aug = self.hstack(rhs);
    let e = aug.echelon();
    if e.pivots.iter().any(|&p| p >= self.cols) {
      return None;
    }
    let mut x = Matrix::zeros(self.cols, rhs.cols);
    for (r, &p) in e.pivots.iter().enumerate() {
      for j in 0..rhs.cols {
        x.set(p, j, e.reduced.get(r, self.cols + j).clone());
      }
    }
    Some(x)
  }
}
