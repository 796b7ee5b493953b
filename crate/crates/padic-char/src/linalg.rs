//! Dense exact linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic_core::ExactScalar;

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<ExactScalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<ExactScalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(BigRational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Domain("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::Domain("singular matrix".into()))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let pv = a.get(col, col).recip();
            a.scale_row(col, &pv);
            inv.scale_row(col, &pv);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &-f.clone());
                    inv.add_row_multiple(r, col, &-f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &ExactScalar) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.data[idx] = &self.data[idx] * f;
        }
    }

    /// `row_i += f · row_j`.
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &ExactScalar) {
        for c in 0..self.cols {
            let v = self.get(j, c) * f;
            let idx = i * self.cols + c;
            self.data[idx] += v;
        }
    }

    /// Solves `self · X = rhs` for `X`, returning `None` when the system is
    /// inconsistent. `self` must have full column rank.
    pub fn solve(&self, rhs: &QMatrix) -> Result<Option<QMatrix>> {
        assert_eq!(self.rows, rhs.rows);
        let (n, m, k) = (self.rows, self.cols, rhs.cols);
        let mut a = QMatrix::zeros(n, m + k);
        for i in 0..n {
            for j in 0..m {
                a.set(i, j, self.get(i, j).clone());
            }
            for j in 0..k {
                a.set(i, m + j, rhs.get(i, j).clone());
            }
        }
        let mut row = 0;
        let mut pivots = Vec::with_capacity(m);
        for col in 0..m {
            let Some(p) = (row..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Err(Error::Domain(
                    "generator matrix is not of full column rank".into(),
                ));
            };
            a.swap_rows(row, p);
            let pv = a.get(row, col).recip();
            a.scale_row(row, &pv);
            for r in 0..n {
                if r != row && !a.get(r, col).is_zero() {
                    let f = -a.get(r, col).clone();
                    a.add_row_multiple(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        // Remaining rows must be zero on the right-hand side.
        for r in row..n {
            if (0..k).any(|j| !a.get(r, m + j).is_zero()) {
                return Ok(None);
            }
        }
        let mut x = QMatrix::zeros(m, k);
        for (i, &col) in pivots.iter().enumerate() {
            for j in 0..k {
                x.set(col, j, a.get(i, m + j).clone());
            }
        }
        Ok(Some(x))
    }
}

/// Dense integer matrix (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        ZMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    let idx = i * out.cols + j;
                    out.data[idx] += v;
                }
            }
        }
        out
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row_i += f · row_j`.
    fn add_row(&mut self, i: usize, j: usize, f: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(j, c) * f;
            self.data[i * self.cols + c] += v;
        }
    }

    /// `col_i += f · col_j`.
    fn add_col(&mut self, i: usize, j: usize, f: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, j) * f;
            self.data[r * self.cols + i] += v;
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix: the nonzero
/// invariant factors `d_1 | d_2 | ⋯`, all positive.
pub fn smith_diagonal(m: &ZMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Choose the entry of least absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        loop {
            let pivot = a.get(t, t).clone();
            let mut changed = false;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_row(i, t, &-q);
                }
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_col(j, t, &-q);
                }
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let mut fixed = false;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a.get(i, j).mod_floor(&pivot).is_zero() {
                        a.add_row(t, i, &BigInt::one());
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        diag.push(a.get(t, t).abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_int_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = QMatrix::from_int_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = QMatrix::from_int_rows(&[vec![1], vec![2], vec![3]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, QMatrix::from_int_rows(&[vec![1], vec![2]]));
        let bad = QMatrix::from_int_rows(&[vec![1], vec![2], vec![4]]);
        assert!(a.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn smith_examples() {
        let m = ZMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d: Vec<i64> = smith_diagonal(&m)
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(d, vec![2, 6, 12]);
        let z = ZMatrix::zeros(2, 2);
        assert!(smith_diagonal(&z).is_empty());
    }
}
