use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
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
        let mut m = ZMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// `n·I`.
    pub fn scalar(n: usize, k: i64) -> Self {
        let mut m = ZMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(k));
        }
        m
    }

    /// Panics if the rows are ragged; `cols` is only used when `rows` is empty.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        ZMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        ZMatrix::from_rows(rows, 0)
    }

    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let rows = cols.first().map_or(rows, Vec::len);
        let mut m = ZMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Nonzero entries in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut t = ZMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.nonzeros() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn columns_range(&self, range: std::ops::Range<usize>) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (k, j) in range.clone().enumerate() {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn rows_range(&self, range: std::ops::Range<usize>) -> ZMatrix {
        ZMatrix {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    pub fn mul(&self, other: &ZMatrix) -> Result<ZMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        if let (Some(a), Some(b)) = (self.to_i64_rows(), other.to_i64_rows()) {
            if let Some(m) = mul_i64(&a, &b, other.cols) {
                return Ok(ZMatrix::from_rows(&m, other.cols));
            }
        }
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for (i, k, a) in self.nonzeros() {
            for j in 0..other.cols {
                let b = other.get(k, j);
                if !b.is_zero() {
                    out.data[i * other.cols + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, other: &ZMatrix) -> Result<ZMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> ZMatrix {
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &ZMatrix) -> Result<ZMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut m = ZMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &ZMatrix) -> Result<ZMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ZMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn kronecker(&self, other: &ZMatrix) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.nonzeros() {
            for (k, l, b) in other.nonzeros() {
                m.set(i * other.rows + k, j * other.cols + l, a * b);
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().is_ok_and(|d| d.abs().is_one())
    }
}

fn mul_i64(a: &[Vec<i64>], b: &[Vec<i64>], cols: usize) -> Option<Vec<Vec<i64>>> {
    let mut out = vec![vec![0i128; cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x != 0 {
                for (j, &y) in b[k].iter().enumerate() {
                    out[i][j] += i128::from(x) * i128::from(y);
                }
            }
        }
    }
    out.into_iter()
        .map(|r| r.into_iter().map(|v| i64::try_from(v).ok()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_determinants() {
        let a = ZMatrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let b = ZMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            a.mul(&b).unwrap(),
            ZMatrix::from_i64(&[vec![2, 1], vec![4, 3]])
        );
        assert_eq!(a.determinant().unwrap(), BigInt::from(-2));
        assert!(b.is_unimodular());
        assert!(!a.is_unimodular());
        let big = ZMatrix::from_i64(&[vec![i64::MAX, i64::MAX]]);
        let col = ZMatrix::from_i64(&[vec![2], vec![2]]);
        let p = big.mul(&col).unwrap();
        assert_eq!(p.get(0, 0), &(BigInt::from(i64::MAX) * 4));
        assert!(a.mul(&ZMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = ZMatrix::from_i64(&[
            vec![2, -1, 0, 3],
            vec![1, 0, 4, 1],
            vec![0, 5, -2, 2],
            vec![7, 1, 1, 0],
        ]);
        // Cofactor expansion, done by hand along the first row.
        fn det(a: &[Vec<i64>]) -> i64 {
            if a.len() == 1 {
                return a[0][0];
            }
            (0..a.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = a[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(k, _)| *k != j)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * a[0][j] * det(&minor)
                })
                .sum()
        }
        let rows = m.to_i64_rows().unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(det(&rows)));
    }

    #[test]
    fn stacking_and_kronecker() {
        let a = ZMatrix::from_i64(&[vec![1, 2]]);
        let b = ZMatrix::from_i64(&[vec![3]]);
        assert_eq!(a.hstack(&b).unwrap(), ZMatrix::from_i64(&[vec![1, 2, 3]]));
        assert_eq!(a.vstack(&a).unwrap().rows(), 2);
        let k = ZMatrix::identity(2).kronecker(&a);
        assert_eq!(k, ZMatrix::from_i64(&[vec![1, 2, 0, 0], vec![0, 0, 1, 2]]));
        assert_eq!(k.transpose().rows(), 4);
        assert_eq!(k.nnz(), 4);
    }
}
