use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::{RingSpec, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over one of the supported rings, stored row-major.
///
/// A `rows x cols` matrix maps column vectors of length `cols` to column
/// vectors of length `rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        Self::scalar(ring, n, ring.one())
    }

    pub fn scalar(ring: RingSpec, n: usize, value: Scalar) -> Self {
        let mut m = Self::zeros(ring, n, n);
        let value = ring.reduce(value);
        for i in 0..n {
            m.data[i * n + i] = value.clone();
        }
        m
    }

    /// Builds a matrix from arbitrary rationals, validating membership in `ring`.
    pub fn from_entries(ring: RingSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let data = entries.into_iter().map(|e| ring.element(e)).collect::<Result<_>>()?;
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn from_i64(ring: RingSpec, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        let data = entries.iter().map(|&v| ring.from_i64(v)).collect();
        Matrix { ring, rows, cols, data }
    }

    /// Row-major literal; all rows must have equal length.
    pub fn from_rows(ring: RingSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_i64(ring, rows.len(), cols, &flat)
    }

    pub fn diagonal(ring: RingSpec, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = ring.from_i64(d);
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = self.ring.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Same entries reinterpreted over another ring. Fails if an entry does not
    /// belong to the target ring.
    pub fn change_ring(&self, ring: RingSpec) -> Result<Matrix> {
        Matrix::from_entries(ring, self.rows, self.cols, self.data.clone())
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let slot = &mut out.data[i * other.cols + j];
                        *slot += a * b;
                    }
                }
            }
        }
        out.reduce_all();
        Ok(out)
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.check_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.reduce(f(a, b))).collect();
        Ok(Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    fn reduce_all(&mut self) {
        if let RingSpec::PrimeField(_) = self.ring {
            for e in &mut self.data {
                *e = self.ring.reduce(std::mem::take(e));
            }
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s = self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum();
                self.ring.reduce(s)
            })
            .collect()
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zeros(self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.data[(i - r0) * m.cols + (j - c0)] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.data[i * cols.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols, "block out of bounds");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r + i) * self.cols + c + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn block_diagonal(ring: RingSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn hstack(ring: RingSpec, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            m.set_block(0, c, b);
            c += b.cols;
        }
        m
    }

    pub fn vstack(ring: RingSpec, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            m.set_block(r, 0, b);
            r += b.rows;
        }
        m
    }

    /// Determinant by Gaussian elimination over the fraction field (or `Z/p`).
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let ring = match self.ring {
            RingSpec::Integers => RingSpec::Rationals,
            r => r,
        };
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ring.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = ring.neg(&det);
            }
            let pivot = a[col * n + col].clone();
            det = ring.mul(&det, &pivot);
            let pinv = ring.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = ring.mul(&a[r * n + col], &pinv);
                for j in col..n {
                    let v = ring.sub(&a[r * n + j], &ring.mul(&f, &a[col * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.determinant().is_ok_and(|d| self.ring.is_unit(&d))
    }

    /// Inverse over the matrix's own ring; over `Z` this requires `det = ±1`.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible(self.ring));
        }
        let field = match self.ring {
            RingSpec::Integers => RingSpec::Rationals,
            r => r,
        };
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(field, n).data;
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r * n + col].is_zero()).expect("invertible");
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                    inv.swap(p * n + j, col * n + j);
                }
            }
            let pinv = field.inv(&a[col * n + col]).expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = field.mul(&a[col * n + j], &pinv);
                inv[col * n + j] = field.mul(&inv[col * n + j], &pinv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    a[r * n + j] = field.sub(&a[r * n + j], &field.mul(&f, &a[col * n + j]));
                    inv[r * n + j] = field.sub(&inv[r * n + j], &field.mul(&f, &inv[col * n + j]));
                }
            }
        }
        // Integral by unimodularity when the ring is Z.
        Matrix::from_entries(self.ring, n, n, inv)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.ring, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.neg(a)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}", self.ring, self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| RowFmt(self.row(i)))).finish()
    }
}

struct RowFmt<'a>(&'a [Scalar]);

impl fmt::Debug for RowFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_inverse_over_z() {
        let z = RingSpec::Integers;
        let a = Matrix::from_rows(z, &[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, Matrix::from_rows(z, &[vec![1, -1], vec![-1, 2]]));
        assert!((&a * &inv).is_identity());
        assert!(Matrix::diagonal(z, &[2, 1]).inverse().is_err());
        assert!(Matrix::diagonal(RingSpec::Rationals, &[2, 1]).inverse().is_ok());
    }

    #[test]
    fn arithmetic_mod_p() {
        let f3 = RingSpec::PrimeField(3);
        let a = Matrix::from_rows(f3, &[vec![2, 0], vec![1, 2]]);
        assert_eq!(a.determinant().unwrap(), f3.one());
        assert!((&a.pow(6)).is_identity());
        assert_eq!(a.get(0, 0), &f3.from_i64(-1));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let z = RingSpec::Integers;
        let a = Matrix::zeros(z, 2, 3);
        assert!(matches!(a.try_mul(&a), Err(Error::DimensionMismatch(_))));
        let q = Matrix::zeros(RingSpec::Rationals, 3, 3);
        assert!(matches!(a.try_mul(&q), Err(Error::RingMismatch(..))));
    }
}
