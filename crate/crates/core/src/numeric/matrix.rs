use std::fmt;

use super::semiring::{RealField, Semiring};
use super::Tolerance;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> DenseMatrix<T> {
    /// Build a matrix from row-major entries. Both dimensions must be positive.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Copy of the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of bounds"
        );
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Overwrite the block at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of bounds"
        );
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j));
            }
        }
    }
}

impl<T: Copy> DenseMatrix<T> {
    pub fn zeros_in<S: Semiring<Scalar = T>>(rows: usize, cols: usize, sr: &S) -> Self {
        Self::filled(rows, cols, sr.zero())
    }

    pub fn identity_in<S: Semiring<Scalar = T>>(n: usize, sr: &S) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { sr.one() } else { sr.zero() })
    }
}

/// `(sr.add, sr.mul)` product of `a` and `b`.
pub fn mat_mul<S: Semiring>(
    a: &DenseMatrix<S::Scalar>,
    b: &DenseMatrix<S::Scalar>,
    sr: &S,
) -> Result<DenseMatrix<S::Scalar>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            left: a.cols,
            right: b.rows,
        });
    }
    let (n, m, k) = (a.rows, b.cols, a.cols);
    let mut data = vec![sr.zero(); n * m];
    for i in 0..n {
        let out = &mut data[i * m..(i + 1) * m];
        for l in 0..k {
            let ail = a.data[i * k + l];
            let brow = &b.data[l * m..(l + 1) * m];
            for (o, &blj) in out.iter_mut().zip(brow) {
                *o = sr.add(*o, sr.mul(ail, blj));
            }
        }
    }
    Ok(DenseMatrix {
        rows: n,
        cols: m,
        data,
    })
}

impl DenseMatrix<f64> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::identity_in(n, &RealField)
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                0.0
            }
        })
    }

    /// Real matrix product. Panics on shape mismatch; use [`mat_mul`] for a checked product.
    pub fn matmul(&self, other: &Self) -> Self {
        mat_mul(self, other, &RealField).expect("matmul: incompatible shapes")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "add: shape mismatch");
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "sub: shape mismatch");
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x * s)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.data.iter().zip(&other.data).fold(
            0.0,
            |m, (a, b)| if a == b { m } else { m.max((a - b).abs()) },
        )
    }

    /// Entrywise comparison under `tol`; shapes must agree.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| tol.close(a, b))
    }
}

impl<T: Copy + fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::MinPlus;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    /// Brute-force semiring product, written independently of `mat_mul`.
    fn brute_product<S: Semiring<Scalar = f64>>(
        a: &DenseMatrix,
        b: &DenseMatrix,
        sr: &S,
    ) -> Vec<Vec<f64>> {
        (0..a.rows())
            .map(|i| {
                (0..b.cols())
                    .map(|j| {
                        (0..a.cols())
                            .map(|l| sr.mul(a.get(i, l), b.get(l, j)))
                            .fold(sr.zero(), |acc, x| sr.add(acc, x))
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_times_matrix() {
        let a = m(&[&[1.5, -2.0], &[0.25, 7.0]]);
        assert_eq!(DenseMatrix::identity(2).matmul(&a), a);
        assert_eq!(a.matmul(&DenseMatrix::identity(2)), a);
    }

    #[test]
    fn real_product_matches_dot_products() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = m(&[&[5.0, 6.0], &[7.0, 8.0]]);
        let expected = brute_product(&a, &b, &RealField);
        assert_eq!(expected, vec![vec![19.0, 22.0], vec![43.0, 50.0]]);
        assert_eq!(a.matmul(&b), m(&[&[19.0, 22.0], &[43.0, 50.0]]));
    }

    #[test]
    fn tropical_product_matches_direct_evaluation() {
        let a = m(&[&[0.0, 3.0], &[2.0, 0.0]]);
        let b = m(&[&[0.0, 1.0], &[4.0, 0.0]]);
        // min over l of a[i][l] + b[l][j]:
        // (0,0) min(0+0, 3+4) = 0   (0,1) min(0+1, 3+0) = 1
        // (1,0) min(2+0, 0+4) = 2   (1,1) min(2+1, 0+0) = 0
        let expected = brute_product(&a, &b, &MinPlus);
        assert_eq!(expected, vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(
            mat_mul(&a, &b, &MinPlus).unwrap(),
            m(&[&[0.0, 1.0], &[2.0, 0.0]])
        );
    }

    #[test]
    fn tropical_identity_uses_plus_infinity() {
        let id = DenseMatrix::identity_in(3, &MinPlus);
        let a = DenseMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 - 4.0);
        assert_eq!(mat_mul(&id, &a, &MinPlus).unwrap(), a);
        assert_eq!(mat_mul(&a, &id, &MinPlus).unwrap(), a);
    }

    #[test]
    fn dimension_mismatch_reports_both_sides() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(2, 2);
        assert_eq!(
            mat_mul(&a, &b, &RealField),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::<f64>::new(0, 2, vec![]).is_err());
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let a = DenseMatrix::from_fn(4, 5, |i, j| (10 * i + j) as f64);
        let b = a.block(1, 2, 2, 3);
        assert_eq!(b, m(&[&[12.0, 13.0, 14.0], &[22.0, 23.0, 24.0]]));
        let mut c = DenseMatrix::zeros(4, 5);
        c.set_block(1, 2, &b);
        assert_eq!(c.get(2, 4), 24.0);
        assert_eq!(c.get(0, 0), 0.0);
    }

    fn real_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(-1.0f64..1.0, rows * cols)
            .prop_map(move |d| DenseMatrix::new(rows, cols, d).unwrap())
    }

    fn tropical_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
        let entry = prop_oneof![6 => (-50i32..50).prop_map(f64::from), 1 => Just(f64::INFINITY)];
        proptest::collection::vec(entry, rows * cols)
            .prop_map(move |d| DenseMatrix::new(rows, cols, d).unwrap())
    }

    proptest! {
        #[test]
        fn real_product_is_associative(
            (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(n, k, l, p)| {
                (real_matrix(n, k), real_matrix(k, l), real_matrix(l, p))
            })
        ) {
            let left = a.matmul(&b).matmul(&c);
            let right = a.matmul(&b.matmul(&c));
            prop_assert!(left.approx_eq(&right, Tolerance::new(1e-10, 1e-12)));
        }

        #[test]
        fn tropical_product_is_exactly_associative(
            (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(n, k, l, p)| {
                (tropical_matrix(n, k), tropical_matrix(k, l), tropical_matrix(l, p))
            })
        ) {
            let ab = mat_mul(&a, &b, &MinPlus).unwrap();
            let bc = mat_mul(&b, &c, &MinPlus).unwrap();
            prop_assert_eq!(mat_mul(&ab, &c, &MinPlus).unwrap(), mat_mul(&a, &bc, &MinPlus).unwrap());
        }
    }
}
