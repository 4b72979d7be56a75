//! LU factorisation with partial pivoting, used for inversion and for the
//! Padé solve inside the matrix exponential.

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the largest input entry count as zero.
pub const SINGULAR_RELATIVE_THRESHOLD: f64 = 1e-12;

struct Lu {
    n: usize,
    // Packed L (unit diagonal, below) and U (on and above the diagonal).
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = a.rows();
        let threshold = SINGULAR_RELATIVE_THRESHOLD * a.max_abs();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot <= threshold || pivot == 0.0 {
                return Err(Error::Singular { pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    /// Solve `A X = B` column by column.
    fn solve(&self, b: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        assert_eq!(b.rows(), n, "solve: right-hand side has wrong row count");
        let m = b.cols();
        let mut x = DenseMatrix::zeros(n, m);
        let mut col = vec![0.0; n];
        for c in 0..m {
            for i in 0..n {
                col[i] = b.get(self.perm[i], c);
            }
            for i in 0..n {
                let mut s = col[i];
                for j in 0..i {
                    s -= self.lu[i * n + j] * col[j];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for j in i + 1..n {
                    s -= self.lu[i * n + j] * col[j];
                }
                col[i] = s / self.lu[i * n + i];
            }
            for i in 0..n {
                x.set(i, c, col[i]);
            }
        }
        x
    }
}

/// Inverse of a square real matrix via partial-pivot LU.
pub fn mat_inv(a: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = Lu::factor(a)?;
    Ok(lu.solve(&DenseMatrix::identity(a.rows())))
}

/// Solve `A X = B`.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = Lu::factor(a)?;
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        });
    }
    Ok(lu.solve(b))
}
