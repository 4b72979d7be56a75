//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham 2005, "The scaling and squaring method for the matrix
//! exponential revisited").

use super::linalg::solve;
use super::DenseMatrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled degree-13 approximant reaches double precision.
const THETA13: f64 = 5.371_920_351_148_152;

/// Exponential of a square real matrix.
pub fn mat_exp(a: &DenseMatrix) -> Result<DenseMatrix> {
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
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(2f64.powi(-squarings));

    let b = &PADE13;
    let id = DenseMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let u_inner = a6
        .matmul(&a6.scale(b[13]).add(&a4.scale(b[11])).add(&a2.scale(b[9])))
        .add(&a6.scale(b[7]))
        .add(&a4.scale(b[5]))
        .add(&a2.scale(b[3]))
        .add(&id.scale(b[1]));
    let u = a.matmul(&u_inner);
    let v = a6
        .matmul(&a6.scale(b[12]).add(&a4.scale(b[10])).add(&a2.scale(b[8])))
        .add(&a6.scale(b[6]))
        .add(&a4.scale(b[4]))
        .add(&a2.scale(b[2]))
        .add(&id.scale(b[0]));

    let mut r = solve(&v.sub(&u), &v.add(&u))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tolerance;
    use proptest::prelude::*;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(
            mat_exp(&DenseMatrix::zeros(3, 3)).unwrap(),
            DenseMatrix::identity(3)
        );
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let e = mat_exp(&a).unwrap();
        let expected = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(e.max_abs_diff(&expected) <= 1e-15, "{e:?}");
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let e = mat_exp(&DenseMatrix::diag(&[1.0, 2.0])).unwrap();
        let expected = DenseMatrix::diag(&[1f64.exp(), 2f64.exp()]);
        assert!(e.max_abs_diff(&expected) <= 1e-12, "{e:?}");
    }

    #[test]
    fn large_norm_uses_squaring() {
        let e = mat_exp(&DenseMatrix::diag(&[-20.0, 10.0, 3.5])).unwrap();
        let expected = [(-20f64).exp(), 10f64.exp(), 3.5f64.exp()];
        for (i, x) in expected.iter().enumerate() {
            assert!(((e.get(i, i) - x) / x).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_generator() {
        let t: f64 = 0.7;
        let a = DenseMatrix::from_rows(&[[0.0, -t], [t, 0.0]]).unwrap();
        let expected = DenseMatrix::from_rows(&[[t.cos(), -t.sin()], [t.sin(), t.cos()]]).unwrap();
        assert!(mat_exp(&a).unwrap().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            mat_exp(&DenseMatrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
        let inf = DenseMatrix::from_rows(&[[f64::INFINITY]]).unwrap();
        assert_eq!(mat_exp(&inf), Err(Error::NonFinite));
    }

    /// Random matrix rescaled so its spectral norm (bounded by its Frobenius norm) is at most `bound`.
    fn bounded(n: usize, bound: f64) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(-1.0f64..1.0, n * n).prop_map(move |d| {
            let m = DenseMatrix::new(n, n, d).unwrap();
            let fro = m.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
            if fro > bound {
                m.scale(bound / fro)
            } else {
                m
            }
        })
    }

    proptest! {
        #[test]
        fn exp_times_exp_of_negation_is_identity(a in (1usize..9).prop_flat_map(|n| bounded(n, 2.0))) {
            let prod = mat_exp(&a).unwrap().matmul(&mat_exp(&a.neg()).unwrap());
            prop_assert!(prod.max_abs_diff(&DenseMatrix::identity(a.rows())) < 1e-9);
        }

        #[test]
        fn one_parameter_group_law(a in (1usize..6).prop_flat_map(|n| bounded(n, 2.0)), s in -1.0f64..1.0, t in -1.0f64..1.0) {
            let lhs = mat_exp(&a.scale(s + t)).unwrap();
            let rhs = mat_exp(&a.scale(s)).unwrap().matmul(&mat_exp(&a.scale(t)).unwrap());
            prop_assert!(lhs.approx_eq(&rhs, Tolerance::new(1e-9, 1e-12)));
        }
    }
}
