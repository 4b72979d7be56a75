use std::fmt::Debug;

/// Scalar structure used by [`DenseMatrix`](super::DenseMatrix) products.
///
/// `add` must be associative and commutative with unit `zero`, `mul`
/// associative with unit `one`, `mul` distributes over `add`, and `zero`
/// annihilates under `mul`.
pub trait Semiring: Send + Sync {
    type Scalar: Copy + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Scalar;
    fn one(&self) -> Self::Scalar;
    fn add(&self, a: Self::Scalar, b: Self::Scalar) -> Self::Scalar;
    fn mul(&self, a: Self::Scalar, b: Self::Scalar) -> Self::Scalar;
}

/// The real numbers with ordinary `+` and `*`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RealField;

impl Semiring for RealField {
    type Scalar = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
}

/// The tropical (min, +) semiring on `f64`.
///
/// The additive unit is `+inf`: it is the only element that is neutral for
/// `min` and absorbing for `+`. Finite values and `-inf` are ordinary scalars.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinPlus;

impl Semiring for MinPlus {
    type Scalar = f64;

    fn zero(&self) -> f64 {
        f64::INFINITY
    }
    fn one(&self) -> f64 {
        0.0
    }
    fn add(&self, a: f64, b: f64) -> f64 {
        a.min(b)
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        // inf + (-inf) is NaN in IEEE; the semiring zero must win.
        if a == f64::INFINITY || b == f64::INFINITY {
            f64::INFINITY
        } else {
            a + b
        }
    }
}
