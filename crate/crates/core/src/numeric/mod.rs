//! Dense matrices over a pluggable semiring, plus the real matrix
//! exponential and inverse.

mod expm;
mod linalg;
mod literal;
mod matrix;
mod semiring;

pub use expm::mat_exp;
pub use linalg::{mat_inv, solve, SINGULAR_RELATIVE_THRESHOLD};
pub use literal::{format_matrix_literal, parse_matrix_literal};
pub use matrix::{mat_mul, DenseMatrix};
pub use semiring::{MinPlus, RealField, Semiring};

/// Mixed relative/absolute float comparison.
///
/// `a` and `b` are close when `|a - b| <= max(abs, rel * max(|a|, |b|))`.
/// Equal values (including equal infinities) are always close.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub const fn exact() -> Self {
        Self { rel: 0.0, abs: 0.0 }
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        if !a.is_finite() || !b.is_finite() {
            return false;
        }
        let diff = (a - b).abs();
        diff <= self.abs.max(self.rel * a.abs().max(b.abs()))
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-9, 1e-12)
    }
}
