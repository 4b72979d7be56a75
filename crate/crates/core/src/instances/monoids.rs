//! One-object categories built from monoids, and the scalar aggregations
//! (sum, max, product) on top of them.

use std::fmt::Debug;

use crate::category::{Category, IntervalAssignment};
use crate::numeric::{DenseMatrix, Tolerance};

/// A monoid with a diagrammatic product: `combine(a, b)` is "`a` then `b`".
pub trait Monoid: Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn unit(&self) -> Self::Elem;
    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn elems_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
}

/// The delooping of a monoid: one object `()`, morphisms are monoid elements.
#[derive(Debug, Clone, Default)]
pub struct MonoidDelooping<M>(pub M);

impl<M: Monoid> Category for MonoidDelooping<M> {
    type Object = ();
    type Morphism = M::Elem;

    fn source(&self, _: &M::Elem) {}
    fn target(&self, _: &M::Elem) {}
    fn identity(&self, _: &()) -> M::Elem {
        self.0.unit()
    }
    fn compose(&self, f: &M::Elem, g: &M::Elem) -> M::Elem {
        self.0.combine(f, g)
    }
    fn same_object(&self, _: &(), _: &()) -> bool {
        true
    }
    fn morphisms_eq(&self, a: &M::Elem, b: &M::Elem) -> bool {
        self.0.elems_eq(a, b)
    }
}

/// `(R, +)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sum {
    pub tol: Tolerance,
}

impl Monoid for Sum {
    type Elem = f64;

    fn unit(&self) -> f64 {
        0.0
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn elems_eq(&self, a: &f64, b: &f64) -> bool {
        self.tol.close(*a, *b)
    }
}

/// `(R ∪ {-inf}, max)`. Exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct Max;

impl Monoid for Max {
    type Elem = f64;

    fn unit(&self) -> f64 {
        f64::NEG_INFINITY
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }
    fn elems_eq(&self, a: &f64, b: &f64) -> bool {
        a == b
    }
}

/// `(R, *)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Product {
    pub tol: Tolerance,
}

impl Monoid for Product {
    type Elem = f64;

    fn unit(&self) -> f64 {
        1.0
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn elems_eq(&self, a: &f64, b: &f64) -> bool {
        self.tol.close(*a, *b)
    }
}

/// Invertible `dim x dim` real matrices. "`a` then `b`" is the matrix `b * a`.
#[derive(Debug, Clone, Copy)]
pub struct MatrixGroup {
    pub dim: usize,
    pub tol: Tolerance,
}

impl MatrixGroup {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            tol: Tolerance::default(),
        }
    }
}

impl Monoid for MatrixGroup {
    type Elem = DenseMatrix;

    fn unit(&self) -> DenseMatrix {
        DenseMatrix::identity(self.dim)
    }
    fn combine(&self, a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        b.matmul(a)
    }
    fn elems_eq(&self, a: &DenseMatrix, b: &DenseMatrix) -> bool {
        a.approx_eq(b, self.tol)
    }
}

pub(crate) fn delooping_cells<T: Clone>(cells: Vec<T>) -> IntervalAssignment<(), T> {
    let objects = vec![(); cells.len() + 1];
    IntervalAssignment::new(0, objects, cells).expect("one object per grid point")
}

/// Cell `k` carries `series[k]`; lifts are interval sums.
pub fn make_sum_assignment(series: &[f64]) -> IntervalAssignment<(), f64> {
    delooping_cells(series.to_vec())
}

/// Cell `k` carries `series[k]`; lifts are interval maxima (`-inf` on points).
pub fn make_max_assignment(series: &[f64]) -> IntervalAssignment<(), f64> {
    delooping_cells(series.to_vec())
}

/// Cell `k` carries `1 + series[k]`; lifts expand to sums over increasing index subsets.
pub fn make_product_assignment(series: &[f64]) -> IntervalAssignment<(), f64> {
    delooping_cells(series.iter().map(|x| 1.0 + x).collect())
}
