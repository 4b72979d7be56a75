//! Throughput measurement for the parallel scan on dense matrix morphisms.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{Category, IntervalAssignment};
use crate::error::{Error, Result};
use crate::instances::MatCategory;
use crate::numeric::{DenseMatrix, RealField, Tolerance};
use crate::scan::{scan_parallel, scan_serial};

/// Wraps a category and counts calls to `compose`.
pub struct Counting<C> {
    inner: C,
    count: AtomicU64,
}

impl<C> Counting<C> {
    pub fn new(inner: C) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn take(&self) -> u64 {
        self.count.swap(0, Ordering::Relaxed)
    }
}

impl<C: Category> Category for Counting<C> {
    type Object = C::Object;
    type Morphism = C::Morphism;

    fn source(&self, f: &C::Morphism) -> C::Object {
        self.inner.source(f)
    }
    fn target(&self, f: &C::Morphism) -> C::Object {
        self.inner.target(f)
    }
    fn identity(&self, o: &C::Object) -> C::Morphism {
        self.inner.identity(o)
    }
    fn compose(&self, f: &C::Morphism, g: &C::Morphism) -> C::Morphism {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.compose(f, g)
    }
    fn same_object(&self, a: &C::Object, b: &C::Object) -> bool {
        self.inner.same_object(a, b)
    }
    fn morphisms_eq(&self, a: &C::Morphism, b: &C::Morphism) -> bool {
        self.inner.morphisms_eq(a, b)
    }
}

/// One measured scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub cells: usize,
    pub dim: usize,
    pub workers: usize,
    pub seconds: f64,
    pub compositions: u64,
    /// Relative to the single-worker run on the same input.
    pub speedup: f64,
}

impl BenchRow {
    pub fn compositions_per_second(&self) -> f64 {
        self.compositions as f64 / self.seconds
    }
}

/// `cells` random `dim x dim` real matrices with entry variance `1 / dim`,
/// which keeps long products in floating-point range.
pub fn random_matrix_assignment(
    cells: usize,
    dim: usize,
    seed: u64,
) -> IntervalAssignment<usize, DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_width = (3.0 / dim as f64).sqrt();
    let cells: Vec<DenseMatrix> = (0..cells)
        .map(|_| DenseMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-half_width..half_width)))
        .collect();
    let objects = vec![dim; cells.len() + 1];
    IntervalAssignment::new(0, objects, cells).expect("square cells")
}

/// Times `scan_parallel` for every worker count on one random assignment per
/// size. A single-worker run is always measured first as the speedup baseline.
pub fn bench_matrix_scan(
    sizes: &[usize],
    dim: usize,
    workers: &[usize],
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if workers.contains(&0) || dim == 0 {
        return Err(Error::InvalidParameter(
            "workers and dim must be positive".into(),
        ));
    }
    let cat = Counting::new(MatCategory::new(RealField, Tolerance::default()));
    let mut rows = Vec::new();
    for &cells in sizes {
        let asg = random_matrix_assignment(cells, dim, seed);
        let start = Instant::now();
        let reference = scan_serial(&asg, &cat)?;
        let base_seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
        let base_count = cat.take();
        for &w in workers {
            let (seconds, compositions) = if w == 1 {
                (base_seconds, base_count)
            } else {
                let start = Instant::now();
                let out = scan_parallel(&asg, &cat, w)?;
                let seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
                debug_assert_eq!(out.len(), reference.len());
                (seconds, cat.take())
            };
            rows.push(BenchRow {
                cells,
                dim,
                workers: w,
                seconds,
                compositions,
                speedup: base_seconds / seconds,
            });
        }
    }
    Ok(rows)
}
