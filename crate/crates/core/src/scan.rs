//! Prefix aggregation over a category.
//!
//! The parallel scan splits the cells into `workers` contiguous chunks,
//! folds each chunk independently, runs an exclusive up-sweep/down-sweep
//! over the chunk aggregates, and finally expands each chunk from its seed.
//! Composition order depends only on the input and `workers`, never on thread
//! timing, so results are deterministic.

use std::ops::Range;

use crate::category::{check_cells, fold_cells, Category, IntervalAssignment};
use crate::double::{check_square_grid, DoubleCategory, Grid};
use crate::error::{Error, Result};

/// `prefixes[k]` is the lift of `[offset, offset + k]`; `prefixes[0]` is the
/// identity at the start object.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult<M> {
    pub prefixes: Vec<M>,
}

impl<M> ScanResult<M> {
    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn last(&self) -> &M {
        self.prefixes
            .last()
            .expect("a scan result always holds the identity prefix")
    }
}

/// Aggregates over dyadic blocks: `levels[i][k]` covers cells
/// `k * 2^i .. (k + 1) * 2^i` (the last block of a level may be short).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTree<M> {
    pub levels: Vec<Vec<M>>,
}

impl<M> SweepTree<M> {
    /// Aggregate over all cells; `None` for an empty assignment.
    pub fn root(&self) -> Option<&M> {
        self.levels.last().and_then(|l| l.first())
    }
}

/// Number of workers from the environment, falling back to 1.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Map `f` over `items` with up to `workers` scoped threads, each taking a
/// contiguous slice. Output order matches input order.
pub(crate) fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                s.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(k, t)| f(c * chunk + k, t))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect()
    })
}

/// `parts` near-equal contiguous ranges covering `0..n`; earlier ranges get the remainder.
pub(crate) fn chunk_bounds(n: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, n.max(1));
    let (base, extra) = (n / parts, n % parts);
    let mut start = 0;
    (0..parts)
        .map(|p| {
            let len = base + usize::from(p < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn validate_all<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
) -> Result<()> {
    check_cells(asg, cat, 0..asg.len())
}

/// Sequential prefix scan: `prefixes[k + 1] = prefixes[k]` then `cells[k]`.
pub fn scan_serial<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
) -> Result<ScanResult<C::Morphism>> {
    validate_all(asg, cat)?;
    let mut prefixes = Vec::with_capacity(asg.len() + 1);
    prefixes.push(cat.identity(&asg.objects()[0]));
    for cell in asg.cells() {
        let next = cat.compose(prefixes.last().expect("non-empty"), cell);
        prefixes.push(next);
    }
    Ok(ScanResult { prefixes })
}

/// Pairwise reduction levels above `base`, each level computed in parallel.
/// An unpaired last element is carried up unchanged (equivalent to padding
/// with an identity at the final object).
fn build_levels<C: Category>(
    cat: &C,
    base: Vec<C::Morphism>,
    workers: usize,
) -> Vec<Vec<C::Morphism>> {
    let mut levels = vec![base];
    while levels.last().is_some_and(|l| l.len() > 1) {
        let below = levels.last().expect("non-empty");
        let pairs: Vec<&[C::Morphism]> = below.chunks(2).collect();
        let next = parallel_map(&pairs, workers, |_, pair| match pair {
            [a, b] => cat.compose(a, b),
            [a] => a.clone(),
            _ => unreachable!("chunks(2) yields one or two elements"),
        });
        levels.push(next);
    }
    levels
}

/// Up-sweep: combine neighbouring blocks level by level.
pub fn up_sweep<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
    workers: usize,
) -> Result<SweepTree<C::Morphism>> {
    validate_all(asg, cat)?;
    Ok(SweepTree {
        levels: build_levels(cat, asg.cells().to_vec(), workers),
    })
}

/// Exclusive prefixes of `items` via an up-sweep followed by a down-sweep:
/// `out[k]` is the composite of `items[..k]`, `out[0]` the identity at `start`.
fn exclusive_tree_scan<C: Category>(
    cat: &C,
    start: &C::Object,
    items: Vec<C::Morphism>,
) -> Vec<C::Morphism> {
    let levels = build_levels(cat, items, 1);
    let mut exclusive = vec![cat.identity(start)];
    for below in levels.iter().rev().skip(1) {
        let mut next = Vec::with_capacity(below.len());
        for (k, seed) in exclusive.iter().enumerate() {
            next.push(seed.clone());
            if 2 * k + 1 < below.len() {
                next.push(cat.compose(seed, &below[2 * k]));
            }
        }
        exclusive = next;
    }
    exclusive
}

/// Parallel prefix scan; identical output to [`scan_serial`] up to instance equality.
pub fn scan_parallel<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
    workers: usize,
) -> Result<ScanResult<C::Morphism>> {
    scan_blocked(asg, cat, workers, workers)
}

/// [`scan_parallel`] with the number of contiguous blocks chosen separately
/// from the number of threads. The composition order depends only on
/// `blocks`, so for a fixed `blocks` the output is bit-identical for every
/// `workers` value, including float instances.
pub fn scan_blocked<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
    blocks: usize,
    workers: usize,
) -> Result<ScanResult<C::Morphism>> {
    if workers == 0 || blocks == 0 {
        return Err(Error::InvalidParameter(
            "workers and blocks must be at least 1".into(),
        ));
    }
    let n = asg.len();
    if n == 0 || blocks == 1 {
        return scan_serial(asg, cat);
    }
    let chunks = chunk_bounds(n, blocks);
    let cells = asg.cells();
    let objects = asg.objects();

    let checks = parallel_map(&chunks, workers, |_, r| check_cells(asg, cat, r.clone()));
    checks.into_iter().collect::<Result<Vec<()>>>()?;

    let totals = parallel_map(&chunks, workers, |_, r| {
        fold_cells(cat, &objects[r.start], &cells[r.clone()])
    });
    let seeds = exclusive_tree_scan(cat, &objects[0], totals);

    let jobs: Vec<(Range<usize>, C::Morphism)> = chunks.into_iter().zip(seeds).collect();
    let expanded = parallel_map(&jobs, workers, |_, (r, seed)| {
        let mut out = Vec::with_capacity(r.len());
        let mut acc = seed.clone();
        for cell in &cells[r.clone()] {
            acc = cat.compose(&acc, cell);
            out.push(acc.clone());
        }
        out
    });

    let mut prefixes = Vec::with_capacity(n + 1);
    prefixes.push(cat.identity(&objects[0]));
    prefixes.extend(expanded.into_iter().flatten());
    Ok(ScanResult { prefixes })
}

/// Squares under horizontal composition, as a category whose objects are
/// vertical 1-cells.
pub struct HorizontalStrips<'a, D>(pub &'a D);

impl<D: DoubleCategory> Category for HorizontalStrips<'_, D> {
    type Object = D::VCell;
    type Morphism = D::Square;

    fn source(&self, f: &D::Square) -> D::VCell {
        self.0.west(f)
    }
    fn target(&self, f: &D::Square) -> D::VCell {
        self.0.east(f)
    }
    fn identity(&self, v: &D::VCell) -> D::Square {
        self.0.square_h_identity(v)
    }
    fn compose(&self, f: &D::Square, g: &D::Square) -> D::Square {
        self.0
            .compose_h(f, g)
            .expect("horizontal composition of squares with validated boundaries")
    }
    fn same_object(&self, a: &D::VCell, b: &D::VCell) -> bool {
        self.0.vcells_eq(a, b)
    }
    fn morphisms_eq(&self, a: &D::Square, b: &D::Square) -> bool {
        self.0.squares_eq(a, b)
    }
}

/// Squares under vertical composition, as a category whose objects are
/// horizontal 1-cells.
pub struct VerticalStrips<'a, D>(pub &'a D);

impl<D: DoubleCategory> Category for VerticalStrips<'_, D> {
    type Object = D::HCell;
    type Morphism = D::Square;

    fn source(&self, f: &D::Square) -> D::HCell {
        self.0.south(f)
    }
    fn target(&self, f: &D::Square) -> D::HCell {
        self.0.north(f)
    }
    fn identity(&self, h: &D::HCell) -> D::Square {
        self.0.square_v_identity(h)
    }
    fn compose(&self, f: &D::Square, g: &D::Square) -> D::Square {
        self.0
            .compose_v(f, g)
            .expect("vertical composition of squares with validated boundaries")
    }
    fn same_object(&self, a: &D::HCell, b: &D::HCell) -> bool {
        self.0.hcells_eq(a, b)
    }
    fn morphisms_eq(&self, a: &D::Square, b: &D::Square) -> bool {
        self.0.squares_eq(a, b)
    }
}

/// Two-phase 2D prefix scan.
///
/// Returns an `(m + 1) x (n + 1)` grid whose `(i, j)` entry is the lift of
/// `[0, i] x [0, j]`; entries with `i == 0` or `j == 0` are identity squares.
/// Phase one scans every row under horizontal composition, phase two scans
/// every column of row-strips under vertical composition. Rows (then
/// columns) are distributed over `workers` threads.
pub fn scan_2d<D: DoubleCategory>(
    squares: &Grid<D::Square>,
    dcat: &D,
    workers: usize,
) -> Result<Grid<D::Square>> {
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    let (m, n) = (squares.m(), squares.n());
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "2D scan needs a non-empty grid".into(),
        ));
    }
    check_square_grid(squares, dcat)?;

    // strips[j][i] = lift of [0, i] x [j, j + 1]
    let rows: Vec<usize> = (0..n).collect();
    let hcat = HorizontalStrips(dcat);
    let strips = parallel_map(&rows, workers, |_, &j| {
        let cells: Vec<D::Square> = (0..m).map(|i| squares.get(i, j).clone()).collect();
        let start = dcat.west(&cells[0]);
        let asg = IntervalAssignment::from_cells(&hcat, 0, start, cells);
        scan_serial(&asg, &hcat).map(|r| r.prefixes)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let columns: Vec<usize> = (0..=m).collect();
    let vcat = VerticalStrips(dcat);
    let prefix_columns = parallel_map(&columns, workers, |_, &i| {
        let cells: Vec<D::Square> = (0..n).map(|j| strips[j][i].clone()).collect();
        let start = dcat.south(&cells[0]);
        let asg = IntervalAssignment::from_cells(&vcat, 0, start, cells);
        scan_serial(&asg, &vcat)
            .map(|r| r.prefixes)
            .map_err(|e| match e {
                Error::EndpointMismatch { index } => Error::BoundaryMismatch {
                    i,
                    j: index,
                    detail: "row strips do not stack".into(),
                },
                e => e,
            })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Grid::from_columns(prefix_columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::lift;
    use crate::double::{free_lift, Delooping, Rect, SplitStrategy};
    use crate::instances::{
        abelian_grid_assignment, image_grid_assignment, make_max_assignment, make_sum_assignment,
        AbelianModule, AbelianOp, GeneralLinear, Image, ImageParams, MatCategory, Max,
        MonoidDelooping, Sum, IMAGE_DIMS,
    };
    use crate::numeric::{DenseMatrix, MinPlus, RealField, Tolerance};
    use crate::CrossedModule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const GOLDEN: [f64; 8] = [3.0, 1.0, 7.0, 0.0, 4.0, 1.0, 6.0, 3.0];

    #[test]
    fn sum_prefixes_and_sweep_levels() {
        let cat = MonoidDelooping(Sum::default());
        let asg = make_sum_assignment(&GOLDEN);
        let expected = vec![0.0, 3.0, 4.0, 11.0, 11.0, 15.0, 16.0, 22.0, 25.0];
        assert_eq!(scan_serial(&asg, &cat).unwrap().prefixes, expected);
        for workers in [1, 2, 3, 4, 8, 16] {
            assert_eq!(
                scan_parallel(&asg, &cat, workers).unwrap().prefixes,
                expected
            );
        }
        let tree = up_sweep(&asg, &cat, 4).unwrap();
        assert_eq!(tree.levels[1], vec![4.0, 7.0, 5.0, 9.0]);
        assert_eq!(tree.levels[2], vec![11.0, 14.0]);
        assert_eq!(tree.levels[3], vec![25.0]);
        assert_eq!(tree.root(), Some(&25.0));
    }

    #[test]
    fn degenerate_inputs() {
        let cat = MonoidDelooping(Sum::default());
        let empty = make_sum_assignment(&[]);
        assert_eq!(scan_serial(&empty, &cat).unwrap().prefixes, vec![0.0]);
        assert_eq!(scan_parallel(&empty, &cat, 4).unwrap().prefixes, vec![0.0]);
        assert_eq!(up_sweep(&empty, &cat, 2).unwrap().root(), None);
        let single = up_sweep(&make_sum_assignment(&[5.0]), &cat, 2).unwrap();
        assert_eq!(single.levels, vec![vec![5.0]]);
        assert!(scan_parallel(&make_sum_assignment(&GOLDEN), &cat, 0).is_err());
    }

    #[test]
    fn running_max() {
        let cat = MonoidDelooping(Max);
        let asg = make_max_assignment(&GOLDEN[..4]);
        let expected = vec![f64::NEG_INFINITY, 3.0, 3.0, 7.0, 7.0];
        assert_eq!(scan_serial(&asg, &cat).unwrap().prefixes, expected);
        assert_eq!(scan_parallel(&asg, &cat, 3).unwrap().prefixes, expected);
    }

    fn tropical_assignment(n: usize, seed: u64) -> IntervalAssignment<usize, DenseMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims: Vec<usize> = (0..=n).map(|_| rng.gen_range(1..5)).collect();
        let cells = (0..n)
            .map(|k| {
                DenseMatrix::from_fn(dims[k + 1], dims[k], |_, _| {
                    f64::from(rng.gen_range(-20i32..20))
                })
            })
            .collect();
        IntervalAssignment::new(0, dims, cells).unwrap()
    }

    #[test]
    fn tropical_varying_dims_match_serial_exactly() {
        let cat = MatCategory::new(MinPlus, Tolerance::exact());
        for n in [1, 2, 7, 33, 100] {
            let asg = tropical_assignment(n, n as u64);
            let serial = scan_serial(&asg, &cat).unwrap();
            for workers in [2, 3, 8] {
                assert_eq!(
                    scan_parallel(&asg, &cat, workers).unwrap(),
                    serial,
                    "n = {n}, workers = {workers}"
                );
            }
            assert_eq!(
                up_sweep(&asg, &cat, 3).unwrap().root().unwrap(),
                serial.last()
            );
        }
    }

    #[test]
    fn endpoint_mismatch_is_reported() {
        let cat = MatCategory::new(RealField, Tolerance::default());
        let asg = IntervalAssignment::new(
            0,
            vec![2, 2, 3, 3],
            vec![
                DenseMatrix::identity(2),
                DenseMatrix::zeros(2, 2),
                DenseMatrix::identity(3),
            ],
        )
        .unwrap();
        assert_eq!(
            scan_serial(&asg, &cat),
            Err(Error::EndpointMismatch { index: 1 })
        );
        assert_eq!(
            scan_parallel(&asg, &cat, 3),
            Err(Error::EndpointMismatch { index: 1 })
        );
        assert_eq!(
            up_sweep(&asg, &cat, 2).unwrap_err(),
            Error::EndpointMismatch { index: 1 }
        );
    }

    #[test]
    fn order_matters_for_matrices() {
        let cat = MatCategory::new(RealField, Tolerance::default());
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[1.0, 0.0], [3.0, 1.0]]).unwrap();
        let fwd = IntervalAssignment::new(0, vec![2; 3], vec![a.clone(), b.clone()]).unwrap();
        let rev = IntervalAssignment::new(0, vec![2; 3], vec![b, a]).unwrap();
        let f = scan_parallel(&fwd, &cat, 2).unwrap();
        let r = scan_parallel(&rev, &cat, 2).unwrap();
        assert!(!f.last().approx_eq(r.last(), Tolerance::default()));
    }

    #[test]
    fn abelian_2d_scan_counts_cells() {
        let dcat = Delooping::new(AbelianModule::new(AbelianOp::Sum));
        let ones = abelian_grid_assignment(&vec![vec![1.0; 4]; 4], AbelianOp::Sum).unwrap();
        for workers in [1, 3] {
            let out = scan_2d(&ones.squares(), &dcat, workers).unwrap();
            assert_eq!((out.m(), out.n()), (5, 5));
            for i in 0..=4 {
                for j in 0..=4 {
                    assert_eq!(out.get(i, j).face, (i * j) as f64);
                }
            }
        }
        let values = vec![
            vec![1.0, -2.0, 3.0],
            vec![4.0, 5.0, -6.0],
            vec![7.0, 8.0, 9.0],
        ];
        let grid = abelian_grid_assignment(&values, AbelianOp::Sum).unwrap();
        let out = scan_2d(&grid.squares(), &dcat, 2).unwrap();
        assert_eq!(out.get(3, 3).face, values.iter().flatten().sum::<f64>());
    }

    #[test]
    fn gl_image_scan_matches_free_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let image = Image::from_fn(4, 5, 3, |_, _, _| rng.gen_range(0.0..1.0)).unwrap();
        let grid = image_grid_assignment(&image, &ImageParams::default()).unwrap();
        let dcat = Delooping::new(GeneralLinear::new(IMAGE_DIMS));
        let squares = grid.squares();
        let out = scan_2d(&squares, &dcat, 3).unwrap();
        for i in 0..=grid.m() {
            for j in 0..=grid.n() {
                let oracle = free_lift(
                    &squares,
                    Rect::new(0, i, 0, j).unwrap(),
                    &dcat,
                    SplitStrategy::Leftmost,
                )
                .unwrap();
                let got = out.get(i, j);
                assert!(
                    dcat.module.h_distance(&got.face, &oracle.face) < 1e-8,
                    "({i}, {j})"
                );
                assert!(
                    dcat.module.g_distance(&got.east, &oracle.east) < 1e-8,
                    "({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn scan_2d_rejects_mismatched_edges() {
        let dcat = Delooping::new(GeneralLinear::new(IMAGE_DIMS));
        let image = Image::from_fn(3, 3, 3, |i, j, c| (i + 2 * j + c) as f64 * 0.1).unwrap();
        let grid = image_grid_assignment(&image, &ImageParams::default()).unwrap();
        let mut squares: Vec<Vec<_>> = (0..2)
            .map(|i| (0..2).map(|j| grid.cell(i, j)).collect())
            .collect();
        squares[1][1].south = dcat.module.g_unit();
        let bad = Grid::from_columns(squares).unwrap();
        assert!(matches!(
            scan_2d(&bad, &dcat, 2),
            Err(Error::BoundaryMismatch { i: 1, j: 0, .. })
        ));
    }

    #[test]
    fn lift_agrees_with_prefix() {
        let cat = MonoidDelooping(Sum::default());
        let asg = make_sum_assignment(&GOLDEN);
        let scan = scan_parallel(&asg, &cat, 3).unwrap();
        for k in 0..=GOLDEN.len() {
            let iv = crate::category::Interval::new(0, k as i64).unwrap();
            assert_eq!(lift(&asg, iv, &cat).unwrap(), scan.prefixes[k]);
        }
    }

    #[test]
    fn chunk_bounds_cover_range() {
        assert_eq!(chunk_bounds(10, 3), vec![0..4, 4..7, 7..10]);
        assert_eq!(chunk_bounds(2, 8), vec![0..1, 1..2]);
        assert_eq!(chunk_bounds(0, 4), vec![0..0]);
        for n in 0..40 {
            for p in 1..10 {
                let b = chunk_bounds(n, p);
                assert_eq!(b.first().unwrap().start, 0);
                assert_eq!(b.last().unwrap().end, n);
                assert!(b.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }

    #[test]
    fn parallel_map_preserves_order() {
        let items: Vec<u32> = (0..103).collect();
        for workers in [1, 2, 3, 8, 200] {
            let out = parallel_map(&items, workers, |i, x| (i as u32) * 1000 + x);
            assert_eq!(out, items.iter().map(|x| x * 1001).collect::<Vec<_>>());
        }
        assert!(parallel_map(&Vec::<u32>::new(), 4, |_, x| *x).is_empty());
    }

    #[test]
    fn blocked_scan_is_bit_identical_across_workers() {
        use crate::instances::MatCategory;
        use crate::numeric::RealField;
        let asg = crate::bench::random_matrix_assignment(500, 4, 3);
        let cat = MatCategory::new(RealField, crate::Tolerance::default());
        let reference = scan_blocked(&asg, &cat, 16, 1).unwrap();
        for workers in [2, 3, 8] {
            assert_eq!(scan_blocked(&asg, &cat, 16, workers).unwrap(), reference);
        }
        assert!(scan_blocked(&asg, &cat, 0, 2).is_err());
    }
}
