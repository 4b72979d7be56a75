//! Double categories, crossed modules of groups, the delooping of a crossed
//! module, and the free lift of a grid of 2-cells to every rectangle.
//!
//! Squares are drawn with the first coordinate pointing east and the second
//! pointing north. Horizontal 1-cells run along the south and north sides,
//! vertical 1-cells along the west and east sides. Like the 1-cell layers,
//! both face compositions are diagrammatic: `compose_h(a, b)` puts `b` east
//! of `a`, `compose_v(a, b)` puts `b` north of `a`.

use std::fmt::{self, Debug};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Structure maps of a double category.
pub trait DoubleCategory: Sync {
    type Object: Clone + Debug + Send + Sync;
    type HCell: Clone + Debug + Send + Sync;
    type VCell: Clone + Debug + Send + Sync;
    type Square: Clone + Debug + Send + Sync;

    fn h_source(&self, h: &Self::HCell) -> Self::Object;
    fn h_target(&self, h: &Self::HCell) -> Self::Object;
    fn h_identity(&self, o: &Self::Object) -> Self::HCell;
    fn h_compose(&self, a: &Self::HCell, b: &Self::HCell) -> Self::HCell;

    fn v_source(&self, v: &Self::VCell) -> Self::Object;
    fn v_target(&self, v: &Self::VCell) -> Self::Object;
    fn v_identity(&self, o: &Self::Object) -> Self::VCell;
    fn v_compose(&self, a: &Self::VCell, b: &Self::VCell) -> Self::VCell;

    fn south(&self, s: &Self::Square) -> Self::HCell;
    fn north(&self, s: &Self::Square) -> Self::HCell;
    fn west(&self, s: &Self::Square) -> Self::VCell;
    fn east(&self, s: &Self::Square) -> Self::VCell;

    /// Unit for horizontal composition on the vertical 1-cell `v` (west = east = `v`).
    fn square_h_identity(&self, v: &Self::VCell) -> Self::Square;
    /// Unit for vertical composition on the horizontal 1-cell `h` (south = north = `h`).
    fn square_v_identity(&self, h: &Self::HCell) -> Self::Square;

    /// `b` placed east of `a`; requires `east(a) == west(b)`.
    fn compose_h(&self, a: &Self::Square, b: &Self::Square) -> Result<Self::Square>;
    /// `b` placed north of `a`; requires `north(a) == south(b)`.
    fn compose_v(&self, a: &Self::Square, b: &Self::Square) -> Result<Self::Square>;

    fn objects_eq(&self, a: &Self::Object, b: &Self::Object) -> bool;
    fn hcells_eq(&self, a: &Self::HCell, b: &Self::HCell) -> bool;
    fn vcells_eq(&self, a: &Self::VCell, b: &Self::VCell) -> bool;
    fn squares_eq(&self, a: &Self::Square, b: &Self::Square) -> bool;
}

/// A crossed module of groups `(feedback: H -> G, act: G -> Aut(H))`.
///
/// Both group products are diagrammatic in the sense that `g_mul(a, b)` is
/// the composite "`a` then `b`" of 1-cells in the delooping. `h_inv` may fail
/// for monoid-valued faces, which only the axiom checker needs.
pub trait CrossedModule: Sync {
    type G: Clone + Debug + Send + Sync;
    type H: Clone + Debug + Send + Sync;

    fn g_mul(&self, a: &Self::G, b: &Self::G) -> Self::G;
    fn g_inv(&self, a: &Self::G) -> Result<Self::G>;
    fn g_unit(&self) -> Self::G;
    /// Size of the largest entrywise difference; `0.0` means equal.
    fn g_distance(&self, a: &Self::G, b: &Self::G) -> f64;
    fn g_eq(&self, a: &Self::G, b: &Self::G) -> bool;

    fn h_mul(&self, a: &Self::H, b: &Self::H) -> Self::H;
    fn h_inv(&self, a: &Self::H) -> Result<Self::H>;
    fn h_unit(&self) -> Self::H;
    fn h_distance(&self, a: &Self::H, b: &Self::H) -> f64;
    fn h_eq(&self, a: &Self::H, b: &Self::H) -> bool;

    fn feedback(&self, h: &Self::H) -> Self::G;
    fn act(&self, g: &Self::G, h: &Self::H) -> Result<Self::H>;
}

/// A 2-cell of a crossed-module delooping: four boundary group elements and a face.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCell<G, H> {
    pub south: G,
    pub east: G,
    pub north: G,
    pub west: G,
    pub face: H,
}

impl<G, H> TwoCell<G, H> {
    pub fn new(south: G, east: G, north: G, west: G, face: H) -> Self {
        Self {
            south,
            east,
            north,
            west,
            face,
        }
    }
}

/// Product of a sequence of group elements, left to right.
pub fn g_product<X: CrossedModule>(xm: &X, factors: &[&X::G]) -> X::G {
    factors.iter().fold(xm.g_unit(), |acc, g| xm.g_mul(&acc, g))
}

/// How far `feedback(face) * west * north` is from `south * east`.
pub fn boundary_violation<X: CrossedModule>(xm: &X, cell: &TwoCell<X::G, X::H>) -> f64 {
    let lhs = g_product(xm, &[&xm.feedback(&cell.face), &cell.west, &cell.north]);
    let rhs = xm.g_mul(&cell.south, &cell.east);
    xm.g_distance(&lhs, &rhs)
}

pub fn satisfies_boundary_law<X: CrossedModule>(xm: &X, cell: &TwoCell<X::G, X::H>) -> bool {
    let lhs = g_product(xm, &[&xm.feedback(&cell.face), &cell.west, &cell.north]);
    let rhs = xm.g_mul(&cell.south, &cell.east);
    xm.g_eq(&lhs, &rhs)
}

/// The square with the given south, west, north sides and face whose east
/// side is solved from the boundary law: `east = south^-1 * feedback(face) * west * north`.
pub fn square_solving_east<X: CrossedModule>(
    xm: &X,
    south: X::G,
    west: X::G,
    north: X::G,
    face: X::H,
) -> Result<TwoCell<X::G, X::H>> {
    let east = g_product(
        xm,
        &[&xm.g_inv(&south)?, &xm.feedback(&face), &west, &north],
    );
    Ok(TwoCell::new(south, east, north, west, face))
}

/// The edge-symmetric double category with one object, 1-cells `G` in both
/// directions, and squares `TwoCell<G, H>` satisfying the boundary law.
#[derive(Debug, Clone, Default)]
pub struct Delooping<X> {
    pub module: X,
}

impl<X: CrossedModule> Delooping<X> {
    pub fn new(module: X) -> Self {
        Self { module }
    }
}

impl<X: CrossedModule> DoubleCategory for Delooping<X> {
    type Object = ();
    type HCell = X::G;
    type VCell = X::G;
    type Square = TwoCell<X::G, X::H>;

    fn h_source(&self, _: &X::G) {}
    fn h_target(&self, _: &X::G) {}
    fn h_identity(&self, _: &()) -> X::G {
        self.module.g_unit()
    }
    fn h_compose(&self, a: &X::G, b: &X::G) -> X::G {
        self.module.g_mul(a, b)
    }

    fn v_source(&self, _: &X::G) {}
    fn v_target(&self, _: &X::G) {}
    fn v_identity(&self, _: &()) -> X::G {
        self.module.g_unit()
    }
    fn v_compose(&self, a: &X::G, b: &X::G) -> X::G {
        self.module.g_mul(a, b)
    }

    fn south(&self, s: &Self::Square) -> X::G {
        s.south.clone()
    }
    fn north(&self, s: &Self::Square) -> X::G {
        s.north.clone()
    }
    fn west(&self, s: &Self::Square) -> X::G {
        s.west.clone()
    }
    fn east(&self, s: &Self::Square) -> X::G {
        s.east.clone()
    }

    fn square_h_identity(&self, v: &X::G) -> Self::Square {
        let xm = &self.module;
        TwoCell::new(xm.g_unit(), v.clone(), xm.g_unit(), v.clone(), xm.h_unit())
    }

    fn square_v_identity(&self, h: &X::G) -> Self::Square {
        let xm = &self.module;
        TwoCell::new(h.clone(), xm.g_unit(), h.clone(), xm.g_unit(), xm.h_unit())
    }

    fn compose_h(&self, a: &Self::Square, b: &Self::Square) -> Result<Self::Square> {
        let xm = &self.module;
        if !xm.g_eq(&a.east, &b.west) {
            return Err(Error::BoundaryMismatch {
                i: 0,
                j: 0,
                detail: format!(
                    "east side of left square differs from west side of right square by {:e}",
                    xm.g_distance(&a.east, &b.west)
                ),
            });
        }
        let face = xm.h_mul(&xm.act(&a.south, &b.face)?, &a.face);
        Ok(TwoCell::new(
            xm.g_mul(&a.south, &b.south),
            b.east.clone(),
            xm.g_mul(&a.north, &b.north),
            a.west.clone(),
            face,
        ))
    }

    fn compose_v(&self, a: &Self::Square, b: &Self::Square) -> Result<Self::Square> {
        let xm = &self.module;
        if !xm.g_eq(&a.north, &b.south) {
            return Err(Error::BoundaryMismatch {
                i: 0,
                j: 0,
                detail: format!(
                    "north side of lower square differs from south side of upper square by {:e}",
                    xm.g_distance(&a.north, &b.south)
                ),
            });
        }
        let face = xm.h_mul(&a.face, &xm.act(&a.west, &b.face)?);
        Ok(TwoCell::new(
            a.south.clone(),
            xm.g_mul(&a.east, &b.east),
            b.north.clone(),
            xm.g_mul(&a.west, &b.west),
            face,
        ))
    }

    fn objects_eq(&self, _: &(), _: &()) -> bool {
        true
    }
    fn hcells_eq(&self, a: &X::G, b: &X::G) -> bool {
        self.module.g_eq(a, b)
    }
    fn vcells_eq(&self, a: &X::G, b: &X::G) -> bool {
        self.module.g_eq(a, b)
    }
    fn squares_eq(&self, a: &Self::Square, b: &Self::Square) -> bool {
        let xm = &self.module;
        xm.g_eq(&a.south, &b.south)
            && xm.g_eq(&a.east, &b.east)
            && xm.g_eq(&a.north, &b.north)
            && xm.g_eq(&a.west, &b.west)
            && xm.h_eq(&a.face, &b.face)
    }
}

/// Dense `m x n` array indexed by `(i, j)`, `i` running east and `j` north.
#[derive(Clone, PartialEq)]
pub struct Grid<T> {
    m: usize,
    n: usize,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { m, n, data }
    }

    /// Build from columns: `columns[i][j]`.
    pub fn from_columns(columns: Vec<Vec<T>>) -> Result<Self> {
        let m = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeMismatch("ragged grid".into()));
        }
        Ok(Self {
            m,
            n,
            data: columns.into_iter().flatten().collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(
            i < self.m && j < self.n,
            "grid index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.n + j]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Grid<U> {
        Grid {
            m: self.m,
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Debug> Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("data", &self.data)
            .finish()
    }
}

/// Elementary data on the integer grid `[0, m] x [0, n]`: group elements on
/// unit edges and faces on unit squares.
///
/// `hcells[i][j]` sits on `[i, i+1] x {j}` (`i < m`, `j <= n`), `vcells[i][j]`
/// on `{i} x [j, j+1]` (`i <= m`, `j < n`) and `faces[i][j]` on
/// `[i, i+1] x [j, j+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCellGridAssignment<G, H> {
    m: usize,
    n: usize,
    hcells: Vec<Vec<G>>,
    vcells: Vec<Vec<G>>,
    faces: Vec<Vec<H>>,
}

impl<G: Clone, H: Clone> TwoCellGridAssignment<G, H> {
    pub fn new(hcells: Vec<Vec<G>>, vcells: Vec<Vec<G>>, faces: Vec<Vec<H>>) -> Result<Self> {
        let m = faces.len();
        let n = faces.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one face".into(),
            ));
        }
        let shape_ok = faces.iter().all(|c| c.len() == n)
            && hcells.len() == m
            && hcells.iter().all(|c| c.len() == n + 1)
            && vcells.len() == m + 1
            && vcells.iter().all(|c| c.len() == n);
        if !shape_ok {
            return Err(Error::ShapeMismatch(format!(
                "a {m}x{n} face grid needs {m}x{} horizontal and {}x{n} vertical edges",
                n + 1,
                m + 1
            )));
        }
        Ok(Self {
            m,
            n,
            hcells,
            vcells,
            faces,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hcell(&self, i: usize, j: usize) -> &G {
        &self.hcells[i][j]
    }

    pub fn vcell(&self, i: usize, j: usize) -> &G {
        &self.vcells[i][j]
    }

    pub fn face(&self, i: usize, j: usize) -> &H {
        &self.faces[i][j]
    }

    pub fn set_face(&mut self, i: usize, j: usize, face: H) {
        self.faces[i][j] = face;
    }

    /// The elementary 2-cell on `[i, i+1] x [j, j+1]`.
    pub fn cell(&self, i: usize, j: usize) -> TwoCell<G, H> {
        TwoCell::new(
            self.hcells[i][j].clone(),
            self.vcells[i + 1][j].clone(),
            self.hcells[i][j + 1].clone(),
            self.vcells[i][j].clone(),
            self.faces[i][j].clone(),
        )
    }

    pub fn squares(&self) -> Grid<TwoCell<G, H>> {
        Grid::from_fn(self.m, self.n, |i, j| self.cell(i, j))
    }
}

/// Cells `(i, j)` whose face violates the boundary law with its edges.
pub fn validate_grid<X: CrossedModule>(
    grid: &TwoCellGridAssignment<X::G, X::H>,
    xm: &X,
) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 0..grid.m() {
        for j in 0..grid.n() {
            if !satisfies_boundary_law(xm, &grid.cell(i, j)) {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// Checks that neighbouring squares agree on their shared edges.
pub fn check_square_grid<D: DoubleCategory>(squares: &Grid<D::Square>, dcat: &D) -> Result<()> {
    for i in 0..squares.m() {
        for j in 0..squares.n() {
            let sq = squares.get(i, j);
            if i + 1 < squares.m()
                && !dcat.vcells_eq(&dcat.east(sq), &dcat.west(squares.get(i + 1, j)))
            {
                return Err(Error::BoundaryMismatch {
                    i,
                    j,
                    detail: format!("east side differs from west side of ({}, {j})", i + 1),
                });
            }
            if j + 1 < squares.n()
                && !dcat.hcells_eq(&dcat.north(sq), &dcat.south(squares.get(i, j + 1)))
            {
                return Err(Error::BoundaryMismatch {
                    i,
                    j,
                    detail: format!("north side differs from south side of ({i}, {})", j + 1),
                });
            }
        }
    }
    Ok(())
}

/// Rectangle `[s1, t1] x [s2, t2]` with integer corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub s1: usize,
    pub t1: usize,
    pub s2: usize,
    pub t2: usize,
}

impl Rect {
    pub fn new(s1: usize, t1: usize, s2: usize, t2: usize) -> Result<Self> {
        if s1 > t1 || s2 > t2 {
            return Err(Error::InvalidParameter(format!(
                "rectangle [{s1}, {t1}] x [{s2}, {t2}] has a reversed side"
            )));
        }
        Ok(Self { s1, t1, s2, t2 })
    }

    pub fn width(&self) -> usize {
        self.t1 - self.s1
    }

    pub fn height(&self) -> usize {
        self.t2 - self.s2
    }
}

/// Where [`free_lift`] cuts a rectangle before recursing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStrategy {
    /// Peel off the westmost column, then the southmost row.
    Leftmost,
    /// Halve the longer side.
    Midpoint,
    /// Seeded random cut direction and position.
    Random(u64),
}

struct Splitter {
    strategy: SplitStrategy,
    rng: Option<ChaCha8Rng>,
}

enum Cut {
    Vertical(usize),
    Horizontal(usize),
}

impl Splitter {
    fn new(strategy: SplitStrategy) -> Self {
        let rng = match strategy {
            SplitStrategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Self { strategy, rng }
    }

    /// Cut for a rectangle with at least two unit cells.
    fn cut(&mut self, r: &Rect) -> Cut {
        let (w, h) = (r.width(), r.height());
        match self.strategy {
            SplitStrategy::Leftmost if w > 1 => Cut::Vertical(r.s1 + 1),
            SplitStrategy::Leftmost => Cut::Horizontal(r.s2 + 1),
            SplitStrategy::Midpoint if w >= h => Cut::Vertical(r.s1 + w / 2),
            SplitStrategy::Midpoint => Cut::Horizontal(r.s2 + h / 2),
            SplitStrategy::Random(_) => {
                let rng = self.rng.as_mut().expect("random splitter has an rng");
                let vertical = if w > 1 && h > 1 {
                    rng.gen_bool(0.5)
                } else {
                    w > 1
                };
                if vertical {
                    Cut::Vertical(rng.gen_range(r.s1 + 1..r.t1))
                } else {
                    Cut::Horizontal(rng.gen_range(r.s2 + 1..r.t2))
                }
            }
        }
    }
}

/// Object at the grid point `(i, j)`.
fn corner<D: DoubleCategory>(squares: &Grid<D::Square>, dcat: &D, i: usize, j: usize) -> D::Object {
    let (ci, cj) = (i.min(squares.m() - 1), j.min(squares.n() - 1));
    let h = if j < squares.n() {
        dcat.south(squares.get(ci, cj))
    } else {
        dcat.north(squares.get(ci, cj))
    };
    if i < squares.m() {
        dcat.h_source(&h)
    } else {
        dcat.h_target(&h)
    }
}

/// Horizontal 1-cell `[s, t] x {j}` of the free lift.
pub fn lift_hcell<D: DoubleCategory>(
    squares: &Grid<D::Square>,
    dcat: &D,
    s: usize,
    t: usize,
    j: usize,
) -> D::HCell {
    let edge = |i: usize| {
        if j < squares.n() {
            dcat.south(squares.get(i, j))
        } else {
            dcat.north(squares.get(i, j - 1))
        }
    };
    if s == t {
        return dcat.h_identity(&corner(squares, dcat, s, j));
    }
    (s + 1..t).fold(edge(s), |acc, i| dcat.h_compose(&acc, &edge(i)))
}

/// Vertical 1-cell `{i} x [s, t]` of the free lift.
pub fn lift_vcell<D: DoubleCategory>(
    squares: &Grid<D::Square>,
    dcat: &D,
    i: usize,
    s: usize,
    t: usize,
) -> D::VCell {
    let edge = |j: usize| {
        if i < squares.m() {
            dcat.west(squares.get(i, j))
        } else {
            dcat.east(squares.get(i - 1, j))
        }
    };
    if s == t {
        return dcat.v_identity(&corner(squares, dcat, i, s));
    }
    (s + 1..t).fold(edge(s), |acc, j| dcat.v_compose(&acc, &edge(j)))
}

/// Value of the unique double functor extending the elementary squares on
/// `rect`, computed by recursive bipartition according to `strategy`.
///
/// Degenerate rectangles lift to identity squares on the lifted 1-cells.
pub fn free_lift<D: DoubleCategory>(
    squares: &Grid<D::Square>,
    rect: Rect,
    dcat: &D,
    strategy: SplitStrategy,
) -> Result<D::Square> {
    if squares.m() == 0 || squares.n() == 0 {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    if rect.t1 > squares.m() || rect.t2 > squares.n() {
        return Err(Error::OutOfRange {
            lo: rect.s1 as i64,
            hi: rect.t1 as i64,
            start: 0,
            end: squares.m() as i64,
        });
    }
    let mut splitter = Splitter::new(strategy);
    lift_rec(squares, rect, dcat, &mut splitter)
}

fn lift_rec<D: DoubleCategory>(
    squares: &Grid<D::Square>,
    r: Rect,
    dcat: &D,
    splitter: &mut Splitter,
) -> Result<D::Square> {
    if r.width() == 0 {
        return Ok(dcat.square_h_identity(&lift_vcell(squares, dcat, r.s1, r.s2, r.t2)));
    }
    if r.height() == 0 {
        return Ok(dcat.square_v_identity(&lift_hcell(squares, dcat, r.s1, r.t1, r.s2)));
    }
    if r.width() == 1 && r.height() == 1 {
        return Ok(squares.get(r.s1, r.s2).clone());
    }
    let at = |e: Error| match e {
        Error::BoundaryMismatch { detail, .. } => Error::BoundaryMismatch {
            i: r.s1,
            j: r.s2,
            detail,
        },
        e => e,
    };
    match splitter.cut(&r) {
        Cut::Vertical(c) => {
            let west = lift_rec(squares, Rect { t1: c, ..r }, dcat, splitter)?;
            let east = lift_rec(squares, Rect { s1: c, ..r }, dcat, splitter)?;
            dcat.compose_h(&west, &east).map_err(at)
        }
        Cut::Horizontal(c) => {
            let south = lift_rec(squares, Rect { t2: c, ..r }, dcat, splitter)?;
            let north = lift_rec(squares, Rect { s2: c, ..r }, dcat, splitter)?;
            dcat.compose_v(&south, &north).map_err(at)
        }
    }
}

/// Whether a 2x2 block of squares gives the same result composed row-first
/// and column-first. `quad` is `[south-west, south-east, north-west, north-east]`.
pub fn check_interchange<D: DoubleCategory>(quad: &[D::Square; 4], dcat: &D) -> Result<bool> {
    let [a, b, c, d] = quad;
    let rows_first = dcat.compose_v(&dcat.compose_h(a, b)?, &dcat.compose_h(c, d)?)?;
    let cols_first = dcat.compose_h(&dcat.compose_v(a, c)?, &dcat.compose_v(b, d)?)?;
    Ok(dcat.squares_eq(&rows_first, &cols_first))
}

/// Worst observed violation of one axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub max_violation: f64,
    pub failed: usize,
    /// Samples where the axiom could not be evaluated (for example a missing inverse).
    pub skipped: usize,
}

impl AxiomReport {
    fn new(axiom: &'static str) -> Self {
        Self {
            axiom,
            max_violation: 0.0,
            failed: 0,
            skipped: 0,
        }
    }

    fn record(&mut self, violation: Result<f64>, threshold: f64) {
        match violation {
            Ok(v) => {
                // NaN counts as a failure.
                if !(v <= threshold) {
                    self.failed += 1;
                }
                if v.is_nan() || v > self.max_violation {
                    self.max_violation = v;
                }
            }
            Err(_) => self.skipped += 1,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.skipped == 0
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:e} {}", self.axiom, self.max_violation, self.failed)
    }
}

/// Sampled axiom violations for a crossed module.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModuleReport {
    pub samples: usize,
    pub threshold: f64,
    pub axioms: Vec<AxiomReport>,
}

impl CrossedModuleReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(AxiomReport::passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomReport> {
        self.axioms.iter().find(|a| a.axiom == axiom)
    }
}

impl fmt::Display for CrossedModuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Evaluates the crossed-module axioms on `samples` random tuples drawn with
/// `sample_g` / `sample_h` from a generator seeded with `seed`.
///
/// Reported axioms: `TAU_HOM` (feedback is a homomorphism), `ACT_HOM`
/// (`act(g g')` is `act(g) . act(g')`), `ACT_ENDO` (each `act(g)` preserves
/// products), `EQUI` and `PEIF`. A sample fails when its violation exceeds
/// `threshold`.
pub fn check_crossed_module<X, FG, FH>(
    xm: &X,
    samples: usize,
    seed: u64,
    threshold: f64,
    mut sample_g: FG,
    mut sample_h: FH,
) -> CrossedModuleReport
where
    X: CrossedModule,
    FG: FnMut(&mut ChaCha8Rng) -> X::G,
    FH: FnMut(&mut ChaCha8Rng) -> X::H,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tau_hom = AxiomReport::new("TAU_HOM");
    let mut act_hom = AxiomReport::new("ACT_HOM");
    let mut act_endo = AxiomReport::new("ACT_ENDO");
    let mut equi = AxiomReport::new("EQUI");
    let mut peif = AxiomReport::new("PEIF");

    for _ in 0..samples {
        let (g1, g2) = (sample_g(&mut rng), sample_g(&mut rng));
        let (h1, h2) = (sample_h(&mut rng), sample_h(&mut rng));

        let lhs = xm.feedback(&xm.h_mul(&h1, &h2));
        let rhs = xm.g_mul(&xm.feedback(&h1), &xm.feedback(&h2));
        tau_hom.record(Ok(xm.g_distance(&lhs, &rhs)), threshold);

        act_hom.record(
            (|| {
                let lhs = xm.act(&xm.g_mul(&g1, &g2), &h1)?;
                let rhs = xm.act(&g1, &xm.act(&g2, &h1)?)?;
                Ok(xm.h_distance(&lhs, &rhs))
            })(),
            threshold,
        );

        act_endo.record(
            (|| {
                let lhs = xm.act(&g1, &xm.h_mul(&h1, &h2))?;
                let rhs = xm.h_mul(&xm.act(&g1, &h1)?, &xm.act(&g1, &h2)?);
                Ok(xm.h_distance(&lhs, &rhs))
            })(),
            threshold,
        );

        equi.record(
            (|| {
                let lhs = xm.feedback(&xm.act(&g1, &h1)?);
                let rhs = g_product(xm, &[&g1, &xm.feedback(&h1), &xm.g_inv(&g1)?]);
                Ok(xm.g_distance(&lhs, &rhs))
            })(),
            threshold,
        );

        peif.record(
            (|| {
                let lhs = xm.act(&xm.feedback(&h1), &h2)?;
                let rhs = xm.h_mul(&xm.h_mul(&h1, &h2), &xm.h_inv(&h1)?);
                Ok(xm.h_distance(&lhs, &rhs))
            })(),
            threshold,
        );
    }

    CrossedModuleReport {
        samples,
        threshold,
        axioms: vec![tau_hom, act_hom, act_endo, equi, peif],
    }
}

/// Random boundary-consistent `m x n` grid of squares. The south row, west
/// column and every north side are sampled; east sides are solved from the
/// boundary law.
pub fn random_square_grid<X, FG, FH>(
    xm: &X,
    m: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
    mut sample_g: FG,
    mut sample_h: FH,
) -> Result<Grid<TwoCell<X::G, X::H>>>
where
    X: CrossedModule,
    FG: FnMut(&mut ChaCha8Rng) -> X::G,
    FH: FnMut(&mut ChaCha8Rng) -> X::H,
{
    let mut columns: Vec<Vec<TwoCell<X::G, X::H>>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut column: Vec<TwoCell<X::G, X::H>> = Vec::with_capacity(n);
        for j in 0..n {
            let south = match column.last() {
                Some(below) => below.north.clone(),
                None => sample_g(rng),
            };
            let west = match columns.last() {
                Some(prev) => prev[j].east.clone(),
                None => sample_g(rng),
            };
            let north = sample_g(rng);
            let face = sample_h(rng);
            column.push(square_solving_east(xm, south, west, north, face)?);
        }
        columns.push(column);
    }
    Grid::from_columns(columns)
}

/// Random boundary-consistent 2x2 constellation `[sw, se, nw, ne]`.
pub fn random_quad<X, FG, FH>(
    xm: &X,
    rng: &mut ChaCha8Rng,
    sample_g: FG,
    sample_h: FH,
) -> Result<[TwoCell<X::G, X::H>; 4]>
where
    X: CrossedModule,
    FG: FnMut(&mut ChaCha8Rng) -> X::G,
    FH: FnMut(&mut ChaCha8Rng) -> X::H,
{
    let grid = random_square_grid(xm, 2, 2, rng, sample_g, sample_h)?;
    Ok([
        grid.get(0, 0).clone(),
        grid.get(1, 0).clone(),
        grid.get(0, 1).clone(),
        grid.get(1, 1).clone(),
    ])
}
