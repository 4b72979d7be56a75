//! Categories with typed composition, the interval category, and the free
//! lift of a path-shaped assignment to every interval.
//!
//! Composition is diagrammatic throughout: `compose(f, g)` is "`f`, then `g`"
//! and requires `target(f) == source(g)`. Matrix-valued instances therefore
//! multiply the second factor on the left.

use std::fmt::Debug;

use crate::error::{Error, Result};

/// A small category, given by its structure maps.
///
/// Implementations must be pure: the scan engine calls `compose` from many
/// threads at once.
pub trait Category: Sync {
    type Object: Clone + Debug + Send + Sync;
    type Morphism: Clone + Debug + Send + Sync;

    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;
    fn identity(&self, object: &Self::Object) -> Self::Morphism;

    /// `f` then `g`. Callers guarantee `target(f)` matches `source(g)`.
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Self::Morphism;

    fn same_object(&self, a: &Self::Object, b: &Self::Object) -> bool;

    /// Instance-defined equality: exact for exact scalars, tolerance-based for floats.
    fn morphisms_eq(&self, a: &Self::Morphism, b: &Self::Morphism) -> bool;

    /// Checked composition.
    fn try_compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Option<Self::Morphism> {
        self.same_object(&self.target(f), &self.source(g))
            .then(|| self.compose(f, g))
    }
}

/// A morphism `[lo, hi]` of the interval category: integers with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] has lo > hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    /// Composition in the interval category: `[a, b]` then `[b, c]` is `[a, c]`.
    pub fn then(&self, next: &Interval) -> Option<Interval> {
        (self.hi == next.lo).then_some(Interval {
            lo: self.lo,
            hi: next.hi,
        })
    }
}

/// A map from the elementary intervals `[offset + k, offset + k + 1]` into a
/// category: one morphism per cell, one object per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalAssignment<O, M> {
    offset: i64,
    objects: Vec<O>,
    cells: Vec<M>,
}

impl<O: Clone, M: Clone> IntervalAssignment<O, M> {
    /// Assemble from explicit grid-point objects. `objects` must have one
    /// more entry than `cells`; endpoint consistency is checked separately by
    /// [`validate_assignment`].
    pub fn new(offset: i64, objects: Vec<O>, cells: Vec<M>) -> Result<Self> {
        if objects.len() != cells.len() + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{} cells need {} objects, got {}",
                cells.len(),
                cells.len() + 1,
                objects.len()
            )));
        }
        Ok(Self {
            offset,
            objects,
            cells,
        })
    }

    /// Assemble from cells alone, reading objects off their endpoints.
    /// `start` is only consulted when `cells` is empty.
    pub fn from_cells<C>(cat: &C, offset: i64, start: O, cells: Vec<M>) -> Self
    where
        C: Category<Object = O, Morphism = M>,
    {
        let mut objects = Vec::with_capacity(cells.len() + 1);
        match cells.first() {
            Some(first) => objects.push(cat.source(first)),
            None => objects.push(start),
        }
        for (k, cell) in cells.iter().enumerate() {
            // Only the last target has no following source to read from.
            objects.push(match cells.get(k + 1) {
                Some(next) => cat.source(next),
                None => cat.target(cell),
            });
        }
        Self {
            offset,
            objects,
            cells,
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cells(&self) -> &[M] {
        &self.cells
    }

    pub fn objects(&self) -> &[O] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The full range `[offset, offset + len]`.
    pub fn range(&self) -> Interval {
        Interval {
            lo: self.offset,
            hi: self.offset + self.cells.len() as i64,
        }
    }

    /// Object at grid point `point` (absolute coordinate).
    pub fn object_at(&self, point: i64) -> Option<&O> {
        usize::try_from(point - self.offset)
            .ok()
            .and_then(|k| self.objects.get(k))
    }

    /// Cell indices (relative to `offset`) covered by `iv`.
    pub(crate) fn local_range(&self, iv: Interval) -> Result<std::ops::Range<usize>> {
        let range = self.range();
        if iv.lo < range.lo || iv.hi > range.hi {
            return Err(Error::OutOfRange {
                lo: iv.lo,
                hi: iv.hi,
                start: range.lo,
                end: range.hi,
            });
        }
        let start = (iv.lo - self.offset) as usize;
        Ok(start..start + iv.len())
    }
}

fn cell_consistent<C: Category>(
    cat: &C,
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    k: usize,
) -> bool {
    let cell = &asg.cells[k];
    cat.same_object(&cat.source(cell), &asg.objects[k])
        && cat.same_object(&cat.target(cell), &asg.objects[k + 1])
}

/// Indices of cells whose endpoints disagree with the grid-point objects.
pub fn validate_assignment<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
) -> Vec<usize> {
    (0..asg.len())
        .filter(|&k| !cell_consistent(cat, asg, k))
        .collect()
}

pub(crate) fn check_cells<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    cat: &C,
    range: std::ops::Range<usize>,
) -> Result<()> {
    match range.into_iter().find(|&k| !cell_consistent(cat, asg, k)) {
        Some(index) => Err(Error::EndpointMismatch { index }),
        None => Ok(()),
    }
}

/// Left-to-right composite of `cells`, starting from the identity at `start`.
pub(crate) fn fold_cells<C: Category>(
    cat: &C,
    start: &C::Object,
    cells: &[C::Morphism],
) -> C::Morphism {
    match cells.split_first() {
        None => cat.identity(start),
        Some((first, rest)) => rest
            .iter()
            .fold(first.clone(), |acc, c| cat.compose(&acc, c)),
    }
}

/// The value of the unique functor extending `asg` on the interval `iv`:
/// the composite of the cells inside `iv`, or an identity when `iv` is a point.
pub fn lift<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    iv: Interval,
    cat: &C,
) -> Result<C::Morphism> {
    let range = asg.local_range(iv)?;
    check_cells(asg, cat, range.clone())?;
    Ok(fold_cells(
        cat,
        &asg.objects[range.start],
        &asg.cells[range],
    ))
}

/// Whether lifting the pieces of `iv` cut at `splits` and composing them
/// agrees with lifting `iv` directly.
pub fn functor_law_check<C: Category>(
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    iv: Interval,
    splits: &[i64],
    cat: &C,
) -> Result<bool> {
    let mut points = Vec::with_capacity(splits.len() + 2);
    points.push(iv.lo);
    points.extend_from_slice(splits);
    points.push(iv.hi);
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(format!(
            "split points {splits:?} are not sorted inside [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    let direct = lift(asg, iv, cat)?;
    let mut pieces = points
        .windows(2)
        .map(|w| lift(asg, Interval { lo: w[0], hi: w[1] }, cat));
    let first = pieces.next().expect("at least one piece")?;
    let composed = pieces.try_fold(first, |acc, piece| {
        Ok::<_, Error>(cat.compose(&acc, &piece?))
    })?;
    Ok(cat.morphisms_eq(&composed, &direct))
}
