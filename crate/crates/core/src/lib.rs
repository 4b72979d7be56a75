//! Aggregation of per-cell data over intervals and rectangles.
//!
//! An aggregation is the unique functor (or double functor) extending an
//! assignment of morphisms to unit cells. [`category::lift`] and
//! [`double::free_lift`] evaluate it directly; [`scan`] computes all prefixes
//! with a deterministic parallel scan.

pub mod bench;
pub mod category;
pub mod double;
pub mod error;
pub mod instances;
pub mod numeric;
pub mod scan;

pub use category::{
    functor_law_check, lift, validate_assignment, Category, Interval, IntervalAssignment,
};
pub use double::{
    check_crossed_module, check_interchange, free_lift, validate_grid, CrossedModule, Delooping,
    DoubleCategory, Grid, Rect, SplitStrategy, TwoCell, TwoCellGridAssignment,
};
pub use error::{Error, Result};
pub use numeric::{DenseMatrix, Tolerance};
pub use scan::{
    scan_2d, scan_blocked, scan_parallel, scan_serial, up_sweep, ScanResult, SweepTree,
};
