use crate::double::{CrossedModule, TwoCellGridAssignment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AbelianOp {
    #[default]
    Sum,
    Max,
}

/// The crossed module `A -> 1` for `A = (R, +)` or `(R ∪ {-inf}, max)`.
///
/// Edges are trivial and faces combine with `op`. `Max` has no inverses, so
/// [`CrossedModule::h_inv`] fails for it; nothing on the scan or lift path
/// needs them.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbelianModule {
    pub op: AbelianOp,
}

impl AbelianModule {
    pub fn new(op: AbelianOp) -> Self {
        Self { op }
    }
}

impl CrossedModule for AbelianModule {
    type G = ();
    type H = f64;

    fn g_mul(&self, _: &(), _: &()) {}
    fn g_inv(&self, _: &()) -> Result<()> {
        Ok(())
    }
    fn g_unit(&self) {}
    fn g_distance(&self, _: &(), _: &()) -> f64 {
        0.0
    }
    fn g_eq(&self, _: &(), _: &()) -> bool {
        true
    }

    fn h_mul(&self, a: &f64, b: &f64) -> f64 {
        match self.op {
            AbelianOp::Sum => a + b,
            AbelianOp::Max => a.max(*b),
        }
    }
    fn h_inv(&self, a: &f64) -> Result<f64> {
        match self.op {
            AbelianOp::Sum => Ok(-a),
            AbelianOp::Max => Err(Error::InvalidParameter("max has no inverses".into())),
        }
    }
    fn h_unit(&self) -> f64 {
        match self.op {
            AbelianOp::Sum => 0.0,
            AbelianOp::Max => f64::NEG_INFINITY,
        }
    }
    fn h_distance(&self, a: &f64, b: &f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs()
        }
    }
    fn h_eq(&self, a: &f64, b: &f64) -> bool {
        a == b
    }

    fn feedback(&self, _: &f64) {}
    fn act(&self, _: &(), h: &f64) -> Result<f64> {
        Ok(*h)
    }
}

/// Faces `values[i][j]` on `[i, i+1] x [j, j+1]` with trivial edges.
pub fn abelian_grid_assignment(
    values: &[Vec<f64>],
    _op: AbelianOp,
) -> Result<TwoCellGridAssignment<(), f64>> {
    let m = values.len();
    let n = values.first().map_or(0, Vec::len);
    if values.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch(
            "face values must form a rectangular grid".into(),
        ));
    }
    TwoCellGridAssignment::new(
        vec![vec![(); n + 1]; m],
        vec![vec![(); n]; m + 1],
        values.to_vec(),
    )
}
