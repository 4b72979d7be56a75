use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{Category, IntervalAssignment};
use crate::error::{Error, Result};
use crate::numeric::{mat_mul, DenseMatrix, Semiring, Tolerance};

/// Matrices over a semiring: objects are dimensions, a morphism `m -> n` is
/// an `n x m` matrix, and "`f` then `g`" is the product `g * f`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatCategory<S> {
    pub semiring: S,
    pub tol: Tolerance,
}

impl<S> MatCategory<S> {
    pub fn new(semiring: S, tol: Tolerance) -> Self {
        Self { semiring, tol }
    }
}

impl<S: Semiring<Scalar = f64>> Category for MatCategory<S> {
    type Object = usize;
    type Morphism = DenseMatrix;

    fn source(&self, f: &DenseMatrix) -> usize {
        f.cols()
    }
    fn target(&self, f: &DenseMatrix) -> usize {
        f.rows()
    }
    fn identity(&self, n: &usize) -> DenseMatrix {
        DenseMatrix::identity_in(*n, &self.semiring)
    }
    fn compose(&self, f: &DenseMatrix, g: &DenseMatrix) -> DenseMatrix {
        mat_mul(g, f, &self.semiring).expect("composable morphisms have matching dimensions")
    }
    fn same_object(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
    fn morphisms_eq(&self, a: &DenseMatrix, b: &DenseMatrix) -> bool {
        a.approx_eq(b, self.tol)
    }
}

/// A family of maps `phi_{rows x cols}: R -> S^{rows x cols}`.
pub trait Embedding {
    fn embed(&self, rows: usize, cols: usize, x: f64) -> Result<DenseMatrix>;
}

impl<F> Embedding for F
where
    F: Fn(usize, usize, f64) -> DenseMatrix,
{
    fn embed(&self, rows: usize, cols: usize, x: f64) -> Result<DenseMatrix> {
        Ok(self(rows, cols, x))
    }
}

/// `phi_{rows x cols}(x) = x * E_{rows x cols}` for stored templates `E`.
/// Shapes without a stored template fall back to a template drawn from a
/// generator seeded by `(seed, rows, cols)`, with entries uniform in `[-1, 1]`.
#[derive(Debug, Clone, Default)]
pub struct TemplateEmbedding {
    templates: HashMap<(usize, usize), DenseMatrix>,
    seed: Option<u64>,
}

impl TemplateEmbedding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seeded(seed: u64) -> Self {
        Self {
            templates: HashMap::new(),
            seed: Some(seed),
        }
    }

    pub fn with_template(mut self, template: DenseMatrix) -> Self {
        self.templates.insert(template.shape(), template);
        self
    }

    pub fn template(&self, rows: usize, cols: usize) -> Result<DenseMatrix> {
        if let Some(t) = self.templates.get(&(rows, cols)) {
            return Ok(t.clone());
        }
        let seed = self.seed.ok_or_else(|| {
            Error::ShapeMismatch(format!("no embedding template for shape {rows}x{cols}"))
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((rows as u64) << 32) ^ cols as u64);
        Ok(DenseMatrix::from_fn(rows, cols, |_, _| {
            rng.gen_range(-1.0..=1.0)
        }))
    }
}

impl Embedding for TemplateEmbedding {
    fn embed(&self, rows: usize, cols: usize, x: f64) -> Result<DenseMatrix> {
        Ok(self.template(rows, cols)?.scale(x))
    }
}

/// Dimension profile `n_0, n_1, ...` and the embeddings used per cell.
#[derive(Debug, Clone)]
pub struct DimProfile<E> {
    pub dims: Vec<usize>,
    pub embedding: E,
}

/// Cell `i` is `phi_{dims[i+1] x dims[i]}(series[i])`, a morphism `dims[i] -> dims[i+1]`.
pub fn make_mat_assignment<E: Embedding>(
    series: &[f64],
    profile: &DimProfile<E>,
) -> Result<IntervalAssignment<usize, DenseMatrix>> {
    let dims = &profile.dims;
    if dims.len() != series.len() + 1 {
        return Err(Error::ShapeMismatch(format!(
            "{} values need {} dimensions, got {}",
            series.len(),
            series.len() + 1,
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidParameter(
            "dimensions must be positive".into(),
        ));
    }
    let cells = series
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let (rows, cols) = (dims[i + 1], dims[i]);
            let cell = profile.embedding.embed(rows, cols, x)?;
            if cell.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "embedding for cell {i} returned {}x{}, expected {rows}x{cols}",
                    cell.rows(),
                    cell.cols()
                )));
            }
            Ok(cell)
        })
        .collect::<Result<Vec<_>>>()?;
    IntervalAssignment::new(0, dims.clone(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{lift, validate_assignment, Interval};
    use crate::numeric::{MinPlus, RealField};

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn one_by_one_gives_products() {
        let cat = MatCategory::new(RealField, Tolerance::default());
        let profile = DimProfile {
            dims: vec![1; 5],
            embedding: |_: usize, _: usize, x: f64| DenseMatrix::from_rows(&[[x]]).unwrap(),
        };
        let asg = make_mat_assignment(&[2.0, -3.0, 0.5, 4.0], &profile).unwrap();
        assert_eq!(lift(&asg, iv(0, 4), &cat).unwrap().get(0, 0), -12.0);
    }

    #[test]
    fn shapes_follow_dims() {
        let cat = MatCategory::new(RealField, Tolerance::default());
        let profile = DimProfile {
            dims: vec![2, 3, 2],
            embedding: TemplateEmbedding::seeded(3),
        };
        let asg = make_mat_assignment(&[0.5, -1.5], &profile).unwrap();
        assert!(validate_assignment(&asg, &cat).is_empty());
        assert_eq!(asg.cells()[0].shape(), (3, 2));
        assert_eq!(lift(&asg, iv(0, 2), &cat).unwrap().shape(), (2, 2));
        assert_eq!(
            lift(&asg, iv(1, 1), &cat).unwrap(),
            DenseMatrix::identity(3)
        );
    }

    #[test]
    fn hand_built_shape_check() {
        let cat = MatCategory::new(RealField, Tolerance::default());
        let good = IntervalAssignment::new(
            0,
            vec![2, 3, 3],
            vec![DenseMatrix::zeros(3, 2), DenseMatrix::zeros(3, 3)],
        )
        .unwrap();
        assert!(validate_assignment(&good, &cat).is_empty());
        let bad = IntervalAssignment::new(0, vec![2, 3], vec![DenseMatrix::zeros(2, 2)]).unwrap();
        assert_eq!(validate_assignment(&bad, &cat), vec![0]);
    }

    #[test]
    fn tropical_lift_is_serial_min_plus_fold() {
        let cat = MatCategory::new(MinPlus, Tolerance::exact());
        let profile = DimProfile {
            dims: vec![2; 6],
            embedding: TemplateEmbedding::new()
                .with_template(DenseMatrix::from_rows(&[[1.0, 3.0], [2.0, 0.5]]).unwrap()),
        };
        let series = [1.0, -2.0, 0.5, 3.0, 2.0];
        let asg = make_mat_assignment(&series, &profile).unwrap();
        let lifted = lift(&asg, iv(0, 5), &cat).unwrap();
        let mut acc = DenseMatrix::identity_in(2, &MinPlus);
        for c in asg.cells() {
            acc = mat_mul(c, &acc, &MinPlus).unwrap();
        }
        assert_eq!(lifted, acc);
    }

    #[test]
    fn profile_errors() {
        let profile = DimProfile {
            dims: vec![2, 2],
            embedding: TemplateEmbedding::new(),
        };
        assert!(matches!(
            make_mat_assignment(&[1.0], &profile),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(make_mat_assignment(&[1.0, 2.0], &profile).is_err());
        let wrong = DimProfile {
            dims: vec![2, 3],
            embedding: |_: usize, _: usize, _: f64| DenseMatrix::zeros(2, 2),
        };
        assert!(matches!(
            make_mat_assignment(&[1.0], &wrong),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn seeded_templates_are_deterministic() {
        let a = TemplateEmbedding::seeded(9).template(3, 4).unwrap();
        let b = TemplateEmbedding::seeded(9).template(3, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, TemplateEmbedding::seeded(10).template(3, 4).unwrap());
    }
}
