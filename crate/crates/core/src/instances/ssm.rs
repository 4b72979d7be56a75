use super::monoids::delooping_cells;
use crate::category::IntervalAssignment;
use crate::error::{Error, Result};
use crate::numeric::{mat_exp, DenseMatrix};

/// Generators `A_1..A_d` of a linear controlled ODE `dY = sum_k A_k Y dX^(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SsmParams {
    generators: Vec<DenseMatrix>,
}

impl SsmParams {
    pub fn new(generators: Vec<DenseMatrix>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidParameter("need at least one generator".into()))?;
        let e = first.rows();
        if let Some(bad) = generators.iter().find(|a| a.shape() != (e, e)) {
            return Err(Error::ShapeMismatch(format!(
                "generators must all be {e}x{e}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self { generators })
    }

    /// Channel count `d`.
    pub fn channels(&self) -> usize {
        self.generators.len()
    }

    /// State dimension `e`.
    pub fn state_dim(&self) -> usize {
        self.generators[0].rows()
    }

    pub fn generators(&self) -> &[DenseMatrix] {
        &self.generators
    }

    /// `sum_k A_k * increment[k]`.
    pub fn weighted(&self, increment: &[f64]) -> DenseMatrix {
        let e = self.state_dim();
        self.generators
            .iter()
            .zip(increment)
            .fold(DenseMatrix::zeros(e, e), |acc, (a, dx)| {
                acc.add(&a.scale(*dx))
            })
    }
}

/// Cell `k` is `exp(sum_j A_j (x_{k+1}^(j) - x_k^(j)))`, so the lift over
/// `[0, n]` is the state transition of the ODE driven by the piecewise-linear
/// path through `series[0..=n]`. Use with `MonoidDelooping(MatrixGroup)`.
pub fn make_ssm_assignment(
    series: &[Vec<f64>],
    params: &SsmParams,
) -> Result<IntervalAssignment<(), DenseMatrix>> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "state-space assignment needs at least 2 points, got {}",
            series.len()
        )));
    }
    let d = params.channels();
    if let Some((k, x)) = series.iter().enumerate().find(|(_, x)| x.len() != d) {
        return Err(Error::ShapeMismatch(format!(
            "point {k} has {} channels, parameters have {d}",
            x.len()
        )));
    }
    let cells = series
        .windows(2)
        .map(|w| {
            let dx: Vec<f64> = w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect();
            mat_exp(&params.weighted(&dx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(delooping_cells(cells))
}
