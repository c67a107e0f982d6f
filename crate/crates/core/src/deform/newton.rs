use nalgebra::{DMatrix, DVector};

use super::chart::{upper_pairs, PeriodChart, PeriodPoint, C64};
use super::{DeformError, DeformTolerances};

#[derive(Clone, Debug)]
pub struct NewtonRun {
    pub point: PeriodPoint,
    /// coordinates of t in the chart's invariant directions
    pub coordinates: Vec<C64>,
    /// ||xi^{0,2}|| before each step and at the end
    pub residuals: Vec<f64>,
}

impl NewtonRun {
    pub fn residual(&self) -> f64 {
        *self.residuals.last().expect("at least one residual")
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len() - 1
    }
}

/// Solves xi^{0,2}(t) = 0 for t in the invariant chart by Newton steps with
/// least-norm least-squares updates, starting from `start` projected onto
/// the invariant directions.
pub fn newton_solve(
    chart: &PeriodChart,
    xi: &DMatrix<f64>,
    start: &PeriodPoint,
    tol: &DeformTolerances,
) -> Result<NewtonRun, DeformError> {
    let n = chart.n();
    let pairs = upper_pairs(n);
    let mut coords: Vec<C64> = chart.tangent.iter().map(|d| d.dotc(&start.t)).collect();
    let mut residuals = Vec::new();
    loop {
        let point = chart.point(&coords);
        let cond = point.conditioning();
        if !(cond <= tol.conditioning) {
            return Err(DeformError::IllConditioned(cond));
        }
        let w = chart.two_zero_part(xi, &point);
        let r = w.norm();
        residuals.push(r);
        if r < tol.newton {
            return Ok(NewtonRun { point, coordinates: coords, residuals });
        }
        let iterations = residuals.len() - 1;
        if chart.dimension() == 0 || iterations >= tol.max_iterations || !r.is_finite() {
            return Err(DeformError::NoConvergence { iterations, residual: r });
        }
        let jac = chart.linearization(xi, &point);
        let rhs = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(a, b)| -w[(a, b)]));
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-13)
            .map_err(|_| DeformError::NoConvergence { iterations, residual: r })?;
        for (c, d) in coords.iter_mut().zip(step.iter()) {
            *c += d;
        }
    }
}
