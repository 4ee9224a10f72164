//! Forward-difference time derivatives of trajectory variables.

use crate::dynsys::StateTrajectory;
use crate::error::{Error, Result};
use ndarray::Array2;

/// Derivatives of each state variable, one row per trajectory interval.
///
/// Row `t` holds `(states[t+1] - states[t]) / dt` and is aligned with the
/// left endpoint: it pairs with trajectory row `t`, so covariates
/// evaluated at rows `0..T-1` line up with it.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeMatrix {
    values: Array2<f64>,
    var_names: Vec<String>,
}

impl DerivativeMatrix {
    /// Wrap precomputed derivative columns; entries must be finite.
    pub fn new(values: Array2<f64>, var_names: Vec<String>) -> Result<Self> {
        if values.ncols() != var_names.len() {
            return Err(Error::InvalidInput(format!(
                "{} derivative columns but {} names",
                values.ncols(),
                var_names.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("derivative matrix contains non-finite values".into()));
        }
        Ok(Self { values, var_names })
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Labels like "dx/dt", in the source variable order.
    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }
}

/// First-order forward differences: `(x[t+1] - x[t]) / dt` for every
/// variable, dropping the final sample.
pub fn forward_difference(traj: &StateTrajectory) -> Result<DerivativeMatrix> {
    let t = traj.n_samples();
    if t < 2 {
        return Err(Error::InsufficientData(format!(
            "forward differences need at least 2 samples, got {t}"
        )));
    }
    let dt = traj.dt();
    debug_assert!(dt > 0.0, "trajectory spacing validated at construction");
    let states = traj.states();
    let mut values = Array2::zeros((t - 1, traj.dim()));
    for row in 0..t - 1 {
        for col in 0..traj.dim() {
            values[(row, col)] = (states[(row + 1, col)] - states[(row, col)]) / dt;
        }
    }
    let var_names = traj.var_names().iter().map(|v| format!("d{v}/dt")).collect();
    DerivativeMatrix::new(values, var_names)
}
