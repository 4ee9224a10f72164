//! Nonparametric copula-entropy and mutual-information estimation.
//!
//! The estimator is rank-based and works in two steps: transform each
//! column of the data to pseudo-observations with its empirical CDF
//! ([`empirical_copula`]), then estimate the differential entropy of the
//! resulting point cloud with a Kozachenko-Leonenko k-nearest-neighbor
//! estimate ([`knn_entropy`]). The entropy of the pseudo-observations is
//! the copula entropy; mutual information is its negation.
//!
//! Because only ranks enter the estimate, the result is exactly invariant
//! under strictly increasing transforms of individual columns, and no
//! bandwidth or binning choices are involved. Everything is reported in
//! nats.

mod digamma;
mod knn;

pub use knn::{chebyshev, NeighborBackend};

use crate::error::{Error, Result};
use digamma::digamma;
use ndarray::Array2;

/// Smallest neighbor distance admitted into the log terms; exact
/// duplicates would otherwise produce `log 0`.
const EPS_FLOOR: f64 = 1e-12;

/// Pseudo-observations of a data matrix: every column rank-transformed
/// into (0, 1] by its empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    /// T x d matrix with entries r/T, r in {1, ..., T}.
    pub values: Array2<f64>,
}

impl RankMatrix {
    pub fn n_samples(&self) -> usize {
        self.values.nrows()
    }

    pub fn dims(&self) -> usize {
        self.values.ncols()
    }
}

/// A copula-entropy estimate together with the settings that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeEstimate {
    /// Estimated copula entropy in nats (non-positive in expectation).
    pub ce_nats: f64,
    /// Mutual information in nats; exactly `-ce_nats`.
    pub mi_nats: f64,
    /// Neighbor count used by the entropy estimate.
    pub k: usize,
    pub n_samples: usize,
    pub dims: usize,
}

fn validate_finite(data: &Array2<f64>, what: &str) -> Result<()> {
    if let Some((idx, _)) = data.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "{what} contains a non-finite value at row {}, column {}",
            idx.0, idx.1
        )));
    }
    Ok(())
}

/// Empirical-CDF ranks of one column, scaled into (0, 1]. Ties receive
/// their maximal rank.
pub(crate) fn rank_column(col: &[f64]) -> Vec<f64> {
    let mut sorted = col.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let inv_t = 1.0 / col.len() as f64;
    col.iter()
        .map(|&v| sorted.partition_point(|&x| x <= v) as f64 * inv_t)
        .collect()
}

/// Rank-transform every column of `data` with its empirical CDF.
///
/// Entry (t, i) is `#{s : data[s][i] <= data[t][i]} / T`; ties receive
/// their maximal rank, so repeated values map to the same pseudo-value.
pub fn empirical_copula(data: &Array2<f64>) -> Result<RankMatrix> {
    let t = data.nrows();
    if t < 2 {
        return Err(Error::InsufficientData(format!(
            "empirical copula needs at least 2 samples, got {t}"
        )));
    }
    validate_finite(data, "data matrix")?;
    let mut values = Array2::zeros((t, data.ncols()));
    for (j, col) in data.columns().into_iter().enumerate() {
        let col_vec: Vec<f64> = col.iter().copied().collect();
        for (i, r) in rank_column(&col_vec).into_iter().enumerate() {
            values[(i, j)] = r;
        }
    }
    Ok(RankMatrix { values })
}

#[derive(Clone, Copy)]
enum Support {
    Unbounded,
    UnitCube,
}

fn kl_entropy(points: &Array2<f64>, k: usize, backend: NeighborBackend, support: Support) -> Result<f64> {
    let (t, d) = points.dim();
    if t < 2 {
        return Err(Error::InsufficientData(format!(
            "entropy estimation needs at least 2 samples, got {t}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidInput("entropy of a 0-dimensional sample".into()));
    }
    if k < 1 || k > t - 1 {
        return Err(Error::Parameter(format!(
            "neighbor count k = {k} outside valid range 1..={}",
            t - 1
        )));
    }
    validate_finite(points, "point matrix")?;

    let flat: Vec<f64> = points.iter().copied().collect();
    let eps = knn::kth_neighbor_distances(&flat, d, k, backend);

    // Per-point log-volume of the k-th-neighbor ball. Contributions are
    // sorted before the final sum so the estimate is invariant, bit for
    // bit, under row and column permutations of the input.
    let mut contributions: Vec<f64> = Vec::with_capacity(t);
    match support {
        Support::Unbounded => {
            for &e in &eps {
                let e = if e == 0.0 { EPS_FLOOR } else { e };
                contributions.push((2.0 * e).ln());
            }
            contributions.sort_unstable_by(f64::total_cmp);
            let sum: f64 = contributions.iter().sum();
            Ok(digamma(t as f64) - digamma(k as f64) + (d as f64 / t as f64) * sum)
        }
        Support::UnitCube => {
            let mut sides = vec![0.0f64; d];
            for (i, &e) in eps.iter().enumerate() {
                let e = if e == 0.0 { EPS_FLOOR } else { e };
                let point = &flat[i * d..(i + 1) * d];
                for (s, &u) in sides.iter_mut().zip(point.iter()) {
                    *s = (u + e).min(1.0) - (u - e).max(0.0);
                }
                sides.sort_unstable_by(f64::total_cmp);
                contributions.push(sides.iter().map(|&s| s.ln()).sum());
            }
            contributions.sort_unstable_by(f64::total_cmp);
            let sum: f64 = contributions.iter().sum();
            Ok(digamma(t as f64) - digamma(k as f64) + sum / t as f64)
        }
    }
}

/// Kozachenko-Leonenko differential-entropy estimate in nats.
///
/// `H = psi(T) - psi(k) + (d/T) * sum_i log(2 * eps_i)` with `eps_i` the
/// Chebyshev distance from point `i` to its k-th nearest neighbor (self
/// excluded). Neighbor search is exact: the kd-tree backend returns the
/// same distances as an exhaustive scan.
pub fn knn_entropy(points: &Array2<f64>, k: usize) -> Result<f64> {
    knn_entropy_with(points, k, NeighborBackend::Auto)
}

/// [`knn_entropy`] with an explicit neighbor-search backend.
pub fn knn_entropy_with(points: &Array2<f64>, k: usize, backend: NeighborBackend) -> Result<f64> {
    kl_entropy(points, k, backend, Support::Unbounded)
}

/// Entropy estimate for points supported on the unit cube.
///
/// Same estimator as [`knn_entropy`], but each neighbor ball is clipped
/// to [0, 1]^d before its volume enters the log terms. For samples whose
/// support is exactly the unit cube (such as pseudo-observations) this
/// removes the boundary bias of the unclipped estimate.
pub fn knn_entropy_unit_cube(points: &Array2<f64>, k: usize) -> Result<f64> {
    knn_entropy_unit_cube_with(points, k, NeighborBackend::Auto)
}

/// [`knn_entropy_unit_cube`] with an explicit neighbor-search backend.
pub fn knn_entropy_unit_cube_with(
    points: &Array2<f64>,
    k: usize,
    backend: NeighborBackend,
) -> Result<f64> {
    if points.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::InvalidInput(
            "unit-cube entropy requires all coordinates in [0, 1]".into(),
        ));
    }
    kl_entropy(points, k, backend, Support::UnitCube)
}

/// Estimate the copula entropy (and mutual information) of a data matrix.
///
/// The columns are rank-transformed with [`empirical_copula`] and the
/// entropy of the pseudo-observations is estimated on their known
/// support, the unit cube. `mi_nats` is the negated entropy.
pub fn copula_entropy(data: &Array2<f64>, k: usize) -> Result<CeEstimate> {
    copula_entropy_with(data, k, NeighborBackend::Auto)
}

/// [`copula_entropy`] with an explicit neighbor-search backend.
pub fn copula_entropy_with(
    data: &Array2<f64>,
    k: usize,
    backend: NeighborBackend,
) -> Result<CeEstimate> {
    let (t, d) = data.dim();
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "copula entropy needs at least 2 columns, got {d}"
        )));
    }
    if t < k + 1 {
        return Err(Error::InsufficientData(format!(
            "copula entropy with k = {k} needs at least {} samples, got {t}",
            k + 1
        )));
    }
    let ranks = empirical_copula(data)?;
    let ce = kl_entropy(&ranks.values, k, backend, Support::UnitCube)?;
    Ok(CeEstimate { ce_nats: ce, mi_nats: -ce, k, n_samples: t, dims: d })
}

/// Entropy of an already rank-transformed matrix; used where the ranks
/// of one column are reused across many estimates.
pub(crate) fn rank_matrix_entropy(ranks: &Array2<f64>, k: usize) -> Result<f64> {
    kl_entropy(ranks, k, NeighborBackend::Auto, Support::UnitCube)
}
