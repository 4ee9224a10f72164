//! The identification pipeline: differentiate the trajectory, score every
//! (derivative, term) pair by rank-based mutual information, and rank the
//! candidate terms per derivative, optionally with permutation p-values.

use crate::copula_entropy::{rank_column, rank_matrix_entropy};
use crate::diffop::{forward_difference, DerivativeMatrix};
use crate::dynsys::StateTrajectory;
use crate::error::{Error, Result};
use crate::term_library::{build_terms, evaluate_terms, TermMode, TermSpec};
use ndarray::{s, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Mutual-information scores for every (derivative, term) pair.
///
/// Rows follow the derivative order, columns the term order. Pairs whose
/// derivative or term column has zero variance carry no score: the rank
/// transform of a constant column is meaningless, so such entries are
/// reported as not applicable rather than as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct CeMatrix {
    mi: Array2<f64>,
    degenerate_derivatives: Vec<bool>,
    degenerate_terms: Vec<bool>,
    derivative_names: Vec<String>,
    term_names: Vec<String>,
    k: usize,
    n_effective: usize,
}

impl CeMatrix {
    /// MI in nats for one pair, `None` if either column is degenerate.
    pub fn mi_at(&self, derivative: usize, term: usize) -> Option<f64> {
        if self.degenerate_derivatives[derivative] || self.degenerate_terms[term] {
            None
        } else {
            Some(self.mi[(derivative, term)])
        }
    }

    pub fn derivative_names(&self) -> &[String] {
        &self.derivative_names
    }

    pub fn term_names(&self) -> &[String] {
        &self.term_names
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_effective(&self) -> usize {
        self.n_effective
    }

    pub fn degenerate_derivatives(&self) -> &[bool] {
        &self.degenerate_derivatives
    }

    pub fn degenerate_terms(&self) -> &[bool] {
        &self.degenerate_terms
    }
}

/// Settings for the permutation significance test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermutationConfig {
    /// Number of shuffles B; p-values live on the grid (1 + c) / (B + 1).
    pub count: usize,
    /// Nominal significance level, recorded in the report.
    pub alpha: f64,
    /// Master seed; every shuffle derives its own substream from it.
    pub seed: u64,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        Self { count: 200, alpha: 0.05, seed: 0 }
    }
}

impl PermutationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count < 20 {
            return Err(Error::Parameter(format!(
                "permutation count must be at least 20, got {}",
                self.count
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent substream seed for a tagged task under a master seed.
fn substream(master: u64, tags: &[u64]) -> u64 {
    let mut s = splitmix64(master ^ 0xA076_1D64_78BD_642F);
    for &t in tags {
        s = splitmix64(s ^ splitmix64(t));
    }
    s
}

fn is_constant(col: &[f64]) -> bool {
    col.windows(2).all(|w| w[0] == w[1])
}

/// MI of a pair of pre-ranked columns; bit-identical to running
/// `copula_entropy` on the raw two-column matrix, since the rank
/// transform acts per column.
fn paired_mi(rank_a: &[f64], rank_b: &[f64], k: usize) -> Result<f64> {
    let t = rank_a.len();
    let mut pair = Array2::zeros((t, 2));
    for i in 0..t {
        pair[(i, 0)] = rank_a[i];
        pair[(i, 1)] = rank_b[i];
    }
    Ok(-rank_matrix_entropy(&pair, k)?)
}

/// Score every (derivative, term) pair by mutual information in nats.
///
/// All pairs use the same neighbor count `k`. Scoring is parallel across
/// pairs and independent of scheduling order.
pub fn score_terms(
    derivs: &DerivativeMatrix,
    covariates: &Array2<f64>,
    term_names: &[String],
    k: usize,
) -> Result<CeMatrix> {
    let t = derivs.n_rows();
    if covariates.nrows() != t {
        return Err(Error::Alignment(format!(
            "derivatives have {t} rows, covariates {}",
            covariates.nrows()
        )));
    }
    if covariates.ncols() != term_names.len() {
        return Err(Error::Alignment(format!(
            "{} covariate columns but {} term names",
            covariates.ncols(),
            term_names.len()
        )));
    }
    if t < k + 1 {
        return Err(Error::InsufficientData(format!(
            "need at least {} aligned rows for k = {k}, got {t}",
            k + 1
        )));
    }

    let deriv_cols: Vec<Vec<f64>> =
        (0..derivs.values().ncols()).map(|i| derivs.values().column(i).to_vec()).collect();
    let cov_cols: Vec<Vec<f64>> =
        (0..covariates.ncols()).map(|j| covariates.column(j).to_vec()).collect();

    let degenerate_derivatives: Vec<bool> = deriv_cols.iter().map(|c| is_constant(c)).collect();
    let degenerate_terms: Vec<bool> = cov_cols.iter().map(|c| is_constant(c)).collect();

    let deriv_ranks: Vec<Vec<f64>> = deriv_cols.iter().map(|c| rank_column(c)).collect();
    let cov_ranks: Vec<Vec<f64>> = cov_cols.iter().map(|c| rank_column(c)).collect();

    let n_d = deriv_cols.len();
    let n_t = cov_cols.len();
    let scores: Vec<Result<f64>> = (0..n_d * n_t)
        .into_par_iter()
        .map(|flat| {
            let (i, j) = (flat / n_t, flat % n_t);
            if degenerate_derivatives[i] || degenerate_terms[j] {
                Ok(0.0)
            } else {
                paired_mi(&deriv_ranks[i], &cov_ranks[j], k)
            }
        })
        .collect();

    let mut mi = Array2::zeros((n_d, n_t));
    for (flat, score) in scores.into_iter().enumerate() {
        mi[(flat / n_t, flat % n_t)] = score?;
    }

    Ok(CeMatrix {
        mi,
        degenerate_derivatives,
        degenerate_terms,
        derivative_names: derivs.var_names().to_vec(),
        term_names: term_names.to_vec(),
        k,
        n_effective: t,
    })
}

/// One scored term in a per-derivative ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedTerm {
    pub term: String,
    /// MI in nats; `None` when the pair involved a constant column.
    pub mi_nats: Option<f64>,
    /// 1-based position in the ranking.
    pub rank: usize,
    pub p_value: Option<f64>,
}

/// All candidate terms ranked for one derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRanking {
    pub derivative: String,
    /// True when the derivative column itself had zero variance.
    pub degenerate: bool,
    pub terms: Vec<RankedTerm>,
}

/// Sort terms by MI, descending, for each derivative. Ties and
/// not-applicable entries keep the term-library order.
pub fn rank_terms(cem: &CeMatrix) -> Vec<DerivativeRanking> {
    let n_t = cem.term_names.len();
    cem.derivative_names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut order: Vec<usize> = (0..n_t).collect();
            order.sort_by(|&a, &b| match (cem.mi_at(i, a), cem.mi_at(i, b)) {
                (Some(x), Some(y)) => y.total_cmp(&x),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            });
            let terms = order
                .iter()
                .enumerate()
                .map(|(pos, &j)| RankedTerm {
                    term: cem.term_names[j].clone(),
                    mi_nats: cem.mi_at(i, j),
                    rank: pos + 1,
                    p_value: None,
                })
                .collect();
            DerivativeRanking {
                derivative: name.clone(),
                degenerate: cem.degenerate_derivatives[i],
                terms,
            }
        })
        .collect()
}

/// Permutation p-value for the dependence between two aligned columns.
///
/// The covariate column is reshuffled `count` times with seeded
/// permutations; `p = (1 + #{b : mi_b >= mi_observed}) / (count + 1)`.
/// Deterministic per seed, independent of scheduling.
pub fn permutation_null(
    deriv_col: &[f64],
    cov_col: &[f64],
    k: usize,
    pcfg: &PermutationConfig,
) -> Result<f64> {
    if deriv_col.len() != cov_col.len() {
        return Err(Error::Alignment(format!(
            "columns of length {} and {}",
            deriv_col.len(),
            cov_col.len()
        )));
    }
    pcfg.validate()?;
    for col in [deriv_col, cov_col] {
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("permutation test input is not finite".into()));
        }
    }

    let rank_d = rank_column(deriv_col);
    let rank_c = rank_column(cov_col);
    let observed = paired_mi(&rank_d, &rank_c, k)?;

    // Shuffling values then ranking equals ranking then applying the same
    // permutation, so the precomputed ranks can be reused per replicate.
    let exceed: usize = (0..pcfg.count)
        .into_par_iter()
        .map(|b| -> Result<usize> {
            let mut rng: rand_chacha::ChaCha8Rng =
                rand::SeedableRng::seed_from_u64(substream(pcfg.seed, &[b as u64]));
            let mut shuffled = rank_c.clone();
            shuffle(&mut shuffled, &mut rng);
            let mi_b = paired_mi(&rank_d, &shuffled, k)?;
            Ok(usize::from(mi_b >= observed))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    Ok((1 + exceed) as f64 / (pcfg.count + 1) as f64)
}

fn shuffle<R: rand::Rng>(values: &mut [f64], rng: &mut R) {
    for i in (1..values.len()).rev() {
        let j = rng.gen_range(0..=i);
        values.swap(i, j);
    }
}

/// Where the analyzed trajectory came from; recorded in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceInfo {
    Simulated {
        system: String,
        params: BTreeMap<String, f64>,
        initial_state: Vec<f64>,
        t0: f64,
        horizon: f64,
        sample_rate: u32,
        burn_in: f64,
        seed: u64,
    },
    Csv {
        path: String,
    },
    InMemory,
}

/// Permutation-test settings as recorded in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationMeta {
    pub count: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub k: usize,
    pub terms_mode: String,
    pub term_names: Vec<String>,
    pub var_names: Vec<String>,
    pub n_samples: usize,
    pub n_effective: usize,
    pub dt: f64,
    pub permutations: Option<PermutationMeta>,
    pub source: SourceInfo,
    /// Effective configuration as key = value pairs (filled by the CLI).
    pub config_echo: BTreeMap<String, String>,
    /// Canonical command line that produced the report (CLI runs only).
    pub command_line: Option<String>,
}

/// Ranked identification result with full provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentificationReport {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub derivatives: Vec<DerivativeRanking>,
    pub warnings: Vec<String>,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Run the full pipeline on a trajectory: forward differences, candidate
/// evaluation on the aligned rows, per-pair MI scores, rankings, and
/// (when configured) permutation p-values.
pub fn identify(
    traj: &StateTrajectory,
    mode: &TermMode,
    k: usize,
    permutations: Option<&PermutationConfig>,
) -> Result<IdentificationReport> {
    if traj.n_samples() < k + 2 {
        return Err(Error::InsufficientData(format!(
            "identification with k = {k} needs at least {} samples, got {}",
            k + 2,
            traj.n_samples()
        )));
    }
    let derivs = forward_difference(traj)?;
    let terms: Vec<TermSpec> = build_terms(traj.var_names(), mode)?;
    let term_names: Vec<String> = terms.iter().map(|t| t.display().to_string()).collect();
    let head = traj.states().slice(s![..traj.n_samples() - 1, ..]);
    let covariates = evaluate_terms(&head, &terms)?;
    let cem = score_terms(&derivs, &covariates, &term_names, k)?;
    let mut rankings = rank_terms(&cem);

    if let Some(pcfg) = permutations {
        pcfg.validate()?;
        let n_t = term_names.len();
        for (i, ranking) in rankings.iter_mut().enumerate() {
            let deriv_col = derivs.values().column(i).to_vec();
            let p_values: Vec<Option<f64>> = (0..n_t)
                .map(|j| -> Result<Option<f64>> {
                    if cem.mi_at(i, j).is_none() {
                        return Ok(None);
                    }
                    let pair_cfg = PermutationConfig {
                        count: pcfg.count,
                        alpha: pcfg.alpha,
                        seed: substream(pcfg.seed, &[i as u64, j as u64]),
                    };
                    let cov_col = covariates.column(j).to_vec();
                    Ok(Some(permutation_null(&deriv_col, &cov_col, k, &pair_cfg)?))
                })
                .collect::<Result<_>>()?;
            for entry in ranking.terms.iter_mut() {
                let j = term_names.iter().position(|n| n == &entry.term).unwrap();
                entry.p_value = p_values[j];
            }
        }
    }

    let mut warnings = Vec::new();
    for (i, deg) in cem.degenerate_derivatives().iter().enumerate() {
        if *deg {
            warnings.push(format!(
                "derivative '{}' has zero variance; its scores are not applicable",
                cem.derivative_names()[i]
            ));
        }
    }
    for (j, deg) in cem.degenerate_terms().iter().enumerate() {
        if *deg {
            warnings.push(format!(
                "term '{}' is constant over the trajectory; its scores are not applicable",
                cem.term_names()[j]
            ));
        }
    }

    Ok(IdentificationReport {
        schema_version: SCHEMA_VERSION,
        metadata: ReportMetadata {
            k,
            terms_mode: mode.label(),
            term_names,
            var_names: traj.var_names().to_vec(),
            n_samples: traj.n_samples(),
            n_effective: cem.n_effective(),
            dt: traj.dt(),
            permutations: permutations.map(|p| PermutationMeta {
                count: p.count,
                alpha: p.alpha,
                seed: p.seed,
            }),
            source: SourceInfo::InMemory,
            config_echo: BTreeMap::new(),
            command_line: None,
        },
        derivatives: rankings,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula_entropy::copula_entropy;
    use crate::dynsys::{integrate_rk4, SimConfig, StateTrajectory, SystemSpec};
    use ndarray::Array1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn noise_matrix(seed: u64, t: usize, cols: usize) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((t, cols), |_| rng.gen_range(-1.0..1.0))
    }

    fn derivative_matrix(values: Array2<f64>) -> DerivativeMatrix {
        let names = (0..values.ncols()).map(|i| format!("d{i}")).collect();
        DerivativeMatrix::new(values, names).unwrap()
    }

    #[test]
    fn identical_column_dominates_its_row() {
        let covs = noise_matrix(1, 400, 4);
        let mut dvals = Array2::zeros((400, 1));
        dvals.column_mut(0).assign(&covs.column(2));
        let derivs = derivative_matrix(dvals);
        let names: Vec<String> = (0..4).map(|j| format!("t{j}")).collect();
        let cem = score_terms(&derivs, &covs, &names, 3).unwrap();
        let best = (0..4).max_by(|&a, &b| {
            cem.mi_at(0, a).unwrap().total_cmp(&cem.mi_at(0, b).unwrap())
        });
        assert_eq!(best, Some(2));
    }

    #[test]
    fn independent_noise_scores_near_zero() {
        let covs = noise_matrix(2, 3000, 3);
        let derivs = derivative_matrix(noise_matrix(3, 3000, 1));
        let names: Vec<String> = (0..3).map(|j| format!("t{j}")).collect();
        let cem = score_terms(&derivs, &covs, &names, 3).unwrap();
        for j in 0..3 {
            let mi = cem.mi_at(0, j).unwrap();
            assert!(mi.abs() <= 0.05, "pair (0, {j}) mi = {mi}");
        }
    }

    #[test]
    fn score_matches_copula_entropy_bitwise() {
        let covs = noise_matrix(4, 300, 2);
        let derivs = derivative_matrix(noise_matrix(5, 300, 1));
        let names = vec!["a".to_string(), "b".to_string()];
        let cem = score_terms(&derivs, &covs, &names, 3).unwrap();
        for j in 0..2 {
            let mut pair = Array2::zeros((300, 2));
            pair.column_mut(0).assign(&derivs.values().column(0));
            pair.column_mut(1).assign(&covs.column(j));
            let direct = copula_entropy(&pair, 3).unwrap().mi_nats;
            assert_eq!(cem.mi_at(0, j).unwrap().to_bits(), direct.to_bits());
        }
    }

    #[test]
    fn row_mismatch_is_an_alignment_error() {
        let covs = noise_matrix(6, 100, 2);
        let derivs = derivative_matrix(noise_matrix(7, 99, 1));
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            score_terms(&derivs, &covs, &names, 3),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn ranking_sorts_descending_with_stable_ties() {
        let covs = noise_matrix(8, 200, 3);
        let derivs = derivative_matrix(noise_matrix(9, 200, 1));
        let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let mut cem = score_terms(&derivs, &covs, &names, 3).unwrap();
        cem.mi = ndarray::array![[0.1, 0.9, 0.5]];
        let ranked = rank_terms(&cem);
        let order: Vec<&str> = ranked[0].terms.iter().map(|t| t.term.as_str()).collect();
        assert_eq!(order, vec!["y", "z", "x"]);
        assert_eq!(ranked[0].terms[0].rank, 1);

        cem.mi = ndarray::array![[0.25, 0.25, 0.25]];
        let ranked = rank_terms(&cem);
        let order: Vec<&str> = ranked[0].terms.iter().map(|t| t.term.as_str()).collect();
        assert_eq!(order, vec!["x", "y", "z"]);
    }

    #[test]
    fn permutation_p_for_identical_columns_is_minimal() {
        // perfect dependence: no shuffle can reach the observed MI
        let col: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            (0..3000).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let pcfg = PermutationConfig { count: 200, alpha: 0.05, seed: 42 };
        let p = permutation_null(&col, &col, 3, &pcfg).unwrap();
        assert_eq!(p, 1.0 / 201.0);
    }

    #[test]
    fn permutation_p_stays_in_bounds() {
        let a: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let b: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(12);
            (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        for seed in 0..5 {
            let pcfg = PermutationConfig { count: 50, alpha: 0.05, seed };
            let p = permutation_null(&a, &b, 3, &pcfg).unwrap();
            assert!((1.0 / 51.0..=1.0).contains(&p), "p = {p}");
        }
    }

    #[test]
    fn permutation_is_seed_deterministic() {
        let a: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let b: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(14);
            (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let pcfg = PermutationConfig { count: 60, alpha: 0.05, seed: 7 };
        let p1 = permutation_null(&a, &b, 3, &pcfg).unwrap();
        let p2 = permutation_null(&a, &b, 3, &pcfg).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn small_permutation_count_is_rejected() {
        let pcfg = PermutationConfig { count: 5, alpha: 0.05, seed: 0 };
        assert!(permutation_null(&[1.0, 2.0], &[1.0, 2.0], 1, &pcfg).is_err());
    }

    fn decay_trajectory() -> StateTrajectory {
        let spec = SystemSpec::new(
            "decay",
            vec!["x".into()],
            BTreeMap::new(),
            Arc::new(|s: &[f64], _: &BTreeMap<String, f64>, out: &mut [f64]| out[0] = -s[0]),
        )
        .unwrap();
        let config = SimConfig::new(vec![1.0], 5.0, 100);
        integrate_rk4(&spec, &config).unwrap()
    }

    #[test]
    fn linear_system_ranks_its_own_term_first() {
        let traj = decay_trajectory();
        let mode = TermMode::Explicit(vec!["x".into(), "x^2".into()]);
        let report = identify(&traj, &mode, 3, None).unwrap();
        assert_eq!(report.derivatives[0].terms[0].term, "x");
        assert_eq!(report.derivatives[0].terms[0].rank, 1);
    }

    #[test]
    fn constant_trajectory_flags_degenerate_derivatives() {
        let times = Array1::from_iter((0..100).map(|i| i as f64 * 0.01));
        let states = Array2::from_elem((100, 2), 3.0);
        let traj =
            StateTrajectory::new(times, states, vec!["x".into(), "y".into()]).unwrap();
        let report = identify(&traj, &TermMode::Paper, 3, None).unwrap();
        assert!(report.derivatives.iter().all(|d| d.degenerate));
        assert!(report.derivatives.iter().all(|d| d.terms.iter().all(|t| t.mi_nats.is_none())));
        assert!(!report.warnings.is_empty());
    }

    #[test]
    fn report_is_reproducible() {
        let traj = decay_trajectory();
        let mode = TermMode::Explicit(vec!["x".into(), "x^2".into()]);
        let pcfg = PermutationConfig { count: 20, alpha: 0.05, seed: 5 };
        let a = identify(&traj, &mode, 3, Some(&pcfg)).unwrap();
        let b = identify(&traj, &mode, 3, Some(&pcfg)).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn monotone_covariate_transform_keeps_scores_bit_identical() {
        let covs = noise_matrix(20, 250, 3);
        let derivs = derivative_matrix(noise_matrix(21, 250, 2));
        let names: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let cem = score_terms(&derivs, &covs, &names, 3).unwrap();

        let mut mapped = covs.clone();
        mapped.column_mut(1).mapv_inplace(|v| v.exp());
        let cem2 = score_terms(&derivs, &mapped, &names, 3).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(
                    cem.mi_at(i, j).unwrap().to_bits(),
                    cem2.mi_at(i, j).unwrap().to_bits()
                );
            }
        }
    }

    #[test]
    fn time_rescaling_leaves_rankings_unchanged() {
        // doubling dt halves every derivative, a strictly monotone map
        let spec = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let config = SimConfig::new(vec![1.0, 2.0, 3.0], 8.0, 100);
        let traj = integrate_rk4(&spec, &config).unwrap();
        let report = identify(&traj, &TermMode::Paper, 3, None).unwrap();

        let times2 = traj.times().mapv(|t| 2.0 * t);
        let traj2 =
            StateTrajectory::new(times2, traj.states().clone(), traj.var_names().to_vec())
                .unwrap();
        let report2 = identify(&traj2, &TermMode::Paper, 3, None).unwrap();

        for (a, b) in report.derivatives.iter().zip(&report2.derivatives) {
            let oa: Vec<&str> = a.terms.iter().map(|t| t.term.as_str()).collect();
            let ob: Vec<&str> = b.terms.iter().map(|t| t.term.as_str()).collect();
            assert_eq!(oa, ob);
            for (ta, tb) in a.terms.iter().zip(&b.terms) {
                assert_eq!(
                    ta.mi_nats.unwrap().to_bits(),
                    tb.mi_nats.unwrap().to_bits(),
                    "mi changed under time rescaling"
                );
            }
        }
    }
}
