//! Interval fuzzy c-regression partitioning.
//!
//! Each cluster is an affine regression hyperplane through input-output
//! space. Points are weighted by how well each hyperplane explains them
//! (squared residual plus a ridge prior), and memberships are computed with
//! two fuzzifier exponents; the pointwise max/min of the two membership
//! branches form an interval membership. Coefficients are refitted by
//! weighted mini-batch SGD, alternating with membership updates until the
//! coefficients stop moving.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// A pair of coefficient vectors bounding a rule's regression hyperplane.
///
/// Both vectors use the layout `[w_1, ..., w_m, w_0]`: feature weights
/// first, intercept last, so they apply to an input row extended with a
/// trailing 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientInterval {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl CoefficientInterval {
    /// Pair two equally-sized, non-empty coefficient vectors.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Result<CoefficientInterval> {
        if upper.is_empty() {
            return Err(Error::InvalidDataset(
                "coefficient interval has empty vectors".into(),
            ));
        }
        if upper.len() != lower.len() {
            return Err(Error::DimensionMismatch {
                expected: upper.len(),
                got: lower.len(),
            });
        }
        Ok(CoefficientInterval { upper, lower })
    }

    /// Coefficient vector length (`m + 1`).
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    /// Never true for a constructed interval; present for API completeness.
    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Elementwise midpoint of the two bounding vectors.
    pub fn reduced(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| (u + l) / 2.0)
            .collect()
    }
}

/// Collapse a coefficient interval to its midpoint vector.
pub fn reduce_coefficients(interval: &CoefficientInterval) -> Vec<f64> {
    interval.reduced()
}

/// Upper and lower membership weights, one row per cluster, one column per
/// data point.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrices {
    pub upper: Vec<Vec<f64>>,
    pub lower: Vec<Vec<f64>>,
}

/// Pointwise regression errors for the upper and lower coefficient vectors
/// of every cluster, plus their elementwise average.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMatrices {
    pub upper: Vec<Vec<f64>>,
    pub lower: Vec<Vec<f64>>,
    pub reduced: Vec<Vec<f64>>,
}

/// Affine prediction `[x, 1] . coeffs` with the intercept stored last.
pub fn regression_predict(coeffs: &[f64], x: &[f64]) -> Result<f64> {
    if coeffs.len() != x.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: x.len() + 1,
            got: coeffs.len(),
        });
    }
    let mut acc = coeffs[x.len()];
    for (w, v) in coeffs.iter().zip(x) {
        acc += w * v;
    }
    Ok(acc)
}

/// Squared residual plus the ridge prior penalty: the per-point negative
/// log-posterior (up to constants) of the regression coefficients.
/// The penalty covers all entries including the intercept.
pub fn map_error(coeffs: &[f64], x: &[f64], y: f64, l2_penalty: f64) -> Result<f64> {
    let residual = regression_predict(coeffs, x)? - y;
    let penalty: f64 = coeffs.iter().map(|w| w * w).sum();
    Ok(residual * residual + l2_penalty * penalty)
}

/// Evaluate [`map_error`] for the upper and lower vector of every cluster at
/// every point, and average the two matrices elementwise.
pub fn compute_error_matrices(
    data: &Dataset,
    intervals: &[CoefficientInterval],
    l2_penalty: f64,
) -> Result<ErrorMatrices> {
    let n = data.len();
    let mut upper = Vec::with_capacity(intervals.len());
    let mut lower = Vec::with_capacity(intervals.len());
    let mut reduced = Vec::with_capacity(intervals.len());
    for interval in intervals {
        let mut row_u = Vec::with_capacity(n);
        let mut row_l = Vec::with_capacity(n);
        let mut row_r = Vec::with_capacity(n);
        for k in 0..n {
            let eu = map_error(&interval.upper, data.row(k), data.target(k), l2_penalty)?;
            let el = map_error(&interval.lower, data.row(k), data.target(k), l2_penalty)?;
            // A squared residual can overflow even while the coefficients
            // are still finite; catch that here so divergence surfaces as a
            // clean error instead of poisoning the memberships.
            if !(eu.is_finite() && el.is_finite()) {
                return Err(Error::NonFinite {
                    what: "cluster regression errors",
                });
            }
            row_u.push(eu);
            row_l.push(el);
            row_r.push((eu + el) / 2.0);
        }
        upper.push(row_u);
        lower.push(row_l);
        reduced.push(row_r);
    }
    Ok(ErrorMatrices {
        upper,
        lower,
        reduced,
    })
}

/// Fuzzy c-means style membership of `cluster` given one point's errors
/// against every cluster, at a single fuzzifier exponent.
///
/// Zero errors get the conventional handling: full membership split equally
/// among the zero-error clusters, zero elsewhere.
pub fn fcm_branch_membership(errors: &[f64], cluster: usize, fuzzifier: f64) -> f64 {
    debug_assert!(fuzzifier > 1.0);
    debug_assert!(errors.iter().all(|e| *e >= 0.0));
    let zero_count = errors.iter().filter(|e| **e == 0.0).count();
    if zero_count > 0 {
        return if errors[cluster] == 0.0 {
            1.0 / zero_count as f64
        } else {
            0.0
        };
    }
    let exponent = 2.0 / (fuzzifier - 1.0);
    let own = errors[cluster];
    let sum: f64 = errors.iter().map(|e| (own / e).powf(exponent)).sum();
    1.0 / sum
}

/// Interval memberships from the reduced error matrix: evaluate the
/// membership at both fuzzifiers and take the pointwise max (upper) and min
/// (lower) of the two branches.
pub fn update_memberships(
    reduced_errors: &[Vec<f64>],
    fuzzifier_low: f64,
    fuzzifier_high: f64,
) -> MembershipMatrices {
    let clusters = reduced_errors.len();
    let n = reduced_errors.first().map_or(0, Vec::len);
    let mut upper = vec![vec![0.0; n]; clusters];
    let mut lower = vec![vec![0.0; n]; clusters];
    let mut column = vec![0.0; clusters];
    for k in 0..n {
        for i in 0..clusters {
            column[i] = reduced_errors[i][k];
        }
        for i in 0..clusters {
            let sharp = fcm_branch_membership(&column, i, fuzzifier_low);
            let soft = fcm_branch_membership(&column, i, fuzzifier_high);
            upper[i][k] = sharp.max(soft);
            lower[i][k] = sharp.min(soft);
        }
    }
    MembershipMatrices { upper, lower }
}

/// Membership-weighted ridge objective for one cluster's coefficient vector:
/// half the weighted sum of squared residuals plus half the ridge penalty.
pub fn weighted_objective(
    coeffs: &[f64],
    data: &Dataset,
    weights: &[f64],
    l2_penalty: f64,
) -> Result<f64> {
    if weights.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            got: weights.len(),
        });
    }
    let mut acc = 0.0;
    for k in 0..data.len() {
        let residual = regression_predict(coeffs, data.row(k))? - data.target(k);
        acc += weights[k] * residual * residual;
    }
    let penalty: f64 = coeffs.iter().map(|w| w * w).sum();
    Ok(0.5 * acc + 0.5 * l2_penalty * penalty)
}

/// Analytic gradient of [`weighted_objective`] over the full dataset.
pub fn weighted_objective_gradient(
    coeffs: &[f64],
    data: &Dataset,
    weights: &[f64],
    l2_penalty: f64,
) -> Result<Vec<f64>> {
    if weights.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            got: weights.len(),
        });
    }
    let batch: Vec<usize> = (0..data.len()).collect();
    batch_gradient(coeffs, data, &batch, weights, l2_penalty, 1.0)
}

/// Weighted residual gradient over a batch. `penalty_scale` prorates the
/// ridge term so that a full epoch of batches applies it exactly once.
fn batch_gradient(
    coeffs: &[f64],
    data: &Dataset,
    batch: &[usize],
    weights: &[f64],
    l2_penalty: f64,
    penalty_scale: f64,
) -> Result<Vec<f64>> {
    let dim = data.n_features() + 1;
    if coeffs.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coeffs.len(),
        });
    }
    let mut grad = vec![0.0; dim];
    for &k in batch {
        let x = data.row(k);
        let residual = regression_predict(coeffs, x)? - data.target(k);
        let scale = weights[k] * residual;
        for (g, v) in grad.iter_mut().zip(x) {
            *g += scale * v;
        }
        grad[dim - 1] += scale;
    }
    for (g, w) in grad.iter_mut().zip(coeffs) {
        *g += l2_penalty * penalty_scale * w;
    }
    Ok(grad)
}

/// One SGD update of a cluster's coefficient vector on a mini-batch of row
/// indices. The ridge term is scaled by `batch.len() / data.len()` so a full
/// sweep applies the whole penalty gradient once. Deterministic for a fixed
/// batch.
pub fn sgd_step_coefficients(
    coeffs: &[f64],
    data: &Dataset,
    batch: &[usize],
    weights: &[f64],
    l2_penalty: f64,
    learning_rate: f64,
) -> Result<Vec<f64>> {
    if weights.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            got: weights.len(),
        });
    }
    let penalty_scale = batch.len() as f64 / data.len() as f64;
    let grad = batch_gradient(coeffs, data, batch, weights, l2_penalty, penalty_scale)?;
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite { what: "gradient" });
    }
    let updated: Vec<f64> = coeffs
        .iter()
        .zip(&grad)
        .map(|(w, g)| w - learning_rate * g)
        .collect();
    if updated.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite {
            what: "coefficients",
        });
    }
    Ok(updated)
}

/// Progress snapshot reported once per outer iteration of [`fit_partition`].
#[derive(Debug, Clone, Copy)]
pub struct PartitionProgress {
    /// 1-based outer iteration index.
    pub iteration: usize,
    /// Largest Euclidean change of any cluster's reduced coefficient vector.
    pub max_coefficient_delta: f64,
    /// Mean of the reduced error matrix after the iteration.
    pub mean_reduced_error: f64,
}

/// Result of the alternating partition fit.
#[derive(Debug, Clone)]
pub struct PartitionFit {
    /// One coefficient interval per cluster.
    pub coefficients: Vec<CoefficientInterval>,
    /// Memberships consistent with the final coefficients.
    pub memberships: MembershipMatrices,
    /// False when the loop hit `max_outer_iters` before the coefficient
    /// movement dropped below the tolerance.
    pub converged: bool,
    /// Outer iterations actually run.
    pub iterations: usize,
    /// True when every target is identical while more than one cluster was
    /// requested; the fit still completes but the partition carries no
    /// information.
    pub degenerate_targets: bool,
}

/// Fit the interval partition by alternating weighted SGD on each cluster's
/// bounding coefficient vectors with membership updates.
///
/// The upper coefficient vector of each cluster is trained under the upper
/// memberships, the lower vector under the lower memberships. Runs are
/// deterministic for a fixed config (seeded initialization and shuffling).
/// Hitting the iteration cap is not an error; it is reported through
/// [`PartitionFit::converged`].
pub fn fit_partition(data: &Dataset, config: &Config) -> Result<PartitionFit> {
    fit_partition_observed(data, config, |_| {})
}

/// [`fit_partition`] with a per-iteration progress observer.
pub fn fit_partition_observed(
    data: &Dataset,
    config: &Config,
    mut observer: impl FnMut(&PartitionProgress),
) -> Result<PartitionFit> {
    let config = config.clone().validate()?;
    let clusters = config.clusters;
    let dim = data.n_features() + 1;

    let first = data.target(0);
    let degenerate_targets = clusters > 1 && data.targets().iter().all(|y| *y == first);

    let mut rng = ChaCha8Rng::seed_from_u64(config.sgd.seed);
    let mut intervals: Vec<CoefficientInterval> = (0..clusters)
        .map(|_| {
            let base: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.5..0.5)).collect();
            // Nudge the two bounding vectors 10% apart so the interval starts
            // non-degenerate.
            CoefficientInterval {
                upper: base.iter().map(|v| v * 1.1).collect(),
                lower: base.iter().map(|v| v * 0.9).collect(),
            }
        })
        .collect();

    let errors = compute_error_matrices(data, &intervals, config.l2_penalty)?;
    let mut memberships =
        update_memberships(&errors.reduced, config.fuzzifier_low, config.fuzzifier_high);

    let mut converged = false;
    let mut iterations = 0;
    let mut indices: Vec<usize> = (0..data.len()).collect();

    for iteration in 1..=config.max_outer_iters {
        iterations = iteration;
        let previous: Vec<Vec<f64>> = intervals.iter().map(CoefficientInterval::reduced).collect();

        for (i, interval) in intervals.iter_mut().enumerate() {
            interval.upper = run_sgd_epochs(
                &interval.upper,
                data,
                &memberships.upper[i],
                &config,
                &mut indices,
                &mut rng,
            )?;
            interval.lower = run_sgd_epochs(
                &interval.lower,
                data,
                &memberships.lower[i],
                &config,
                &mut indices,
                &mut rng,
            )?;
        }

        let errors = compute_error_matrices(data, &intervals, config.l2_penalty)?;
        memberships =
            update_memberships(&errors.reduced, config.fuzzifier_low, config.fuzzifier_high);

        let max_delta = intervals
            .iter()
            .zip(&previous)
            .map(|(interval, prev)| {
                let cur = interval.reduced();
                cur.iter()
                    .zip(prev)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);

        let cells = (clusters * data.len()) as f64;
        let mean_reduced_error =
            errors.reduced.iter().flatten().sum::<f64>() / cells;

        observer(&PartitionProgress {
            iteration,
            max_coefficient_delta: max_delta,
            mean_reduced_error,
        });

        if max_delta < config.convergence_tol {
            converged = true;
            break;
        }
    }

    Ok(PartitionFit {
        coefficients: intervals,
        memberships,
        converged,
        iterations,
        degenerate_targets,
    })
}

fn run_sgd_epochs(
    coeffs: &[f64],
    data: &Dataset,
    weights: &[f64],
    config: &Config,
    indices: &mut [usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let mut current = coeffs.to_vec();
    for _ in 0..config.sgd.max_epochs {
        indices.shuffle(rng);
        for batch in indices.chunks(config.sgd.batch_size) {
            current = sgd_step_coefficients(
                &current,
                data,
                batch,
                weights,
                config.l2_penalty,
                config.sgd.learning_rate,
            )?;
        }
    }
    Ok(current)
}
