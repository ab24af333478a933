//! Consequent refinement: gradient descent on the rule consequents under
//! Karnik-Mendel type reduction.
//!
//! The type-reduced midpoint is piecewise linear in the consequents: once
//! the sort order and switch points are fixed, each endpoint is a normalized
//! weighted average of rule outputs. Training freezes that structure at the
//! start of every epoch (a "plan" per point), steps the consequents against
//! the resulting linear model, then refreshes the plans.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::antecedent::FiringInterval;
use crate::config::Config;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::partition::regression_predict;
use crate::typereduce::km_reduce;

/// Decorrelates this stage's RNG stream from the partition stage, which is
/// seeded with the raw seed.
const STAGE_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Frozen endpoint structure at one training point: normalized weights such
/// that the lower endpoint is `sum(a_i * output_i)` and the upper endpoint
/// is `sum(b_i * output_i)` while the switch structure holds.
#[derive(Debug, Clone)]
pub struct KMPlan {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl KMPlan {
    /// Type-reduced midpoint under this frozen plan.
    pub fn midpoint(&self, outputs: &[f64]) -> f64 {
        let lower: f64 = self.a.iter().zip(outputs).map(|(w, y)| w * y).sum();
        let upper: f64 = self.b.iter().zip(outputs).map(|(w, y)| w * y).sum();
        (lower + upper) / 2.0
    }

    /// Per-rule sensitivity of the midpoint to that rule's output.
    fn output_weight(&self, rule: usize) -> f64 {
        (self.a[rule] + self.b[rule]) / 2.0
    }
}

/// Every rule's consequent output at one input.
pub fn rule_outputs(consequents: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
    consequents
        .iter()
        .map(|theta| regression_predict(theta, x))
        .collect()
}

fn check_shapes(
    data: &Dataset,
    firings: &[Vec<FiringInterval>],
    consequents: &[Vec<f64>],
) -> Result<()> {
    if firings.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            got: firings.len(),
        });
    }
    let clusters = consequents.len();
    if clusters == 0 {
        return Err(Error::InvalidConfig {
            field: "clusters",
            reason: "no consequents to fit".into(),
        });
    }
    let width = data.n_features() + 1;
    for theta in consequents {
        if theta.len() != width {
            return Err(Error::DimensionMismatch {
                expected: width,
                got: theta.len(),
            });
        }
    }
    if let Some(row) = firings.iter().find(|row| row.len() != clusters) {
        return Err(Error::DimensionMismatch {
            expected: clusters,
            got: row.len(),
        });
    }
    Ok(())
}

fn point_fires(firings: &[FiringInterval]) -> bool {
    firings.iter().map(|f| f.upper).sum::<f64>() > 0.0
}

/// Build the frozen endpoint plan for every point; `None` marks points where
/// no rule fires.
pub fn build_plans(
    consequents: &[Vec<f64>],
    data: &Dataset,
    firings: &[Vec<FiringInterval>],
) -> Result<Vec<Option<KMPlan>>> {
    check_shapes(data, firings, consequents)?;
    let mut plans = Vec::with_capacity(data.len());
    for k in 0..data.len() {
        if !point_fires(&firings[k]) {
            plans.push(None);
            continue;
        }
        let outputs = rule_outputs(consequents, data.row(k))?;
        let km = km_reduce(&outputs, &firings[k])?;
        let (a, b) = km.endpoint_weights(&firings[k]);
        plans.push(Some(KMPlan { a, b }));
    }
    Ok(plans)
}

/// Half the mean squared midpoint error under frozen plans, averaged over
/// planned points.
pub fn frozen_loss(
    consequents: &[Vec<f64>],
    data: &Dataset,
    plans: &[Option<KMPlan>],
) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for (k, plan) in plans.iter().enumerate() {
        let Some(plan) = plan else { continue };
        let outputs = rule_outputs(consequents, data.row(k))?;
        let r = plan.midpoint(&outputs) - data.target(k);
        total += r * r;
        count += 1;
    }
    if count == 0 {
        return Err(Error::AllPointsExcluded);
    }
    Ok(0.5 * total / count as f64)
}

/// Gradient of the frozen-plan batch loss
/// `1/|batch| * sum(1/2 (mid_k - y_k)^2)` with respect to each consequent.
/// Batch entries without a plan contribute nothing.
pub fn frozen_gradient(
    consequents: &[Vec<f64>],
    data: &Dataset,
    plans: &[Option<KMPlan>],
    batch: &[usize],
) -> Result<Vec<Vec<f64>>> {
    let clusters = consequents.len();
    let width = data.n_features() + 1;
    let mut grad = vec![vec![0.0; width]; clusters];
    if batch.is_empty() {
        return Ok(grad);
    }
    let scale = 1.0 / batch.len() as f64;
    for &k in batch {
        let Some(plan) = &plans[k] else { continue };
        let x = data.row(k);
        let outputs = rule_outputs(consequents, x)?;
        let residual = plan.midpoint(&outputs) - data.target(k);
        for i in 0..clusters {
            let factor = scale * residual * plan.output_weight(i);
            let g = &mut grad[i];
            for (j, v) in x.iter().enumerate() {
                g[j] += factor * v;
            }
            g[width - 1] += factor;
        }
    }
    Ok(grad)
}

/// One gradient step over a batch under frozen plans, in place.
pub fn sgd_step(
    consequents: &mut [Vec<f64>],
    data: &Dataset,
    plans: &[Option<KMPlan>],
    batch: &[usize],
    learning_rate: f64,
) -> Result<()> {
    let grad = frozen_gradient(consequents, data, plans, batch)?;
    for (theta, g) in consequents.iter_mut().zip(&grad) {
        for (t, gv) in theta.iter_mut().zip(g) {
            *t -= learning_rate * gv;
        }
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "consequent coefficients",
            });
        }
    }
    Ok(())
}

/// The true (plan-free) training objective: half the mean squared
/// type-reduced midpoint error over points where at least one rule fires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsequentLoss {
    pub loss: f64,
    /// Points skipped because no rule fired there.
    pub n_excluded: usize,
}

/// Evaluate [`ConsequentLoss`] for a consequent set.
pub fn consequent_loss(
    consequents: &[Vec<f64>],
    data: &Dataset,
    firings: &[Vec<FiringInterval>],
) -> Result<ConsequentLoss> {
    check_shapes(data, firings, consequents)?;
    let mut total = 0.0;
    let mut count = 0usize;
    let mut n_excluded = 0usize;
    for k in 0..data.len() {
        if !point_fires(&firings[k]) {
            n_excluded += 1;
            continue;
        }
        let outputs = rule_outputs(consequents, data.row(k))?;
        let mid = km_reduce(&outputs, &firings[k])?.midpoint();
        let r = mid - data.target(k);
        total += r * r;
        count += 1;
    }
    if count == 0 {
        return Err(Error::AllPointsExcluded);
    }
    Ok(ConsequentLoss {
        loss: 0.5 * total / count as f64,
        n_excluded,
    })
}

/// Result of consequent training.
#[derive(Debug, Clone)]
pub struct ConsequentFit {
    /// Best consequents seen, by true loss.
    pub consequents: Vec<Vec<f64>>,
    /// True loss of the returned consequents.
    pub loss: f64,
    /// Epochs actually run.
    pub epochs: usize,
    /// Points never trained on because no rule fired there.
    pub n_excluded: usize,
}

/// Refine consequents by mini-batch gradient descent under per-epoch frozen
/// Karnik-Mendel plans.
///
/// Epochs stop early once the true loss improves by less than the
/// configured tolerance. The best iterate by true loss is returned, which
/// includes the starting point: a run that only diverges hands back its
/// initialization.
pub fn fit_consequent(
    data: &Dataset,
    firings: &[Vec<FiringInterval>],
    initial: Vec<Vec<f64>>,
    config: &Config,
) -> Result<ConsequentFit> {
    check_shapes(data, firings, &initial)?;
    let included: Vec<usize> = (0..data.len()).filter(|&k| point_fires(&firings[k])).collect();
    if included.is_empty() {
        return Err(Error::AllPointsExcluded);
    }
    let n_excluded = data.len() - included.len();

    let mut theta = initial;
    let mut best = theta.clone();
    let mut best_loss = consequent_loss(&theta, data, firings)?.loss;
    let mut prev_loss = best_loss;
    let mut epochs = 0;

    let mut rng = ChaCha8Rng::seed_from_u64(config.sgd.seed ^ STAGE_SEED_SALT);
    let mut order = included;
    for epoch in 1..=config.sgd.max_epochs {
        let plans = build_plans(&theta, data, firings)?;
        order.shuffle(&mut rng);
        for batch in order.chunks(config.sgd.batch_size) {
            sgd_step(&mut theta, data, &plans, batch, config.sgd.learning_rate)?;
        }
        epochs = epoch;
        let loss = consequent_loss(&theta, data, firings)?.loss;
        if loss < best_loss {
            best_loss = loss;
            best.clone_from(&theta);
        }
        if (prev_loss - loss).abs() < config.convergence_tol {
            break;
        }
        prev_loss = loss;
    }

    Ok(ConsequentFit {
        consequents: best,
        loss: best_loss,
        epochs,
        n_excluded,
    })
}
