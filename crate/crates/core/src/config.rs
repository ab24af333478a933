//! Hyper-parameter bundle for the identification pipeline, with validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings for the mini-batch gradient descent loops used by both the
/// partition stage and the consequent stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgdConfig {
    /// Step size; must be positive.
    pub learning_rate: f64,
    /// Upper bound on epochs per fitting call; at least 1.
    pub max_epochs: usize,
    /// Mini-batch size; at least 1. Larger than the dataset means full-batch.
    pub batch_size: usize,
    /// Seed for batch shuffling and parameter initialization.
    pub seed: u64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        SgdConfig {
            learning_rate: 1e-2,
            max_epochs: 200,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// Hyper-parameters of the full identification run.
///
/// The two fuzzifiers control how sharply cluster memberships concentrate:
/// evaluating the membership formula at both exponents yields the interval
/// bounds. The hybrid antecedent membership blends a Gaussian bump with a
/// heavy-tailed Student-t curve; `gaussian_weight` sets the mix and
/// `gaussian_sharpness` scales the Gaussian exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Number of rules / regression clusters. At least 1; a single cluster
    /// degenerates to ordinary (regularized) linear regression.
    pub clusters: usize,
    /// Smaller fuzzifier; must exceed 1 and be below `fuzzifier_high`.
    pub fuzzifier_low: f64,
    /// Larger fuzzifier; must exceed 1.
    pub fuzzifier_high: f64,
    /// Ridge penalty weight applied to regression coefficients; >= 0.
    pub l2_penalty: f64,
    /// Mix weight of the Gaussian membership component, in [0, 1].
    /// The Student-t component gets `1 - gaussian_weight`.
    pub gaussian_weight: f64,
    /// Positive scale on the Gaussian membership exponent.
    pub gaussian_sharpness: f64,
    /// Convergence threshold on the largest per-cluster coefficient change
    /// between outer iterations; > 0.
    pub convergence_tol: f64,
    /// Cap on alternating partition iterations; at least 1.
    pub max_outer_iters: usize,
    /// Gradient-descent settings shared by both SGD stages.
    pub sgd: SgdConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            clusters: 2,
            fuzzifier_low: 1.5,
            fuzzifier_high: 7.0,
            l2_penalty: 0.0,
            gaussian_weight: 0.5,
            gaussian_sharpness: 3.14,
            convergence_tol: 1e-4,
            max_outer_iters: 100,
            sgd: SgdConfig::default(),
        }
    }
}

impl Config {
    /// Check every invariant, returning the config unchanged on success.
    /// Errors name the offending field.
    pub fn validate(self) -> Result<Config> {
        fn fail(field: &'static str, reason: impl Into<String>) -> Result<Config> {
            Err(Error::InvalidConfig {
                field,
                reason: reason.into(),
            })
        }

        if self.clusters < 1 {
            return fail("clusters", "must be at least 1");
        }
        if !self.fuzzifier_low.is_finite() || self.fuzzifier_low <= 1.0 {
            return fail("fuzzifier_low", "must be finite and greater than 1");
        }
        if !self.fuzzifier_high.is_finite() || self.fuzzifier_high <= 1.0 {
            return fail("fuzzifier_high", "must be finite and greater than 1");
        }
        if self.fuzzifier_low >= self.fuzzifier_high {
            return fail("fuzzifier_low", "must be strictly less than fuzzifier_high");
        }
        if !self.l2_penalty.is_finite() || self.l2_penalty < 0.0 {
            return fail("l2_penalty", "must be finite and non-negative");
        }
        if !self.gaussian_weight.is_finite()
            || !(0.0..=1.0).contains(&self.gaussian_weight)
        {
            return fail("gaussian_weight", "must lie in [0, 1]");
        }
        if !self.gaussian_sharpness.is_finite() || self.gaussian_sharpness <= 0.0 {
            return fail("gaussian_sharpness", "must be finite and positive");
        }
        if !self.convergence_tol.is_finite() || self.convergence_tol <= 0.0 {
            return fail("convergence_tol", "must be finite and positive");
        }
        if self.max_outer_iters < 1 {
            return fail("max_outer_iters", "must be at least 1");
        }
        if !self.sgd.learning_rate.is_finite() || self.sgd.learning_rate <= 0.0 {
            return fail("sgd.learning_rate", "must be finite and positive");
        }
        if self.sgd.max_epochs < 1 {
            return fail("sgd.max_epochs", "must be at least 1");
        }
        if self.sgd.batch_size < 1 {
            return fail("sgd.batch_size", "must be at least 1");
        }
        Ok(self)
    }
}
