//! Identification of interval type-2 Takagi-Sugeno fuzzy models from
//! input-output data.
//!
//! The pipeline has three fitted stages over min-max normalized data:
//!
//! 1. **Partition** ([`partition`]): interval fuzzy c-regression. Each
//!    cluster is a pair of affine hyperplanes (upper/lower coefficient
//!    vectors) fitted by weighted mini-batch gradient descent on a
//!    ridge-penalized squared error; memberships are updated from the
//!    per-cluster errors at two fuzzifier exponents, whose envelope forms
//!    the interval membership.
//! 2. **Antecedent** ([`antecedent`]): each cluster's point-to-hyperplane
//!    distances are summarized by their mean and variance, and a hybrid
//!    membership - a Gaussian bump around the mean distance mixed with a
//!    heavy-tailed Student-t style curve - turns distances into interval
//!    firing strengths.
//! 3. **Consequent** ([`consequent`]): rule consequents are refined by
//!    gradient descent under Karnik-Mendel type reduction
//!    ([`typereduce`]), freezing the reduction's switch structure for each
//!    epoch so the objective is locally linear in the consequents.
//!
//! [`model::TSKModel::fit`] runs the whole pipeline; the fitted
//! [`model::TSKModel`] predicts raw-scale outputs, serializes to a
//! versioned text format bit-exactly, and is scored by [`metrics`].
//! [`experiment`] adds declarative TOML-driven runs and the built-in
//! benchmark suites. Every stage is deterministic for a fixed seed.
//!
//! ```
//! use it2tsk::config::{Config, SgdConfig};
//! use it2tsk::data::plant_dataset;
//! use it2tsk::model::TSKModel;
//!
//! let data = plant_dataset(200, 0.0, 0.0).unwrap();
//! let config = Config {
//!     clusters: 2,
//!     max_outer_iters: 5,
//!     sgd: SgdConfig { max_epochs: 5, ..SgdConfig::default() },
//!     ..Config::default()
//! };
//! let model = TSKModel::fit(&data, &config).unwrap();
//! let y = model.predict(data.row(0)).unwrap();
//! assert!(y.is_finite());
//! ```

pub mod antecedent;
pub mod config;
pub mod consequent;
pub mod data;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod model;
pub mod partition;
pub mod typereduce;

pub use config::{Config, SgdConfig};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use model::{FitReport, Rule, TSKModel};
