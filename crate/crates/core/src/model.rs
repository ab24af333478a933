//! The identified interval type-2 Takagi-Sugeno model: per-rule parameters,
//! prediction, and a versioned plain-text serialization that round-trips
//! every float bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::antecedent::{firing_at_point, fit_antecedent, ClusterGeometry, RuleView};
use crate::config::Config;
use crate::consequent::fit_consequent;
use crate::data::{ColumnScale, Normalization};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::partition::{fit_partition, regression_predict, CoefficientInterval};
use crate::typereduce::km_reduce;

/// Maximum fixed-point sweeps used by [`TSKModel::predict`].
const PREDICT_MAX_SWEEPS: usize = 50;
/// Fixed-point convergence tolerance for [`TSKModel::predict`].
const PREDICT_TOL: f64 = 1e-12;

/// One fuzzy rule: an antecedent described by a coefficient interval and the
/// per-side distance geometry, plus the consequent used for rule output.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Upper/lower regression coefficients defining the antecedent
    /// hyperplanes (layout `[w_1 .. w_m, w_0]`, intercept last).
    pub coefficients: CoefficientInterval,
    /// Consequent coefficients producing this rule's output (same layout).
    pub consequent: Vec<f64>,
    /// Distance statistics of the upper hyperplane over its training points.
    pub upper_geometry: ClusterGeometry,
    /// Distance statistics of the lower hyperplane over its training points.
    pub lower_geometry: ClusterGeometry,
}

/// An identified interval type-2 TSK model, including the normalization
/// fitted on its training data. Predictions accept raw-scale inputs and
/// return raw-scale outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TSKModel {
    pub rules: Vec<Rule>,
    pub gaussian_weight: f64,
    pub gaussian_sharpness: f64,
    pub normalization: Normalization,
}

impl TSKModel {
    /// Assemble and validate a model.
    pub fn new(
        rules: Vec<Rule>,
        gaussian_weight: f64,
        gaussian_sharpness: f64,
        normalization: Normalization,
    ) -> Result<TSKModel> {
        let model = TSKModel {
            rules,
            gaussian_weight,
            gaussian_sharpness,
            normalization,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.rules.is_empty() {
            return Err(Error::ModelFormat("model has no rules".into()));
        }
        if !(0.0..=1.0).contains(&self.gaussian_weight) {
            return Err(Error::NonFinite {
                what: "gaussian weight outside [0, 1]",
            });
        }
        if !(self.gaussian_sharpness.is_finite() && self.gaussian_sharpness > 0.0) {
            return Err(Error::NonFinite {
                what: "gaussian sharpness must be positive",
            });
        }
        let width = self.normalization.features.len() + 1;
        for rule in &self.rules {
            for coeffs in [
                &rule.coefficients.upper,
                &rule.coefficients.lower,
                &rule.consequent,
            ] {
                if coeffs.len() != width {
                    return Err(Error::DimensionMismatch {
                        expected: width,
                        got: coeffs.len(),
                    });
                }
                if coeffs.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        what: "rule coefficients",
                    });
                }
            }
            for geom in [&rule.upper_geometry, &rule.lower_geometry] {
                if !(geom.mean_distance.is_finite() && geom.mean_distance >= 0.0) {
                    return Err(Error::NonFinite {
                        what: "geometry mean distance",
                    });
                }
                if !(geom.distance_variance.is_finite() && geom.distance_variance > 0.0) {
                    return Err(Error::NonFinite {
                        what: "geometry distance variance",
                    });
                }
            }
        }
        Ok(())
    }

    /// Number of rules.
    pub fn n_rules(&self) -> usize {
        self.rules.len()
    }

    /// Number of raw input features the model expects.
    pub fn n_features(&self) -> usize {
        self.normalization.features.len()
    }

    /// Borrowed antecedent views in rule order.
    pub fn rule_views(&self) -> Vec<RuleView<'_>> {
        self.rules
            .iter()
            .map(|r| RuleView {
                upper_coeffs: &r.coefficients.upper,
                lower_coeffs: &r.coefficients.lower,
                upper_geometry: r.upper_geometry,
                lower_geometry: r.lower_geometry,
            })
            .collect()
    }

    /// Each rule's consequent output at a normalized input.
    pub fn rule_outputs_normalized(&self, x_norm: &[f64]) -> Result<Vec<f64>> {
        self.rules
            .iter()
            .map(|r| regression_predict(&r.consequent, x_norm))
            .collect()
    }

    /// Type-reduced output at a normalized input, with firings taken at a
    /// given normalized reference output.
    pub fn reduce_at_normalized(&self, x_norm: &[f64], y_norm: f64) -> Result<f64> {
        let views = self.rule_views();
        let firings = firing_at_point(
            &views,
            x_norm,
            y_norm,
            self.gaussian_weight,
            self.gaussian_sharpness,
        )?;
        let outputs = self.rule_outputs_normalized(x_norm)?;
        Ok(km_reduce(&outputs, &firings)?.midpoint())
    }

    /// Predict the output for a raw-scale input, given the observed
    /// raw-scale output at that point. Rule firings are evaluated against
    /// the observation, matching how the model was fitted; use this when
    /// scoring against labeled data.
    pub fn predict_with_reference(&self, x: &[f64], y: f64) -> Result<f64> {
        let x_norm = self.normalization.apply_features(x)?;
        let y_norm = self.normalization.apply_target(y);
        let reduced = self.reduce_at_normalized(&x_norm, y_norm)?;
        Ok(self.normalization.invert_target(reduced))
    }

    /// Predict the output for a raw-scale input alone.
    ///
    /// Firing strengths depend on the output value, so the prediction is the
    /// fixed point of "fire at the current estimate, re-estimate": the
    /// iteration starts from the mean rule output and stops once successive
    /// estimates agree or a sweep cap is reached.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let x_norm = self.normalization.apply_features(x)?;
        let outputs = self.rule_outputs_normalized(&x_norm)?;
        let mut y = outputs.iter().sum::<f64>() / outputs.len() as f64;
        for _ in 0..PREDICT_MAX_SWEEPS {
            let next = self.reduce_at_normalized(&x_norm, y)?;
            let done = (next - y).abs() <= PREDICT_TOL;
            y = next;
            if done {
                break;
            }
        }
        Ok(self.normalization.invert_target(y))
    }

    /// Identify a model from raw-scale training data.
    ///
    /// Convenience wrapper around [`TSKModel::fit_with_report`] that drops
    /// the diagnostics.
    pub fn fit(data: &Dataset, config: &Config) -> Result<TSKModel> {
        Ok(TSKModel::fit_with_report(data, config)?.0)
    }

    /// Identify a model from raw-scale training data, returning training
    /// diagnostics alongside it.
    ///
    /// The pipeline normalizes the data, partitions it with interval fuzzy
    /// c-regression, summarizes each cluster's distance geometry into the
    /// antecedents, and refines the consequents under type reduction.
    pub fn fit_with_report(data: &Dataset, config: &Config) -> Result<(TSKModel, FitReport)> {
        let config = config.clone().validate()?;
        let normalization = Normalization::fit(data);
        let scaled = normalization
            .apply(data)
            .map_err(|e| e.in_stage("normalize"))?;

        let partition = fit_partition(&scaled, &config).map_err(|e| e.in_stage("partition"))?;

        let antecedent = fit_antecedent(
            &scaled,
            &partition.coefficients,
            config.gaussian_weight,
            config.gaussian_sharpness,
        )
        .map_err(|e| e.in_stage("antecedent"))?;

        let initial: Vec<Vec<f64>> = partition.coefficients.iter().map(|c| c.reduced()).collect();
        let consequent = fit_consequent(&scaled, &antecedent.firings, initial, &config)
            .map_err(|e| e.in_stage("consequent"))?;

        let rules = partition
            .coefficients
            .into_iter()
            .zip(consequent.consequents)
            .enumerate()
            .map(|(i, (coefficients, consequent))| Rule {
                coefficients,
                consequent,
                upper_geometry: antecedent.upper_geometry[i],
                lower_geometry: antecedent.lower_geometry[i],
            })
            .collect();

        let model = TSKModel::new(
            rules,
            config.gaussian_weight,
            config.gaussian_sharpness,
            normalization,
        )?;
        let report = FitReport {
            partition_iterations: partition.iterations,
            partition_converged: partition.converged,
            degenerate_targets: partition.degenerate_targets,
            consequent_epochs: consequent.epochs,
            training_loss: consequent.loss,
            n_unfired_train: consequent.n_excluded,
        };
        Ok((model, report))
    }

    /// Serialize to the versioned text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_HEADER}");
        let _ = writeln!(out, "rules {}", self.rules.len());
        let _ = writeln!(out, "features {}", self.normalization.features.len());
        let _ = writeln!(out, "gaussian_weight {}", self.gaussian_weight);
        let _ = writeln!(out, "gaussian_sharpness {}", self.gaussian_sharpness);
        for scale in &self.normalization.features {
            let _ = writeln!(out, "feature_scale {} {}", scale.min, scale.max);
        }
        let _ = writeln!(
            out,
            "target_scale {} {}",
            self.normalization.target.min, self.normalization.target.max
        );
        for (i, rule) in self.rules.iter().enumerate() {
            let _ = writeln!(out, "rule {i}");
            let _ = writeln!(out, "upper {}", join_floats(&rule.coefficients.upper));
            let _ = writeln!(out, "lower {}", join_floats(&rule.coefficients.lower));
            let _ = writeln!(out, "consequent {}", join_floats(&rule.consequent));
            let _ = writeln!(
                out,
                "upper_geometry {} {}",
                rule.upper_geometry.mean_distance, rule.upper_geometry.distance_variance
            );
            let _ = writeln!(
                out,
                "lower_geometry {} {}",
                rule.lower_geometry.mean_distance, rule.lower_geometry.distance_variance
            );
        }
        out
    }

    /// Parse a model from the versioned text format.
    pub fn from_text(text: &str) -> Result<TSKModel> {
        let mut lines = text.lines().enumerate();
        let mut next_line = |tag: &'static str| -> Result<(usize, &str)> {
            for (idx, raw) in lines.by_ref() {
                let line = raw.trim();
                if !line.is_empty() {
                    return Ok((idx + 1, line));
                }
            }
            Err(Error::ModelFormat(format!("file ended before `{tag}` line")))
        };

        let (_, header) = next_line("header")?;
        if header != MODEL_HEADER {
            return Err(Error::ModelFormat(format!(
                "unsupported model header `{header}` (expected `{MODEL_HEADER}`)"
            )));
        }
        let n_rules = parse_tagged_usize(next_line("rules")?, "rules")?;
        let n_features = parse_tagged_usize(next_line("features")?, "features")?;
        let gaussian_weight = parse_tagged_floats(next_line("gaussian_weight")?, "gaussian_weight", 1)?[0];
        let gaussian_sharpness =
            parse_tagged_floats(next_line("gaussian_sharpness")?, "gaussian_sharpness", 1)?[0];

        let mut features = Vec::with_capacity(n_features);
        for _ in 0..n_features {
            let pair = parse_tagged_floats(next_line("feature_scale")?, "feature_scale", 2)?;
            features.push(ColumnScale {
                min: pair[0],
                max: pair[1],
            });
        }
        let pair = parse_tagged_floats(next_line("target_scale")?, "target_scale", 2)?;
        let target = ColumnScale {
            min: pair[0],
            max: pair[1],
        };

        let width = n_features + 1;
        let mut rules = Vec::with_capacity(n_rules);
        for i in 0..n_rules {
            let index = parse_tagged_usize(next_line("rule")?, "rule")?;
            if index != i {
                return Err(Error::ModelFormat(format!(
                    "rule blocks out of order: expected rule {i}, found rule {index}"
                )));
            }
            let upper = parse_tagged_floats(next_line("upper")?, "upper", width)?;
            let lower = parse_tagged_floats(next_line("lower")?, "lower", width)?;
            let consequent = parse_tagged_floats(next_line("consequent")?, "consequent", width)?;
            let ug = parse_tagged_floats(next_line("upper_geometry")?, "upper_geometry", 2)?;
            let lg = parse_tagged_floats(next_line("lower_geometry")?, "lower_geometry", 2)?;
            rules.push(Rule {
                coefficients: CoefficientInterval::new(upper, lower)?,
                consequent,
                upper_geometry: ClusterGeometry {
                    mean_distance: ug[0],
                    distance_variance: ug[1],
                },
                lower_geometry: ClusterGeometry {
                    mean_distance: lg[0],
                    distance_variance: lg[1],
                },
            });
        }

        TSKModel::new(
            rules,
            gaussian_weight,
            gaussian_sharpness,
            Normalization { features, target },
        )
    }

    /// Write the model to a file.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Read a model from a file.
    pub fn load(path: &Path) -> Result<TSKModel> {
        let text = std::fs::read_to_string(path)?;
        TSKModel::from_text(&text)
    }
}

/// Diagnostics from one identification run.
#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub partition_iterations: usize,
    pub partition_converged: bool,
    /// All training targets were identical while more than one cluster was
    /// requested; the partition is arbitrary in that case.
    pub degenerate_targets: bool,
    pub consequent_epochs: usize,
    /// Final training loss (normalized scale, half mean squared error).
    pub training_loss: f64,
    /// Training points where no rule fired.
    pub n_unfired_train: usize,
}

const MODEL_HEADER: &str = "it2tsk model v1";

fn join_floats(values: &[f64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out
}

fn parse_tagged<'a>(
    (line_no, line): (usize, &'a str),
    tag: &'static str,
) -> Result<impl Iterator<Item = &'a str>> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(found) if found == tag => Ok(parts),
        Some(found) => Err(Error::ModelFormat(format!(
            "line {line_no}: expected `{tag}`, found `{found}`"
        ))),
        None => Err(Error::ModelFormat(format!("line {line_no}: empty line where `{tag}` expected"))),
    }
}

fn parse_tagged_usize(line: (usize, &str), tag: &'static str) -> Result<usize> {
    let line_no = line.0;
    let mut parts = parse_tagged(line, tag)?;
    let value = parts
        .next()
        .ok_or_else(|| Error::ModelFormat(format!("line {line_no}: `{tag}` missing its value")))?;
    value.parse().map_err(|_| {
        Error::ModelFormat(format!("line {line_no}: `{tag}` value `{value}` is not a count"))
    })
}

fn parse_tagged_floats(line: (usize, &str), tag: &'static str, expected: usize) -> Result<Vec<f64>> {
    let line_no = line.0;
    let parts = parse_tagged(line, tag)?;
    let mut values = Vec::with_capacity(expected);
    for part in parts {
        let v: f64 = part.parse().map_err(|_| {
            Error::ModelFormat(format!("line {line_no}: `{tag}` value `{part}` is not a number"))
        })?;
        values.push(v);
    }
    if values.len() != expected {
        return Err(Error::ModelFormat(format!(
            "line {line_no}: `{tag}` has {} values, expected {expected}",
            values.len()
        )));
    }
    Ok(values)
}
