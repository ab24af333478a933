//! Evaluation metrics. All model scoring happens on the normalized scale so
//! that error magnitudes are comparable across datasets.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::TSKModel;

fn check_pair(predicted: &[f64], actual: &[f64]) -> Result<()> {
    if predicted.len() != actual.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            got: predicted.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::InvalidDataset("no values to score".into()));
    }
    Ok(())
}

/// Mean squared error.
pub fn mse(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    check_pair(predicted, actual)?;
    let total: f64 = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok(total / predicted.len() as f64)
}

/// Coefficient of determination `1 - SS_res / SS_tot`. Errors when the
/// actual values have zero variance, where the ratio is undefined.
pub fn r2(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    check_pair(predicted, actual)?;
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean) * (a - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let ss_res: f64 = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Median absolute error, using the lower median for even counts.
pub fn median_abs_err(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    check_pair(predicted, actual)?;
    let mut errs: Vec<f64> = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a).abs())
        .collect();
    errs.sort_by(|x, y| x.partial_cmp(y).expect("absolute errors are never NaN"));
    Ok(errs[(errs.len() - 1) / 2])
}

/// Scores of a model on one dataset, computed on the normalized scale over
/// the points where at least one rule fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    pub r2: f64,
    pub med_abs_err: f64,
    /// Total points presented.
    pub n_test: usize,
    /// Points excluded because no rule fired there.
    pub n_no_fire: usize,
}

/// Per-point labeled predictions on the normalized scale, skipping points
/// where no rule fired.
#[derive(Debug, Clone)]
pub struct LabeledPredictions {
    /// Source row indices of the scored points.
    pub indices: Vec<usize>,
    pub predicted: Vec<f64>,
    pub actual: Vec<f64>,
    /// Points excluded because no rule fired there.
    pub n_no_fire: usize,
}

/// Normalize each point with the model's stored scaling, fire it against its
/// observed output, and type-reduce. Points where every rule's firing
/// underflows to zero are skipped and counted.
pub fn labeled_predictions(model: &TSKModel, data: &Dataset) -> Result<LabeledPredictions> {
    if data.is_empty() {
        return Err(Error::InvalidDataset("no test points".into()));
    }
    let mut out = LabeledPredictions {
        indices: Vec::with_capacity(data.len()),
        predicted: Vec::with_capacity(data.len()),
        actual: Vec::with_capacity(data.len()),
        n_no_fire: 0,
    };
    for k in 0..data.len() {
        let x_norm = model.normalization.apply_features(data.row(k))?;
        let y_norm = model.normalization.apply_target(data.target(k));
        match model.reduce_at_normalized(&x_norm, y_norm) {
            Ok(p) => {
                out.indices.push(k);
                out.predicted.push(p);
                out.actual.push(y_norm);
            }
            Err(Error::NoRuleFires) => out.n_no_fire += 1,
            Err(e) => return Err(e),
        }
    }
    if out.predicted.is_empty() {
        return Err(Error::AllPointsExcluded);
    }
    Ok(out)
}

/// Score a model against labeled data; see [`labeled_predictions`] for the
/// prediction protocol.
pub fn evaluate_model(model: &TSKModel, data: &Dataset) -> Result<MetricsReport> {
    let preds = labeled_predictions(model, data)?;
    Ok(MetricsReport {
        mse: mse(&preds.predicted, &preds.actual)?,
        r2: r2(&preds.predicted, &preds.actual)?,
        med_abs_err: median_abs_err(&preds.predicted, &preds.actual)?,
        n_test: data.len(),
        n_no_fire: preds.n_no_fire,
    })
}
