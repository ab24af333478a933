//! Input-output data container used by every pipeline stage.

use crate::error::{Error, Result};

/// A regression dataset: `n` rows of `m` finite features plus one finite
/// target per row. Stored row-major so per-point access is a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Vec<f64>,
    targets: Vec<f64>,
    n_features: usize,
}

impl Dataset {
    /// Build from per-row feature vectors and a target vector.
    pub fn new(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no rows".into()));
        }
        let n_features = rows[0].len();
        let mut inputs = Vec::with_capacity(rows.len() * n_features);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "row {k} has {} features, expected {n_features}",
                    row.len()
                )));
            }
            inputs.extend_from_slice(row);
        }
        Dataset::from_flat(inputs, n_features, targets)
    }

    /// Build from an already-flattened row-major feature matrix.
    pub fn from_flat(inputs: Vec<f64>, n_features: usize, targets: Vec<f64>) -> Result<Dataset> {
        if n_features == 0 {
            return Err(Error::InvalidDataset("zero feature columns".into()));
        }
        if targets.is_empty() {
            return Err(Error::InvalidDataset("no rows".into()));
        }
        if inputs.len() != targets.len() * n_features {
            return Err(Error::InvalidDataset(format!(
                "feature matrix has {} entries, expected {} rows x {} columns",
                inputs.len(),
                targets.len(),
                n_features
            )));
        }
        if let Some(bad) = inputs.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite feature value at row {}, column {}",
                bad / n_features,
                bad % n_features
            )));
        }
        if let Some(bad) = targets.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite target value at row {bad}"
            )));
        }
        Ok(Dataset {
            inputs,
            targets,
            n_features,
        })
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    /// True when the dataset has no rows (never the case for a constructed
    /// instance, but kept for idiomatic completeness).
    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Number of feature columns.
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Feature slice of row `k`.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.inputs[k * self.n_features..(k + 1) * self.n_features]
    }

    /// Target of row `k`.
    pub fn target(&self, k: usize) -> f64 {
        self.targets[k]
    }

    /// All targets.
    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Flat row-major feature storage.
    pub fn inputs(&self) -> &[f64] {
        &self.inputs
    }

    /// New dataset holding the listed rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::InvalidDataset("selection of zero rows".into()));
        }
        let mut inputs = Vec::with_capacity(indices.len() * self.n_features);
        let mut targets = Vec::with_capacity(indices.len());
        for &k in indices {
            inputs.extend_from_slice(self.row(k));
            targets.push(self.targets[k]);
        }
        Ok(Dataset {
            inputs,
            targets,
            n_features: self.n_features,
        })
    }
}
