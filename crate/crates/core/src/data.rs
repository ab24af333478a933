//! Data sources and preprocessing: benchmark generators, CSV ingestion,
//! min-max normalization, and train/test splitting.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Nonlinear second-order plant with a sinusoidal forcing term.
///
/// The state evolves as
/// `z(k) = (z(k-1) + 2.5) z(k-1) z(k-2) / (1 + z(k-1)^2 + z(k-2)^2) + sin(2k/25)`
/// from the given initial pair. Each emitted row has features
/// `[z(k-1), z(k-2)]` and target `z(k)`, for `k = 2 ..= n_points + 1`.
pub fn plant_dataset(n_points: usize, z0: f64, z1: f64) -> Result<Dataset> {
    if n_points == 0 {
        return Err(Error::InvalidDataset("plant series needs at least 1 point".into()));
    }
    let mut z = Vec::with_capacity(n_points + 2);
    z.push(z0);
    z.push(z1);
    for k in 2..=(n_points + 1) {
        let a = z[k - 1];
        let b = z[k - 2];
        let forced = (2.0 * k as f64 / 25.0).sin();
        z.push((a + 2.5) * a * b / (1.0 + a * a + b * b) + forced);
    }
    let mut rows = Vec::with_capacity(n_points);
    let mut targets = Vec::with_capacity(n_points);
    for k in 2..=(n_points + 1) {
        rows.push(vec![z[k - 1], z[k - 2]]);
        targets.push(z[k]);
    }
    Dataset::new(rows, targets)
}

/// Cardinal sine samples `y = sin(x)/x` on a uniform grid over `[lo, hi]`.
///
/// A grid point landing exactly on zero is nudged up by half a grid step so
/// the function is defined everywhere.
pub fn sinc_dataset(n_points: usize, lo: f64, hi: f64) -> Result<Dataset> {
    if n_points < 2 {
        return Err(Error::InvalidDataset("sinc grid needs at least 2 points".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidDataset("sinc range must be finite with lo < hi".into()));
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    let mut rows = Vec::with_capacity(n_points);
    let mut targets = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let mut x = lo + j as f64 * step;
        if x == 0.0 {
            x += step / 2.0;
        }
        rows.push(vec![x]);
        targets.push(x.sin() / x);
    }
    Dataset::new(rows, targets)
}

/// Number of affine regimes in [`sparse_dataset`].
const SPARSE_REGIMES: usize = 3;
/// Probability that a feature cell is exactly zero in [`sparse_dataset`].
const SPARSE_ZERO_PROB: f64 = 0.8;
/// Standard deviation of the additive target noise in [`sparse_dataset`].
const SPARSE_NOISE_SD: f64 = 0.05;

/// Offset between consecutive regime levels in [`sparse_dataset`].
const SPARSE_LEVEL_GAP: f64 = 2.0;

/// Synthetic sparse regression data: three affine regimes, each supported on
/// its own contiguous block of features, with most feature cells exactly
/// zero and lightly noised targets.
///
/// Each row draws a regime at random, fills features independently (zero
/// with high probability, otherwise uniform in [-1, 1]), and sets the target
/// from the regime's coefficients over its feature block plus Gaussian
/// noise. Regime intercepts sit on well-separated levels (a jittered
/// [`SPARSE_LEVEL_GAP`] ladder) so that the planted structure is actually
/// recoverable from the data: with most cells zero, overlapping intercepts
/// would leave many rows consistent with every regime at once.
/// Deterministic for a fixed seed.
pub fn sparse_dataset(n_points: usize, n_features: usize, seed: u64) -> Result<Dataset> {
    if n_points == 0 {
        return Err(Error::InvalidDataset("sparse data needs at least 1 point".into()));
    }
    if n_features < SPARSE_REGIMES {
        return Err(Error::InvalidDataset(format!(
            "sparse data needs at least {SPARSE_REGIMES} features for its {SPARSE_REGIMES} regimes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, SPARSE_NOISE_SD).expect("constant noise spec is valid");

    let block = n_features / SPARSE_REGIMES;
    let mut supports = Vec::with_capacity(SPARSE_REGIMES);
    let mut weights = Vec::with_capacity(SPARSE_REGIMES);
    let mut intercepts = Vec::with_capacity(SPARSE_REGIMES);
    for r in 0..SPARSE_REGIMES {
        let start = r * block;
        let end = if r == SPARSE_REGIMES - 1 { n_features } else { start + block };
        supports.push(start..end);
        weights.push(
            (start..end)
                .map(|_| rng.random_range(-1.5..1.5))
                .collect::<Vec<f64>>(),
        );
        let level = (r as f64 - (SPARSE_REGIMES - 1) as f64 / 2.0) * SPARSE_LEVEL_GAP;
        intercepts.push(level + rng.random_range(-0.3..0.3));
    }

    let mut rows = Vec::with_capacity(n_points);
    let mut targets = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        let regime = rng.random_range(0..SPARSE_REGIMES);
        let row: Vec<f64> = (0..n_features)
            .map(|_| {
                if rng.random_bool(SPARSE_ZERO_PROB) {
                    0.0
                } else {
                    rng.random_range(-1.0..1.0)
                }
            })
            .collect();
        let y = supports[regime]
            .clone()
            .zip(&weights[regime])
            .map(|(j, w)| row[j] * w)
            .sum::<f64>()
            + intercepts[regime]
            + noise.sample(&mut rng);
        rows.push(row);
        targets.push(y);
    }
    Dataset::new(rows, targets)
}

/// Result of CSV ingestion: the parsed dataset plus bookkeeping about what
/// had to be repaired or discarded.
#[derive(Debug, Clone)]
pub struct CsvLoad {
    pub data: Dataset,
    /// Feature column names, in dataset column order.
    pub feature_names: Vec<String>,
    /// Rows dropped because the target was missing or unparsable.
    pub dropped_rows: usize,
    /// Per-feature flag: true when at least one cell was imputed as 0.
    pub imputed: Vec<bool>,
}

/// Load a headered CSV file, taking `target_column` as the target and every
/// other column as a feature.
///
/// Rows whose target cell is missing or unparsable are dropped (and
/// counted). Missing or unparsable feature cells are imputed as 0 and the
/// column is flagged. Errors when the target column does not exist, when no
/// feature column contains a single numeric value, or when every row is
/// dropped.
pub fn load_csv(path: &Path, target_column: &str) -> Result<CsvLoad> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let target_index = headers
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| {
            Error::InvalidDataset(format!("target column `{target_column}` not found"))
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != target_index)
        .map(|(_, h)| h.to_string())
        .collect();

    let parse = |cell: Option<&str>| -> Option<f64> {
        let cell = cell?.trim();
        if cell.is_empty() {
            return None;
        }
        cell.parse::<f64>().ok().filter(|v| v.is_finite())
    };

    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    let mut dropped_rows = 0usize;
    for record in reader.records() {
        let record = record?;
        let target = parse(record.get(target_index));
        let Some(target) = target else {
            dropped_rows += 1;
            continue;
        };
        let mut row = Vec::with_capacity(feature_names.len());
        for i in 0..headers.len() {
            if i == target_index {
                continue;
            }
            row.push(parse(record.get(i)));
        }
        rows.push(row);
        targets.push(target);
    }

    if rows.is_empty() {
        return Err(Error::InvalidDataset(
            "no usable rows: every target was missing or unparsable".into(),
        ));
    }
    let n_features = feature_names.len();
    if n_features == 0 {
        return Err(Error::InvalidDataset("no feature columns besides the target".into()));
    }
    let mut numeric = vec![false; n_features];
    let mut imputed = vec![false; n_features];
    for row in &rows {
        for (j, cell) in row.iter().enumerate() {
            match cell {
                Some(_) => numeric[j] = true,
                None => imputed[j] = true,
            }
        }
    }
    if numeric.iter().all(|n| !n) {
        return Err(Error::InvalidDataset("no numeric feature columns".into()));
    }

    let dense: Vec<Vec<f64>> = rows
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.unwrap_or(0.0)).collect())
        .collect();
    Ok(CsvLoad {
        data: Dataset::new(dense, targets)?,
        feature_names,
        dropped_rows,
        imputed,
    })
}

/// Min and max of one column as seen at fit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnScale {
    pub min: f64,
    pub max: f64,
}

impl ColumnScale {
    fn fit(values: impl Iterator<Item = f64>) -> ColumnScale {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        ColumnScale { min, max }
    }

    fn is_constant(&self) -> bool {
        self.min == self.max
    }

    fn apply(&self, v: f64) -> f64 {
        if self.is_constant() {
            0.0
        } else {
            (v - self.min) / (self.max - self.min)
        }
    }

    fn invert(&self, v: f64) -> f64 {
        if self.is_constant() {
            self.min
        } else {
            v * (self.max - self.min) + self.min
        }
    }
}

/// Per-column min-max scaling to [0, 1], fitted on training data.
///
/// Constant columns (max equal to min) map to 0 and are flagged; inverting
/// a constant column returns the fitted value.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub features: Vec<ColumnScale>,
    pub target: ColumnScale,
}

impl Normalization {
    /// Record each feature column's and the target's min/max.
    pub fn fit(data: &Dataset) -> Normalization {
        let features = (0..data.n_features())
            .map(|j| ColumnScale::fit((0..data.len()).map(|k| data.row(k)[j])))
            .collect();
        let target = ColumnScale::fit(data.targets().iter().copied());
        Normalization { features, target }
    }

    /// True for each feature column that was constant at fit time.
    pub fn constant_features(&self) -> Vec<bool> {
        self.features.iter().map(ColumnScale::is_constant).collect()
    }

    /// True when the target was constant at fit time.
    pub fn constant_target(&self) -> bool {
        self.target.is_constant()
    }

    fn check_width(&self, got: usize) -> Result<()> {
        if got != self.features.len() {
            return Err(Error::DimensionMismatch {
                expected: self.features.len(),
                got,
            });
        }
        Ok(())
    }

    /// Scale one feature row.
    pub fn apply_features(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_width(x.len())?;
        Ok(x.iter().zip(&self.features).map(|(v, s)| s.apply(*v)).collect())
    }

    /// Scale one target value.
    pub fn apply_target(&self, y: f64) -> f64 {
        self.target.apply(y)
    }

    /// Map a normalized target back to the original scale.
    pub fn invert_target(&self, y: f64) -> f64 {
        self.target.invert(y)
    }

    /// Scale a whole dataset (features and target).
    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        self.check_width(data.n_features())?;
        let mut rows = Vec::with_capacity(data.len());
        let mut targets = Vec::with_capacity(data.len());
        for k in 0..data.len() {
            rows.push(self.apply_features(data.row(k))?);
            targets.push(self.apply_target(data.target(k)));
        }
        Dataset::new(rows, targets)
    }

    /// Map a normalized dataset back to the original scale. Constant columns
    /// recover their fitted value.
    pub fn invert(&self, data: &Dataset) -> Result<Dataset> {
        self.check_width(data.n_features())?;
        let mut rows = Vec::with_capacity(data.len());
        let mut targets = Vec::with_capacity(data.len());
        for k in 0..data.len() {
            rows.push(
                data.row(k)
                    .iter()
                    .zip(&self.features)
                    .map(|(v, s)| s.invert(*v))
                    .collect(),
            );
            targets.push(self.target.invert(data.target(k)));
        }
        Dataset::new(rows, targets)
    }
}

/// How to assign rows to the train and test sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Seeded random permutation.
    Shuffled,
    /// First rows train, remaining rows test; preserves series order.
    Contiguous,
}

/// A train/test split along with the source row indices of each side.
#[derive(Debug, Clone)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Split a dataset, putting `round(n * train_fraction)` rows in the train
/// side. Errors when either side would be empty.
pub fn split_dataset(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
    mode: SplitMode,
) -> Result<Split> {
    if !(train_fraction.is_finite() && 0.0 < train_fraction && train_fraction < 1.0) {
        return Err(Error::InvalidDataset(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let n = data.len();
    let n_train = (n as f64 * train_fraction).round() as usize;
    if n_train == 0 {
        return Err(Error::EmptySplit { side: "train" });
    }
    if n_train >= n {
        return Err(Error::EmptySplit { side: "test" });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    if mode == SplitMode::Shuffled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        indices.shuffle(&mut rng);
    }
    let (train_idx, test_idx) = indices.split_at(n_train);
    Ok(Split {
        train: data.select(train_idx)?,
        test: data.select(test_idx)?,
        train_indices: train_idx.to_vec(),
        test_indices: test_idx.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    #[test]
    fn plant_first_steps_from_rest() {
        // From a zero initial state the nonlinear term vanishes for the
        // first two steps, leaving only the forcing term.
        let data = plant_dataset(2, 0.0, 0.0).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data.row(0), &[0.0, 0.0]);
        let z2 = (4.0f64 / 25.0).sin();
        let z3 = (6.0f64 / 25.0).sin();
        assert_eq!(data.target(0), z2);
        assert_abs_diff_eq!(data.target(0), 0.159318, epsilon = 1e-6);
        assert_eq!(data.row(1), &[z2, 0.0]);
        assert_eq!(data.target(1), z3);
        assert_abs_diff_eq!(data.target(1), 0.237703, epsilon = 1e-6);
    }

    #[test]
    fn plant_long_series_stays_finite_and_bounded() {
        let data = plant_dataset(10_000, 0.0, 0.0).unwrap();
        assert_eq!(data.len(), 10_000);
        for k in 0..data.len() {
            assert!(data.target(k).abs() < 10.0);
        }
        // Deterministic.
        let again = plant_dataset(10_000, 0.0, 0.0).unwrap();
        assert_eq!(data, again);
    }

    #[test]
    fn sinc_grid_avoids_zero() {
        let data = sinc_dataset(121, -40.0, 40.0).unwrap();
        assert_eq!(data.len(), 121);
        assert_eq!(data.row(0), &[-40.0]);
        assert_eq!(data.row(120), &[40.0]);
        for k in 0..data.len() {
            assert_ne!(data.row(k)[0], 0.0);
            assert!(data.target(k).is_finite());
        }
        // The midpoint grid node would be 0; it moves up half a step.
        let step = 80.0 / 120.0;
        assert_abs_diff_eq!(data.row(60)[0], step / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn sinc_value_at_pi_is_nearly_zero() {
        let data = sinc_dataset(3, -std::f64::consts::PI, std::f64::consts::PI).unwrap();
        assert!(data.target(2).abs() < 1e-15);
        // Grid symmetry away from the nudged center.
        assert_abs_diff_eq!(data.target(0), data.target(2), epsilon = 1e-15);
    }

    #[test]
    fn sparse_data_is_mostly_zero_and_deterministic() {
        let data = sparse_dataset(500, 20, 7).unwrap();
        assert_eq!(data.len(), 500);
        assert_eq!(data.n_features(), 20);
        let zeros = data.inputs().iter().filter(|v| **v == 0.0).count();
        let fraction = zeros as f64 / (500.0 * 20.0);
        assert!((0.75..0.85).contains(&fraction), "zero fraction {fraction}");
        assert!(data.targets().iter().all(|y| y.is_finite()));
        assert_eq!(data, sparse_dataset(500, 20, 7).unwrap());
        assert_ne!(data, sparse_dataset(500, 20, 8).unwrap());
    }

    #[test]
    fn sparse_data_rejects_too_few_features() {
        assert!(sparse_dataset(10, 2, 0).is_err());
        assert!(sparse_dataset(0, 20, 0).is_err());
        // The last regime absorbs the remainder block.
        assert!(sparse_dataset(10, 4, 0).is_ok());
    }

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn csv_recovers_numeric_table() {
        let f = write_csv("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
        let load = load_csv(f.path(), "y").unwrap();
        assert_eq!(load.feature_names, vec!["a", "b"]);
        assert_eq!(load.dropped_rows, 0);
        assert_eq!(load.imputed, vec![false, false]);
        assert_eq!(load.data.len(), 3);
        assert_eq!(load.data.row(1), &[4.0, 5.0]);
        assert_eq!(load.data.target(2), 9.0);
    }

    #[test]
    fn csv_drops_bad_targets_and_imputes_features() {
        let f = write_csv("a,b,y\n1,,3\nx,5,oops\n7,8,\n2,9,4\n");
        let load = load_csv(f.path(), "y").unwrap();
        // Rows 2 and 3 lose their targets; rows 1 and 4 survive.
        assert_eq!(load.dropped_rows, 2);
        assert_eq!(load.data.len(), 2);
        // Row 1 had a blank `b`, imputed as 0.
        assert_eq!(load.data.row(0), &[1.0, 0.0]);
        assert_eq!(load.imputed, vec![false, true]);
    }

    #[test]
    fn csv_keeps_all_blank_column_as_zeros() {
        let f = write_csv("a,b,y\n1,,3\n2,,4\n");
        let load = load_csv(f.path(), "y").unwrap();
        assert_eq!(load.data.row(0), &[1.0, 0.0]);
        assert_eq!(load.data.row(1), &[2.0, 0.0]);
        assert!(load.imputed[1]);
        // All zeros means the normalization will flag it constant.
        let norm = Normalization::fit(&load.data);
        assert_eq!(norm.constant_features(), vec![false, true]);
    }

    #[test]
    fn csv_error_cases() {
        let f = write_csv("a,b,y\n1,2,3\n");
        assert!(load_csv(f.path(), "missing").is_err());

        let f = write_csv("a,y\nfoo,1\nbar,2\n");
        assert!(matches!(
            load_csv(f.path(), "y"),
            Err(Error::InvalidDataset(msg)) if msg.contains("no numeric feature")
        ));

        let f = write_csv("a,y\n1,\n2,nope\n");
        assert!(load_csv(f.path(), "y").is_err());
    }

    #[test]
    fn normalization_scales_to_unit_interval() {
        let data = Dataset::new(
            vec![vec![0.0, 5.0], vec![5.0, 5.0], vec![10.0, 5.0]],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let norm = Normalization::fit(&data);
        let scaled = norm.apply(&data).unwrap();
        assert_eq!(scaled.row(0), &[0.0, 0.0]);
        assert_eq!(scaled.row(1), &[0.5, 0.0]);
        assert_eq!(scaled.row(2), &[1.0, 0.0]);
        assert_eq!(scaled.targets(), &[0.0, 0.5, 1.0]);
        assert_eq!(norm.constant_features(), vec![false, true]);
        assert!(!norm.constant_target());
    }

    #[test]
    fn normalization_round_trip() {
        let data = Dataset::new(
            vec![vec![0.1, -3.0], vec![2.7, 4.0], vec![-1.4, 0.5]],
            vec![10.0, -2.0, 7.5],
        )
        .unwrap();
        let norm = Normalization::fit(&data);
        let back = norm.invert(&norm.apply(&data).unwrap()).unwrap();
        for k in 0..data.len() {
            for j in 0..data.n_features() {
                assert_abs_diff_eq!(back.row(k)[j], data.row(k)[j], epsilon = 1e-12);
            }
            assert_abs_diff_eq!(back.target(k), data.target(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_is_idempotent_on_normalized_data() {
        let data = Dataset::new(
            vec![vec![0.3], vec![0.9], vec![0.0], vec![1.0]],
            vec![0.0, 0.4, 1.0, 0.2],
        )
        .unwrap();
        let norm = Normalization::fit(&data);
        let once = norm.apply(&data).unwrap();
        let refit = Normalization::fit(&once);
        let twice = refit.apply(&once).unwrap();
        for k in 0..once.len() {
            assert_abs_diff_eq!(twice.row(k)[0], once.row(k)[0], epsilon = 1e-15);
            assert_abs_diff_eq!(twice.target(k), once.target(k), epsilon = 1e-15);
        }
    }

    fn tiny(n: usize) -> Dataset {
        Dataset::new(
            (0..n).map(|i| vec![i as f64]).collect(),
            (0..n).map(|i| i as f64 * 10.0).collect(),
        )
        .unwrap()
    }

    #[test]
    fn split_sizes_round() {
        let split = split_dataset(&tiny(10), 0.7, 1, SplitMode::Shuffled).unwrap();
        assert_eq!(split.train.len(), 7);
        assert_eq!(split.test.len(), 3);
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let data = tiny(30);
        let a = split_dataset(&data, 0.5, 42, SplitMode::Shuffled).unwrap();
        let b = split_dataset(&data, 0.5, 42, SplitMode::Shuffled).unwrap();
        assert_eq!(a.train_indices, b.train_indices);
        let c = split_dataset(&data, 0.5, 43, SplitMode::Shuffled).unwrap();
        assert_ne!(a.train_indices, c.train_indices);
    }

    #[test]
    fn split_partitions_all_rows() {
        let data = tiny(23);
        let split = split_dataset(&data, 0.6, 7, SplitMode::Shuffled).unwrap();
        let mut all: Vec<usize> = split
            .train_indices
            .iter()
            .chain(&split.test_indices)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
    }

    #[test]
    fn contiguous_split_preserves_order() {
        let data = tiny(10);
        let split = split_dataset(&data, 0.5, 0, SplitMode::Contiguous).unwrap();
        assert_eq!(split.train_indices, vec![0, 1, 2, 3, 4]);
        assert_eq!(split.test_indices, vec![5, 6, 7, 8, 9]);
        assert_eq!(split.train.target(0), 0.0);
        assert_eq!(split.test.target(0), 50.0);
    }

    #[test]
    fn split_rejects_empty_sides() {
        assert!(matches!(
            split_dataset(&tiny(10), 0.01, 0, SplitMode::Shuffled),
            Err(Error::EmptySplit { side: "train" })
        ));
        assert!(matches!(
            split_dataset(&tiny(10), 0.999, 0, SplitMode::Shuffled),
            Err(Error::EmptySplit { side: "test" })
        ));
        assert!(split_dataset(&tiny(10), 1.2, 0, SplitMode::Shuffled).is_err());
    }
}
