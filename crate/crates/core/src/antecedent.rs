//! Antecedent construction: distances to cluster hyperplanes and the hybrid
//! Gaussian/Student-t membership that turns them into interval firing
//! strengths.
//!
//! The Gaussian component peaks where a point's distance matches the
//! cluster's mean distance and is scaled by the cluster's distance variance;
//! the Student-t component peaks at zero distance and decays with a heavy
//! tail governed by a per-point scale, which keeps faraway points weakly
//! firing instead of vanishing. Mixing the two gives sharp local support
//! without starving sparse regions.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::partition::{regression_predict, CoefficientInterval};

/// Smallest allowed distance variance; keeps the Gaussian exponent finite
/// when a cluster fits its points exactly.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Smallest allowed Student-t tail scale; keeps the tail exponent finite
/// when every distance at a point is zero.
pub const TAIL_SCALE_FLOOR: f64 = 1e-12;

/// Distance statistics of one cluster: the mean and population variance of
/// its point-to-hyperplane distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterGeometry {
    pub mean_distance: f64,
    /// Population variance of the distances, floored at [`VARIANCE_FLOOR`].
    pub distance_variance: f64,
}

impl ClusterGeometry {
    /// Mean and floored population variance of a non-empty distance set.
    pub fn from_distances(distances: &[f64]) -> Result<ClusterGeometry> {
        if distances.is_empty() {
            return Err(Error::EmptyDistances);
        }
        let n = distances.len() as f64;
        let mean = distances.iter().sum::<f64>() / n;
        let variance = distances.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        Ok(ClusterGeometry {
            mean_distance: mean,
            distance_variance: variance.max(VARIANCE_FLOOR),
        })
    }
}

/// Alias for [`ClusterGeometry::from_distances`].
pub fn cluster_geometry(distances: &[f64]) -> Result<ClusterGeometry> {
    ClusterGeometry::from_distances(distances)
}

/// An interval firing strength, `0 <= lower <= upper <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiringInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Distance from the joint point `(x, y)` to the regression hyperplane
/// `y = [x, 1] . coeffs`, computed as `|[x, 1] . coeffs - y|` scaled by
/// `sqrt(|coeffs|^2 + 1)`.
///
/// An all-zero coefficient vector is rejected: it cannot arise from a fitted
/// partition and would make the distance degenerate.
pub fn hyperplane_distance(coeffs: &[f64], x: &[f64], y: f64) -> Result<f64> {
    let norm_sq: f64 = coeffs.iter().map(|w| w * w).sum();
    if norm_sq == 0.0 {
        return Err(Error::ZeroCoefficients);
    }
    let residual = regression_predict(coeffs, x)? - y;
    Ok(residual.abs() / (norm_sq + 1.0).sqrt())
}

/// Hybrid membership of a point at distance `distance` from a cluster:
/// a Gaussian bump around the cluster's mean distance mixed with a
/// Student-t style heavy tail peaking at zero distance.
///
/// `tail_scale` is the per-point scale of the tail component (floored at
/// [`TAIL_SCALE_FLOOR`]); `gaussian_weight` picks the mix and
/// `gaussian_sharpness` scales the Gaussian exponent.
pub fn hybrid_membership(
    distance: f64,
    geometry: &ClusterGeometry,
    tail_scale: f64,
    gaussian_weight: f64,
    gaussian_sharpness: f64,
) -> f64 {
    let variance = geometry.distance_variance.max(VARIANCE_FLOOR);
    let offset = distance - geometry.mean_distance;
    let gaussian = (-gaussian_sharpness * offset * offset / variance).exp();
    let scale = tail_scale.max(TAIL_SCALE_FLOOR);
    let tail = (1.0 + distance * distance / scale).powf(-(scale + 1.0) / 2.0);
    gaussian_weight * gaussian + (1.0 - gaussian_weight) * tail
}

/// Firing intervals plus the per-side cluster geometries they were built
/// from. The geometries are what a trained model carries forward to fire on
/// unseen points.
#[derive(Debug, Clone)]
pub struct AntecedentFit {
    /// One row per data point, one [`FiringInterval`] per cluster.
    pub firings: Vec<Vec<FiringInterval>>,
    pub upper_geometry: Vec<ClusterGeometry>,
    pub lower_geometry: Vec<ClusterGeometry>,
}

/// Borrowed per-rule antecedent state for firing on a single point.
#[derive(Debug, Clone, Copy)]
pub struct RuleView<'a> {
    pub upper_coeffs: &'a [f64],
    pub lower_coeffs: &'a [f64],
    pub upper_geometry: ClusterGeometry,
    pub lower_geometry: ClusterGeometry,
}

/// Compute interval firing strengths for every point of a dataset.
///
/// Distances to each cluster's upper and lower hyperplane are summarized
/// into per-side geometries; each point then gets two membership cells per
/// cluster (upper quantities and lower quantities), ordered into an
/// interval. The tail scale at a point is the largest upper-side distance
/// over the clusters at that point.
pub fn fit_antecedent(
    data: &Dataset,
    intervals: &[CoefficientInterval],
    gaussian_weight: f64,
    gaussian_sharpness: f64,
) -> Result<AntecedentFit> {
    let clusters = intervals.len();
    let n = data.len();
    let mut dist_upper = vec![vec![0.0; n]; clusters];
    let mut dist_lower = vec![vec![0.0; n]; clusters];
    for (i, interval) in intervals.iter().enumerate() {
        for k in 0..n {
            dist_upper[i][k] = hyperplane_distance(&interval.upper, data.row(k), data.target(k))?;
            dist_lower[i][k] = hyperplane_distance(&interval.lower, data.row(k), data.target(k))?;
        }
    }

    let upper_geometry: Vec<ClusterGeometry> = dist_upper
        .iter()
        .map(|d| ClusterGeometry::from_distances(d))
        .collect::<Result<_>>()?;
    let lower_geometry: Vec<ClusterGeometry> = dist_lower
        .iter()
        .map(|d| ClusterGeometry::from_distances(d))
        .collect::<Result<_>>()?;

    let mut firings = Vec::with_capacity(n);
    let mut du = vec![0.0; clusters];
    let mut dl = vec![0.0; clusters];
    for k in 0..n {
        for i in 0..clusters {
            du[i] = dist_upper[i][k];
            dl[i] = dist_lower[i][k];
        }
        firings.push(interval_cells(
            &du,
            &dl,
            &upper_geometry,
            &lower_geometry,
            gaussian_weight,
            gaussian_sharpness,
        ));
    }

    Ok(AntecedentFit {
        firings,
        upper_geometry,
        lower_geometry,
    })
}

/// [`fit_antecedent`] reduced to just the firing matrix.
pub fn firing_intervals(
    data: &Dataset,
    intervals: &[CoefficientInterval],
    gaussian_weight: f64,
    gaussian_sharpness: f64,
) -> Result<Vec<Vec<FiringInterval>>> {
    Ok(fit_antecedent(data, intervals, gaussian_weight, gaussian_sharpness)?.firings)
}

/// Interval firing strengths of every rule at one labeled point, using
/// geometries fixed at training time.
pub fn firing_at_point(
    rules: &[RuleView<'_>],
    x: &[f64],
    y: f64,
    gaussian_weight: f64,
    gaussian_sharpness: f64,
) -> Result<Vec<FiringInterval>> {
    let mut du = Vec::with_capacity(rules.len());
    let mut dl = Vec::with_capacity(rules.len());
    for rule in rules {
        du.push(hyperplane_distance(rule.upper_coeffs, x, y)?);
        dl.push(hyperplane_distance(rule.lower_coeffs, x, y)?);
    }
    let upper_geometry: Vec<ClusterGeometry> = rules.iter().map(|r| r.upper_geometry).collect();
    let lower_geometry: Vec<ClusterGeometry> = rules.iter().map(|r| r.lower_geometry).collect();
    Ok(interval_cells(
        &du,
        &dl,
        &upper_geometry,
        &lower_geometry,
        gaussian_weight,
        gaussian_sharpness,
    ))
}

/// Shared kernel: two membership cells per cluster (upper-side and
/// lower-side quantities) ordered into firing intervals. The tail scale is
/// the largest upper-side distance at this point.
fn interval_cells(
    dist_upper: &[f64],
    dist_lower: &[f64],
    upper_geometry: &[ClusterGeometry],
    lower_geometry: &[ClusterGeometry],
    gaussian_weight: f64,
    gaussian_sharpness: f64,
) -> Vec<FiringInterval> {
    let tail_scale = dist_upper
        .iter()
        .fold(TAIL_SCALE_FLOOR, |acc, d| acc.max(*d));
    dist_upper
        .iter()
        .zip(dist_lower)
        .zip(upper_geometry.iter().zip(lower_geometry))
        .map(|((du, dl), (gu, gl))| {
            let cell_upper =
                hybrid_membership(*du, gu, tail_scale, gaussian_weight, gaussian_sharpness);
            let cell_lower =
                hybrid_membership(*dl, gl, tail_scale, gaussian_weight, gaussian_sharpness);
            FiringInterval {
                lower: cell_upper.min(cell_lower),
                upper: cell_upper.max(cell_lower),
            }
        })
        .collect()
}
