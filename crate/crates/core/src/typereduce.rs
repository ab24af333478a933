//! Karnik-Mendel type reduction: collapse interval firing strengths over
//! rule outputs into an output interval, plus a brute-force twin used as an
//! independent oracle in tests.

use crate::antecedent::FiringInterval;
use crate::error::{Error, Result};

/// Largest cluster count accepted by [`km_brute_force`]; keeps the 2^c
/// enumeration tractable.
pub const BRUTE_FORCE_MAX_CLUSTERS: usize = 20;

/// Output interval endpoints plus the switch structure that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct KMResult {
    pub y_lower: f64,
    pub y_upper: f64,
    /// Number of leading rules (ascending output order) that take their
    /// upper firing weight in the lower endpoint.
    pub left_switch: usize,
    /// Number of leading rules (ascending output order) that take their
    /// lower firing weight in the upper endpoint.
    pub right_switch: usize,
    /// Ascending sort permutation: `order[pos]` is the original rule index.
    pub order: Vec<usize>,
}

impl KMResult {
    /// Midpoint of the output interval.
    pub fn midpoint(&self) -> f64 {
        (self.y_lower + self.y_upper) / 2.0
    }

    /// Normalized endpoint weights per original rule index: `(a, b)` such
    /// that `y_lower = sum(a_i * output_i)` and `y_upper = sum(b_i *
    /// output_i)` for the firings this result was computed from.
    pub fn endpoint_weights(&self, firings: &[FiringInterval]) -> (Vec<f64>, Vec<f64>) {
        let c = self.order.len();
        let mut a = vec![0.0; c];
        let mut b = vec![0.0; c];
        for (pos, &original) in self.order.iter().enumerate() {
            a[original] = if pos < self.left_switch {
                firings[original].upper
            } else {
                firings[original].lower
            };
            b[original] = if pos < self.right_switch {
                firings[original].lower
            } else {
                firings[original].upper
            };
        }
        let den_a: f64 = a.iter().sum();
        let den_b: f64 = b.iter().sum();
        for w in &mut a {
            *w /= den_a;
        }
        for w in &mut b {
            *w /= den_b;
        }
        (a, b)
    }
}

/// Midpoint of a type-reduced interval.
pub fn defuzzify(km: &KMResult) -> f64 {
    km.midpoint()
}

fn validate(outputs: &[f64], firings: &[FiringInterval]) -> Result<()> {
    if outputs.is_empty() {
        return Err(Error::InvalidDataset("no rule outputs".into()));
    }
    if outputs.len() != firings.len() {
        return Err(Error::DimensionMismatch {
            expected: outputs.len(),
            got: firings.len(),
        });
    }
    if outputs.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidDataset("non-finite rule output".into()));
    }
    for f in firings {
        if !f.lower.is_finite() || !f.upper.is_finite() || f.lower < 0.0 || f.lower > f.upper {
            return Err(Error::InvalidDataset(format!(
                "invalid firing interval [{}, {}]",
                f.lower, f.upper
            )));
        }
    }
    if firings.iter().map(|f| f.upper).sum::<f64>() == 0.0 {
        return Err(Error::NoRuleFires);
    }
    Ok(())
}

/// Type-reduce rule outputs under interval firing strengths with the
/// classical Karnik-Mendel switch-point iteration.
///
/// The lower endpoint weights leading (smaller) outputs by their upper
/// firing and trailing outputs by their lower firing; the upper endpoint is
/// symmetric. Equal-output ties resolve toward the smaller sorted index.
pub fn km_reduce(outputs: &[f64], firings: &[FiringInterval]) -> Result<KMResult> {
    validate(outputs, firings)?;
    let c = outputs.len();

    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| outputs[i].partial_cmp(&outputs[j]).unwrap());
    let sorted_outputs: Vec<f64> = order.iter().map(|&i| outputs[i]).collect();
    let sorted_upper: Vec<f64> = order.iter().map(|&i| firings[i].upper).collect();
    let sorted_lower: Vec<f64> = order.iter().map(|&i| firings[i].lower).collect();

    if c == 1 {
        return Ok(KMResult {
            y_lower: sorted_outputs[0],
            y_upper: sorted_outputs[0],
            left_switch: 1,
            right_switch: 0,
            order,
        });
    }

    let (y_lower, left_switch) =
        km_endpoint(&sorted_outputs, &sorted_upper, &sorted_lower, true);
    let (y_upper, right_switch) =
        km_endpoint(&sorted_outputs, &sorted_lower, &sorted_upper, false);

    Ok(KMResult {
        y_lower,
        y_upper,
        left_switch,
        right_switch,
        order,
    })
}

/// One Karnik-Mendel endpoint over ascending outputs. The first `k` rules
/// take `lead` weights and the rest take `trail` weights; the iteration
/// finds the fixed-point `k`. `minimize` selects the enumeration direction
/// for the rare degenerate fallback.
fn km_endpoint(outputs: &[f64], lead: &[f64], trail: &[f64], minimize: bool) -> (f64, usize) {
    let c = outputs.len();
    let weighted = |k: usize| -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        for pos in 0..c {
            let w = if pos < k { lead[pos] } else { trail[pos] };
            num += w * outputs[pos];
            den += w;
        }
        (num, den)
    };

    // Start from the interval-midpoint average.
    let mut num = 0.0;
    let mut den = 0.0;
    for pos in 0..c {
        let w = (lead[pos] + trail[pos]) / 2.0;
        num += w * outputs[pos];
        den += w;
    }
    let mut y = num / den;
    let mut previous = usize::MAX;

    for _ in 0..=c {
        let y_clamped = y.clamp(outputs[0], outputs[c - 1]);
        let mut k = c - 1;
        for candidate in 1..c {
            if outputs[candidate - 1] <= y_clamped && y_clamped <= outputs[candidate] {
                k = candidate;
                break;
            }
        }
        if k == previous {
            return (y, k);
        }
        let (num, den) = weighted(k);
        if den == 0.0 {
            return km_endpoint_enumerated(outputs, lead, trail, minimize);
        }
        y = num / den;
        previous = k;
    }
    // The classical iteration settles within c rounds; reaching this point
    // means pathological ties, where exhaustive search is still exact.
    km_endpoint_enumerated(outputs, lead, trail, minimize)
}

fn km_endpoint_enumerated(
    outputs: &[f64],
    lead: &[f64],
    trail: &[f64],
    minimize: bool,
) -> (f64, usize) {
    let c = outputs.len();
    let mut best: Option<(f64, usize)> = None;
    for k in 0..=c {
        let mut num = 0.0;
        let mut den = 0.0;
        for pos in 0..c {
            let w = if pos < k { lead[pos] } else { trail[pos] };
            num += w * outputs[pos];
            den += w;
        }
        if den == 0.0 {
            continue;
        }
        let y = num / den;
        let better = match best {
            None => true,
            Some((current, _)) => {
                if minimize {
                    y < current
                } else {
                    y > current
                }
            }
        };
        if better {
            best = Some((y, k));
        }
    }
    // At least one split has positive weight mass because the upper firings
    // do not all vanish (validated upstream).
    best.expect("some switch split must have positive weight")
}

/// Exhaustive type reduction: try every corner assignment of lower/upper
/// weights and take the extreme weighted averages. Exponential in the rule
/// count; capped at [`BRUTE_FORCE_MAX_CLUSTERS`].
pub fn km_brute_force(outputs: &[f64], firings: &[FiringInterval]) -> Result<(f64, f64)> {
    validate(outputs, firings)?;
    let c = outputs.len();
    if c > BRUTE_FORCE_MAX_CLUSTERS {
        return Err(Error::TooManyClusters {
            max: BRUTE_FORCE_MAX_CLUSTERS,
            got: c,
        });
    }
    let mut lowest = f64::INFINITY;
    let mut highest = f64::NEG_INFINITY;
    for mask in 0u32..(1 << c) {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..c {
            let w = if mask & (1 << i) != 0 {
                firings[i].upper
            } else {
                firings[i].lower
            };
            num += w * outputs[i];
            den += w;
        }
        if den == 0.0 {
            continue;
        }
        let y = num / den;
        lowest = lowest.min(y);
        highest = highest.max(y);
    }
    Ok((lowest, highest))
}
