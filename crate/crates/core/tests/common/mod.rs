//! Shared oracles for the acceptance suite, kept deliberately independent
//! of the library's own numerics: plain Gaussian elimination on the normal
//! equations instead of iterative fitting.

use it2tsk::dataset::Dataset;

/// Solve `a · x = b` by Gaussian elimination with partial pivoting.
///
/// Panics on a singular system; the acceptance instances are constructed to
/// be well conditioned.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty system");
        assert!(a[pivot][col].abs() > 1e-12, "singular system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        for row in 0..n {
            if row == col || a[row][col] == 0.0 {
                continue;
            }
            let factor = a[row][col] / diag;
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    (0..n).map(|i| b[i] / a[i][i]).collect()
}

/// Closed-form minimizer of the weighted ridge objective
/// `1/2 sum_k w_k ([x_k 1]·z - y_k)^2 + lambda/2 ||z||^2`
/// (the intercept is part of the penalty, matching the library's objective).
pub fn weighted_ridge(data: &Dataset, weights: &[f64], l2_penalty: f64) -> Vec<f64> {
    let n = data.len();
    assert_eq!(weights.len(), n);
    let width = data.n_features() + 1;
    let mut ata = vec![vec![0.0; width]; width];
    let mut atb = vec![0.0; width];
    let mut xt = vec![0.0; width];
    for k in 0..n {
        let (x, w, y) = (data.row(k), weights[k], data.target(k));
        xt[..width - 1].copy_from_slice(x);
        xt[width - 1] = 1.0;
        for p in 0..width {
            atb[p] += w * xt[p] * y;
            for q in 0..width {
                ata[p][q] += w * xt[p] * xt[q];
            }
        }
    }
    for p in 0..width {
        ata[p][p] += l2_penalty;
    }
    solve_linear(ata, atb)
}

/// Affine prediction `[x 1] · coeffs` with the intercept last.
pub fn affine_predict(coeffs: &[f64], x: &[f64]) -> f64 {
    x.iter().zip(coeffs).map(|(a, b)| a * b).sum::<f64>() + coeffs[x.len()]
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
