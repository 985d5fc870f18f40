#![allow(dead_code, clippy::needless_range_loop)]

use qarx::{ArxModel, ExperimentConfig};

/// Dense solve by Gaussian elimination with partial pivoting on the
/// unregularized normal equations built directly from the data.
pub fn ls_oracle(rows: &[Vec<f64>], targets: &[f64], dim: usize) -> Vec<f64> {
    let mut a = vec![vec![0.0; dim + 1]; dim];
    for (r, row) in a.iter_mut().enumerate() {
        row[r] = 1.0;
    }
    for (psi, &t) in rows.iter().zip(targets) {
        for r in 0..dim {
            for c in 0..dim {
                a[r][c] += psi[r] * psi[c];
            }
            a[r][dim] += psi[r] * t;
        }
    }
    gauss_solve(a)
}

/// Solves the augmented system `[A | b]`.
pub fn gauss_solve(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut v = a[r][n];
        for c in (r + 1)..n {
            v -= a[r][c] * x[c];
        }
        x[r] = v / a[r][r];
    }
    x
}

pub fn paper_model() -> ArxModel {
    ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0).unwrap()
}

pub fn paper_config(delta: f64, epsilon: f64, slope: f64, bound: usize) -> ExperimentConfig {
    ExperimentConfig {
        model: paper_model(),
        input_delta: delta,
        epsilon,
        p_star: bound,
        q_star: bound,
        slope_l: slope,
        slope_v: slope,
        horizon: 4000,
        checkpoints: vec![500, 1000, 2000, 4000],
        trials: 20,
        base_seed: 2024,
        output_dir: std::env::temp_dir().join("qarx-unused"),
        coefficient_bound: None,
        write_tables: false,
        hypothesis: None,
    }
    .resolved()
    .unwrap()
}
