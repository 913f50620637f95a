use serde::{Deserialize, Serialize};

use super::{linalg, MlError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }
}

/// Ridge regression by direct solve of `(AᵀA + λ·I') β = Aᵀy`, where `A` is
/// `x` with a trailing column of ones and `I'` leaves the intercept
/// unpenalized.
pub fn train_linear_regression(
    x: &[Vec<f64>],
    y: &[f64],
    lambda: f64,
) -> Result<LinearModel, MlError> {
    let d = x.first().map_or(0, Vec::len);
    let p = d + 1;
    let mut ata = vec![vec![0.0; p]; p];
    let mut aty = vec![0.0; p];
    for (row, &target) in x.iter().zip(y) {
        let a = |i: usize| if i < d { row[i] } else { 1.0 };
        for i in 0..p {
            let ai = a(i);
            aty[i] += ai * target;
            for (j, cell) in ata[i].iter_mut().enumerate() {
                *cell += ai * a(j);
            }
        }
    }
    for (i, r) in ata.iter_mut().enumerate().take(d) {
        r[i] += lambda;
    }
    let beta = linalg::solve(ata, aty).ok_or_else(|| {
        MlError::Singular("normal equations are singular (pivot below 1e-12)".into())
    })?;
    Ok(LinearModel {
        weights: beta[..d].to_vec(),
        intercept: beta[d],
    })
}
