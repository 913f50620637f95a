use serde::{Deserialize, Serialize};

use super::MlError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LogisticModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }

    /// Class 1 iff `w·x + b ≥ 0`.
    pub fn classify(&self, x: &[f64]) -> i64 {
        i64::from(self.decision(x) >= 0.0)
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean log-loss of parameters `(weights, intercept)`.
pub fn log_loss(weights: &[f64], intercept: f64, x: &[Vec<f64>], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    x.iter()
        .zip(y)
        .map(|(row, &t)| {
            let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + intercept;
            // log(1 + e^z) - t·z, stable for large |z|
            let softplus = if z > 0.0 {
                z + (-z).exp().ln_1p()
            } else {
                z.exp().ln_1p()
            };
            softplus - t * z
        })
        .sum::<f64>()
        / n
}

/// Gradient of [`log_loss`]: `(∂/∂w, ∂/∂b)`.
pub fn log_loss_gradient(
    weights: &[f64],
    intercept: f64,
    x: &[Vec<f64>],
    y: &[f64],
) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (row, &t) in x.iter().zip(y) {
        let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + intercept;
        let err = sigmoid(z) - t;
        for (g, v) in gw.iter_mut().zip(row) {
            *g += err * v;
        }
        gb += err;
    }
    for g in &mut gw {
        *g /= n;
    }
    (gw, gb / n)
}

/// Full-batch gradient descent from zero initialization, exactly `epochs`
/// updates.
pub fn train_logistic_regression(
    x: &[Vec<f64>],
    y: &[f64],
    lr: f64,
    epochs: u64,
) -> Result<LogisticModel, MlError> {
    if let Some(bad) = y.iter().find(|&&t| t != 0.0 && t != 1.0) {
        return Err(MlError::InvalidData(format!(
            "logistic regression labels must be 0 or 1, found {bad}"
        )));
    }
    let d = x.first().map_or(0, Vec::len);
    let mut weights = vec![0.0; d];
    let mut intercept = 0.0;
    for _ in 0..epochs {
        let (gw, gb) = log_loss_gradient(&weights, intercept, x, y);
        for (w, g) in weights.iter_mut().zip(&gw) {
            *w -= lr * g;
        }
        intercept -= lr * gb;
    }
    Ok(LogisticModel { weights, intercept })
}
