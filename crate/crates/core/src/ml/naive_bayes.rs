use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{class_labels, MlError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbModel {
    /// Ascending.
    pub classes: Vec<i64>,
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

impl GaussianNbModel {
    /// Unnormalized log-posterior `log P(c) + Σ log N(x_j; μ_cj, σ²_cj)` for
    /// every class, in class order.
    pub fn log_posteriors(&self, x: &[f64]) -> Vec<f64> {
        self.priors
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(prior, (mu, var))| {
                prior.ln()
                    + x.iter()
                        .zip(mu.iter().zip(var))
                        .map(|(v, (m, s2))| {
                            -0.5 * (2.0 * PI * s2).ln() - (v - m).powi(2) / (2.0 * s2)
                        })
                        .sum::<f64>()
            })
            .collect()
    }

    /// Argmax of the log-posterior; ties go to the smallest class label.
    pub fn classify(&self, x: &[f64]) -> i64 {
        let scores = self.log_posteriors(x);
        let mut best = 0;
        for (i, s) in scores.iter().enumerate().skip(1) {
            if *s > scores[best] {
                best = i;
            }
        }
        self.classes[best]
    }
}

/// Fits class priors, per-class means and population variances. Variances
/// are floored at `var_smoothing × (largest per-feature variance)`, or at
/// `var_smoothing` itself when every feature is constant.
pub fn train_gaussian_nb(
    x: &[Vec<f64>],
    y: &[f64],
    var_smoothing: f64,
) -> Result<GaussianNbModel, MlError> {
    let labels = class_labels(y)?;
    let n = x.len();
    let d = x.first().map_or(0, Vec::len);

    let mut classes: Vec<i64> = labels.clone();
    classes.sort_unstable();
    classes.dedup();

    let mut max_var: f64 = 0.0;
    for j in 0..d {
        let mean = x.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
        max_var = max_var.max(var);
    }
    let floor = if max_var > 0.0 {
        var_smoothing * max_var
    } else {
        var_smoothing
    };

    let mut priors = Vec::with_capacity(classes.len());
    let mut means = Vec::with_capacity(classes.len());
    let mut variances = Vec::with_capacity(classes.len());
    for &c in &classes {
        let members: Vec<&Vec<f64>> = x
            .iter()
            .zip(&labels)
            .filter(|(_, &l)| l == c)
            .map(|(r, _)| r)
            .collect();
        let m = members.len() as f64;
        priors.push(m / n as f64);
        let mu: Vec<f64> = (0..d)
            .map(|j| members.iter().map(|r| r[j]).sum::<f64>() / m)
            .collect();
        let var: Vec<f64> = (0..d)
            .map(|j| {
                let v = members.iter().map(|r| (r[j] - mu[j]).powi(2)).sum::<f64>() / m;
                v.max(floor)
            })
            .collect();
        means.push(mu);
        variances.push(var);
    }
    Ok(GaussianNbModel {
        classes,
        priors,
        means,
        variances,
    })
}
