use serde::{Deserialize, Serialize};

/// Per-feature z-score standardization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub mean: Vec<f64>,
    /// Population standard deviation; 1.0 for constant columns.
    pub scale: Vec<f64>,
}

pub fn fit_scaler(x: &[Vec<f64>]) -> ScalerParams {
    assert!(!x.is_empty(), "fit_scaler needs at least one row");
    let d = x[0].len();
    let n = x.len() as f64;
    let mut mean = vec![0.0; d];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut scale = vec![0.0; d];
    for row in x {
        for j in 0..d {
            let dev = row[j] - mean[j];
            scale[j] += dev * dev;
        }
    }
    for s in &mut scale {
        *s = (*s / n).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    ScalerParams { mean, scale }
}

impl ScalerParams {
    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

pub fn apply_scaler(params: &ScalerParams, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.iter().map(|r| params.transform_row(r)).collect()
}
