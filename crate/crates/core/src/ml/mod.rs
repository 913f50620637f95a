//! Native training and inference for the four supported algorithm kinds,
//! plus CSV ingestion, z-score scaling and JSON model persistence.

mod dataset;
mod knn;
mod linalg;
mod linear;
mod logistic;
mod naive_bayes;
mod scaler;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Algorithm, AlgorithmKind};

pub use dataset::{load_dataset, Dataset};
pub use knn::{train_knn, KnnModel};
pub use linalg::{solve, PIVOT_EPS};
pub use linear::{train_linear_regression, LinearModel};
pub use logistic::{
    log_loss, log_loss_gradient, sigmoid, train_logistic_regression, LogisticModel,
};
pub use naive_bayes::{train_gaussian_nb, GaussianNbModel};
pub use scaler::{apply_scaler, fit_scaler, ScalerParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MlError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Schema(String),
    #[error("row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Singular(String),
    #[error("expected {expected} features, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    InvalidData(String),
}

impl MlError {
    pub fn code(&self) -> &'static str {
        match self {
            MlError::Io(_) => "E-IO",
            MlError::Schema(_) => "E-SCHEMA",
            MlError::Parse { .. } => "E-PARSE",
            MlError::Singular(_) => "E-SINGULAR",
            MlError::Dimension { .. } => "E-DIM",
            MlError::Format(_) => "E-FORMAT",
            MlError::InvalidData(_) => "E-DATA",
        }
    }
}

/// Converts label values to integer classes, rejecting fractional ones.
pub(crate) fn class_labels(y: &[f64]) -> Result<Vec<i64>, MlError> {
    y.iter()
        .map(|&v| {
            if v.fract() == 0.0 && v.abs() < 9.0e15 {
                Ok(v as i64)
            } else {
                Err(MlError::InvalidData(format!(
                    "class label {v} is not an integer"
                )))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    LinearRegression(LinearModel),
    LogisticRegression(LogisticModel),
    GaussianNB(GaussianNbModel),
    Knn(KnnModel),
}

impl ModelParams {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            ModelParams::LinearRegression(_) => AlgorithmKind::LinearRegression,
            ModelParams::LogisticRegression(_) => AlgorithmKind::LogisticRegression,
            ModelParams::GaussianNB(_) => AlgorithmKind::GaussianNB,
            ModelParams::Knn(_) => AlgorithmKind::Knn,
        }
    }

    fn dimension(&self) -> usize {
        match self {
            ModelParams::LinearRegression(m) => m.weights.len(),
            ModelParams::LogisticRegression(m) => m.weights.len(),
            ModelParams::GaussianNB(m) => m.means.first().map_or(0, Vec::len),
            ModelParams::Knn(m) => m.points.first().map_or(0, Vec::len),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prediction {
    Real(f64),
    Label(i64),
}

impl Prediction {
    pub fn as_f64(self) -> f64 {
        match self {
            Prediction::Real(r) => r,
            Prediction::Label(l) => l as f64,
        }
    }
}

/// Quality of a model on its own training data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    /// `"accuracy"` for classifiers, `"mse"` for regression.
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    pub label_name: String,
    pub scaler: Option<ScalerParams>,
    pub params: ModelParams,
}

/// Trains `algorithm` on `data`. When `scaler` is given, features are
/// standardized before fitting and the scaler is stored with the model.
pub fn train(
    algorithm: &Algorithm,
    data: &Dataset,
    scaler: Option<ScalerParams>,
) -> Result<TrainedModel, MlError> {
    let raw = data.features();
    let x = match &scaler {
        Some(s) => apply_scaler(s, &raw),
        None => raw,
    };
    let y = data.labels();
    let params = match *algorithm {
        Algorithm::LinearRegression { lambda } => {
            ModelParams::LinearRegression(train_linear_regression(&x, &y, lambda)?)
        }
        Algorithm::LogisticRegression { lr, epochs } => {
            ModelParams::LogisticRegression(train_logistic_regression(&x, &y, lr, epochs)?)
        }
        Algorithm::GaussianNB { var_smoothing } => {
            ModelParams::GaussianNB(train_gaussian_nb(&x, &y, var_smoothing)?)
        }
        Algorithm::Knn { k } => ModelParams::Knn(train_knn(&x, &y, k)?),
    };
    Ok(TrainedModel {
        feature_names: data.feature_names().to_vec(),
        label_name: data.label_name().to_string(),
        scaler,
        params,
    })
}

impl TrainedModel {
    pub fn kind(&self) -> AlgorithmKind {
        self.params.kind()
    }

    /// Applies the stored scaler, if any, then the decision function.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, MlError> {
        let expected = self.feature_names.len();
        if x.len() != expected {
            return Err(MlError::Dimension {
                expected,
                actual: x.len(),
            });
        }
        let scaled;
        let x = match &self.scaler {
            Some(s) => {
                scaled = s.transform_row(x);
                &scaled[..]
            }
            None => x,
        };
        Ok(match &self.params {
            ModelParams::LinearRegression(m) => Prediction::Real(m.decision(x)),
            ModelParams::LogisticRegression(m) => Prediction::Label(m.classify(x)),
            ModelParams::GaussianNB(m) => Prediction::Label(m.classify(x)),
            ModelParams::Knn(m) => Prediction::Label(m.classify(x)),
        })
    }

    /// Training accuracy for classifiers, mean squared error for regression.
    pub fn evaluate(&self, data: &Dataset) -> Result<Metric, MlError> {
        let n = data.n() as f64;
        let mut sum = 0.0;
        let regression = self.kind() == AlgorithmKind::LinearRegression;
        for row in &data.rows {
            let (x, y) = row.split_at(row.len() - 1);
            let p = self.predict(x)?.as_f64();
            sum += if regression {
                (p - y[0]).powi(2)
            } else {
                f64::from(u8::from(p == y[0]))
            };
        }
        Ok(Metric {
            name: if regression { "mse" } else { "accuracy" },
            value: sum / n,
        })
    }

    pub fn to_json(&self) -> String {
        let params = match &self.params {
            ModelParams::LinearRegression(m) => serde_json::to_value(m),
            ModelParams::LogisticRegression(m) => serde_json::to_value(m),
            ModelParams::GaussianNB(m) => serde_json::to_value(m),
            ModelParams::Knn(m) => serde_json::to_value(m),
        }
        .expect("model parameters are finite and serializable");
        let doc = Document {
            algorithm: self.kind().name().to_string(),
            feature_names: self.feature_names.clone(),
            label_name: self.label_name.clone(),
            scaler: self.scaler.clone(),
            params,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("document is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<TrainedModel, MlError> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| MlError::Format(format!("malformed model file: {e}")))?;
        let kind = AlgorithmKind::from_name(&doc.algorithm)
            .ok_or_else(|| MlError::Format(format!("unknown algorithm tag `{}`", doc.algorithm)))?;
        let bad = |e: serde_json::Error| {
            MlError::Format(format!("malformed {} parameters: {e}", kind.name()))
        };
        let params = match kind {
            AlgorithmKind::LinearRegression => {
                ModelParams::LinearRegression(serde_json::from_value(doc.params).map_err(bad)?)
            }
            AlgorithmKind::LogisticRegression => {
                ModelParams::LogisticRegression(serde_json::from_value(doc.params).map_err(bad)?)
            }
            AlgorithmKind::GaussianNB => {
                ModelParams::GaussianNB(serde_json::from_value(doc.params).map_err(bad)?)
            }
            AlgorithmKind::Knn => {
                ModelParams::Knn(serde_json::from_value(doc.params).map_err(bad)?)
            }
        };
        let d = doc.feature_names.len();
        let scaler_ok = doc
            .scaler
            .as_ref()
            .is_none_or(|s| s.mean.len() == d && s.scale.len() == d);
        if params.dimension() != d || !scaler_ok {
            return Err(MlError::Format(format!(
                "parameter dimensions do not match {d} feature names"
            )));
        }
        Ok(TrainedModel {
            feature_names: doc.feature_names,
            label_name: doc.label_name,
            scaler: doc.scaler,
            params,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    algorithm: String,
    feature_names: Vec<String>,
    label_name: String,
    scaler: Option<ScalerParams>,
    params: serde_json::Value,
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<(), MlError> {
    std::fs::write(path, model.to_json())
        .map_err(|e| MlError::Io(format!("cannot write model {}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<TrainedModel, MlError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MlError::Io(format!("cannot read model {}: {e}", path.display())))?;
    TrainedModel::from_json(&text)
}
