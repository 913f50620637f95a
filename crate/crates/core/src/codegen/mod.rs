//! Python generation for the data-analytics part of a configuration.
//!
//! Each thing in the configuration that declares DA blocks becomes one
//! standalone script built on numpy and scikit-learn. A `manifest.json`
//! describes every block for external runners, and `requirements.txt` pins
//! the libraries the scripts import.

mod python;

use std::fmt;
use std::path::{Component, Path};

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Algorithm, Model, Thing};
use crate::diagnostic::Diagnostic;

pub use python::snake_case;

pub const MANIFEST: &str = "manifest.json";
pub const REQUIREMENTS: &str = "requirements.txt";

/// One file to write, relative to the output root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedArtifact {
    /// Relative, `/`-separated.
    pub path: String,
    pub content: Vec<u8>,
}

impl GeneratedArtifact {
    fn text(path: impl Into<String>, content: String) -> Self {
        GeneratedArtifact {
            path: path.into(),
            content: content.into_bytes(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CodegenError {
    #[error("model has {} validation error(s)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error("no configuration named `{0}`")]
    UnknownConfiguration(String),
    #[error("configuration `{0}` has no thing with a data_analytics block")]
    NoDataAnalytics(String),
    #[error("refusing to write `{0}` outside the output directory")]
    UnsafePath(String),
    #[error("{0}")]
    Io(String),
}

impl CodegenError {
    pub fn code(&self) -> Option<&'static str> {
        match self {
            CodegenError::NoDataAnalytics(_) => Some("E-NODA"),
            CodegenError::Io(_) | CodegenError::UnsafePath(_) => Some("E-IO"),
            CodegenError::Invalid(_) | CodegenError::UnknownConfiguration(_) => None,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    things: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    name: &'a str,
    script: String,
    algorithm: &'static str,
    features: Vec<&'a str>,
    label: &'a str,
    prediction: &'a str,
    hyperparameters: serde_json::Map<String, serde_json::Value>,
}

/// Resolved hyperparameters, defaults included.
fn hyperparameters(alg: &Algorithm) -> serde_json::Map<String, serde_json::Value> {
    use serde_json::json;
    let pairs = match *alg {
        Algorithm::LinearRegression { lambda } => vec![("lambda", json!(lambda))],
        Algorithm::LogisticRegression { lr, epochs } => {
            vec![("lr", json!(lr)), ("epochs", json!(epochs))]
        }
        Algorithm::GaussianNB { var_smoothing } => vec![("var_smoothing", json!(var_smoothing))],
        Algorithm::Knn { k } => vec![("k", json!(k))],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Things of `config` carrying DA blocks, in order of first instantiation.
fn da_things<'m>(model: &'m Model, config: &str) -> Result<Vec<&'m Thing>, CodegenError> {
    let cfg = model
        .configuration(config)
        .ok_or_else(|| CodegenError::UnknownConfiguration(config.to_string()))?;
    let mut things: Vec<&Thing> = Vec::new();
    for inst in &cfg.instances {
        if let Some(t) = model.thing(inst.thing.as_str()) {
            if !t.analytics.is_empty() && !things.iter().any(|seen| seen.name == t.name) {
                things.push(t);
            }
        }
    }
    if things.is_empty() {
        return Err(CodegenError::NoDataAnalytics(config.to_string()));
    }
    Ok(things)
}

/// Generates scripts, manifest and requirements for `config`.
pub fn generate(model: &Model, config: &str) -> Result<Vec<GeneratedArtifact>, CodegenError> {
    let report = crate::validate(model);
    if !report.ok {
        return Err(CodegenError::Invalid(report.errors().cloned().collect()));
    }
    let things = da_things(model, config)?;
    let mut artifacts = Vec::with_capacity(things.len() + 2);
    let mut entries = Vec::new();
    for thing in &things {
        let script = format!("{}_da.py", snake_case(thing.name.as_str()));
        artifacts.push(GeneratedArtifact::text(&script, python::script(thing)));
        for block in &thing.analytics {
            let alg = block.algorithm.resolve().expect("validated algorithm");
            entries.push(ManifestEntry {
                name: thing.name.as_str(),
                script: script.clone(),
                algorithm: alg.kind().name(),
                features: block.features.iter().map(|f| f.as_str()).collect(),
                label: block.label.as_str(),
                prediction: block.prediction.as_str(),
                hyperparameters: hyperparameters(&alg),
            });
        }
    }
    let mut manifest = serde_json::to_string_pretty(&Manifest { things: entries })
        .expect("manifest is serializable");
    manifest.push('\n');
    artifacts.push(GeneratedArtifact::text(MANIFEST, manifest));
    artifacts.push(GeneratedArtifact::text(
        REQUIREMENTS,
        "numpy\nscikit-learn>=1.2\n".to_string(),
    ));
    Ok(artifacts)
}

fn is_safe_relative(path: &str) -> bool {
    let p = Path::new(path);
    !path.is_empty() && p.components().all(|c| matches!(c, Component::Normal(_)))
}

/// Writes every artifact under `out_dir`, creating directories and
/// overwriting existing files. Returns the number of files written.
pub fn write_artifacts(
    artifacts: &[GeneratedArtifact],
    out_dir: &Path,
) -> Result<usize, CodegenError> {
    let io = |what: &dyn fmt::Display, e: std::io::Error| CodegenError::Io(format!("{what}: {e}"));
    std::fs::create_dir_all(out_dir).map_err(|e| io(&out_dir.display(), e))?;
    for a in artifacts {
        if !is_safe_relative(&a.path) {
            return Err(CodegenError::UnsafePath(a.path.clone()));
        }
        let target = out_dir.join(&a.path);
        if let Some(parent) = target.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io(&parent.display(), e))?;
        }
        std::fs::write(&target, &a.content).map_err(|e| io(&target.display(), e))?;
    }
    Ok(artifacts.len())
}
