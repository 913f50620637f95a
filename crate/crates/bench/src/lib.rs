//! Shared fixtures for the criterion benchmarks.

use std::path::PathBuf;

use tml2::Model;

/// Directory holding the bundled `.tml2` models and their datasets.
pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/models")
}

pub fn model_path(name: &str) -> PathBuf {
    models_dir().join(name)
}

pub fn read_source(name: &str) -> (String, String) {
    let path = model_path(name);
    let source = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    (source, path.display().to_string())
}

pub fn load_model(name: &str) -> Model {
    let (source, path) = read_source(name);
    tml2::parse(&source, &path).unwrap_or_else(|d| panic!("{name}: {d:?}"))
}
