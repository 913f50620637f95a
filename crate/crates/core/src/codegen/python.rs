use std::fmt::Write;

use crate::ast::{Algorithm, Thing};
use crate::parser::real_to_string;
use crate::validate::preprocessed_blocks;

/// `DataAnalytics` → `data_analytics`, `HTTPServer` → `http_server`.
pub fn snake_case(name: &str) -> String {
    let chars: Vec<char> = name.chars().collect();
    let mut out = String::with_capacity(name.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if c.is_ascii_uppercase() {
            let prev = i.checked_sub(1).map(|j| chars[j]);
            let next = chars.get(i + 1);
            let boundary = match prev {
                None | Some('_') => false,
                Some(p) if p.is_ascii_lowercase() || p.is_ascii_digit() => true,
                Some(p) => p.is_ascii_uppercase() && next.is_some_and(|n| n.is_ascii_lowercase()),
            };
            if boundary {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

/// A Python string literal. JSON string escapes are valid Python.
fn py_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn py_list(items: &[&str]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| py_str(s)).collect();
    format!("[{}]", quoted.join(", "))
}

fn py_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

/// Estimator constructor and the library class it needs.
fn estimator(alg: &Algorithm) -> (String, &'static str, &'static str) {
    match *alg {
        Algorithm::LinearRegression { lambda: 0.0 } => (
            "LinearRegression()".into(),
            "sklearn.linear_model",
            "LinearRegression",
        ),
        Algorithm::LinearRegression { lambda } => (
            format!("Ridge(alpha={})", real_to_string(lambda)),
            "sklearn.linear_model",
            "Ridge",
        ),
        Algorithm::LogisticRegression { epochs, .. } => (
            format!("LogisticRegression(penalty=None, max_iter={epochs})"),
            "sklearn.linear_model",
            "LogisticRegression",
        ),
        Algorithm::GaussianNB { var_smoothing } => (
            format!(
                "GaussianNB(var_smoothing={})",
                real_to_string(var_smoothing)
            ),
            "sklearn.naive_bayes",
            "GaussianNB",
        ),
        Algorithm::Knn { k } => (
            format!("KNeighborsClassifier(n_neighbors={k})"),
            "sklearn.neighbors",
            "KNeighborsClassifier",
        ),
    }
}

/// Standalone script for every DA block of `thing`.
pub fn script(thing: &Thing) -> String {
    let preprocessed = preprocessed_blocks(thing);
    let blocks: Vec<_> = thing
        .analytics
        .iter()
        .map(|b| (b, b.algorithm.resolve().expect("validated algorithm")))
        .collect();

    let mut imports: Vec<(&str, &str)> = blocks
        .iter()
        .map(|(_, a)| {
            let (_, module, class) = estimator(a);
            (module, class)
        })
        .collect();
    if !preprocessed.is_empty() {
        imports.push(("sklearn.preprocessing", "StandardScaler"));
    }
    imports.sort_unstable();
    imports.dedup();

    let mut s = String::new();
    let _ = writeln!(s, "\"\"\"Data analytics for thing `{}`.", thing.name);
    s.push_str(
        r#"
Generated by tml2; edits are overwritten on the next generation.

Entry points:
    preprocess(dataset_path, block=DEFAULT_BLOCK) -> fitted scaler or None
    train(dataset_path, model_out, block=DEFAULT_BLOCK) -> fitted estimator
    predict(model_in, feature_values, block=DEFAULT_BLOCK) -> prediction
"""

import argparse
import csv
import pickle
import sys

import numpy as np
"#,
    );
    for (module, class) in &imports {
        let _ = writeln!(s, "from {module} import {class}");
    }

    s.push_str("\nBLOCKS = {\n");
    for (b, alg) in &blocks {
        let features: Vec<&str> = b.features.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(s, "    {}: {{", py_str(b.name.as_str()));
        let _ = writeln!(s, "        \"features\": {},", py_list(&features));
        let _ = writeln!(s, "        \"label\": {},", py_str(b.label.as_str()));
        let _ = writeln!(
            s,
            "        \"prediction\": {},",
            py_str(b.prediction.as_str())
        );
        let _ = writeln!(s, "        \"dataset\": {},", py_str(&b.dataset));
        let _ = writeln!(s, "        \"algorithm\": {},", py_str(alg.kind().name()));
        let _ = writeln!(
            s,
            "        \"classifier\": {},",
            py_bool(alg.kind().is_classifier())
        );
        let _ = writeln!(
            s,
            "        \"preprocess\": {},",
            py_bool(preprocessed.contains(b.name.as_str()))
        );
        s.push_str("    },\n");
    }
    s.push_str("}\n");
    let _ = writeln!(s, "DEFAULT_BLOCK = {}", py_str(blocks[0].0.name.as_str()));

    s.push_str(
        r#"

class DaOrderError(RuntimeError):
    """Raised when a model is used before it has been trained."""


def _spec(block):
    try:
        return BLOCKS[block]
    except KeyError:
        raise ValueError("unknown data_analytics block `%s`" % block) from None


def _estimator(block):
"#,
    );
    for (b, alg) in &blocks {
        let (ctor, _, _) = estimator(alg);
        let _ = writeln!(s, "    if block == {}:", py_str(b.name.as_str()));
        if let Algorithm::LogisticRegression { lr, .. } = alg {
            let _ = writeln!(
                s,
                "        # the library chooses its own step size; lr={} is not used",
                real_to_string(*lr)
            );
        }
        let _ = writeln!(s, "        return {ctor}");
    }
    s.push_str(
        r#"    raise ValueError("unknown data_analytics block `%s`" % block)


def _load(dataset_path, block):
    spec = _spec(block)
    wanted = spec["features"] + [spec["label"]]
    with open(dataset_path, newline="") as f:
        reader = csv.reader(f)
        header = [h.strip() for h in next(reader)]
        if len(set(header)) != len(header):
            raise ValueError("E-SCHEMA: duplicate header column in %s" % dataset_path)
        missing = [name for name in wanted if name not in header]
        if missing:
            raise ValueError("E-SCHEMA: missing column(s) %s in %s" % (missing, dataset_path))
        index = [header.index(name) for name in wanted]
        rows = []
        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            rows.append([float(row[i]) for i in index])
    if not rows:
        raise ValueError("E-SCHEMA: %s has no data rows" % dataset_path)
    data = np.asarray(rows, dtype=float)
    return data[:, :-1], data[:, -1]


def preprocess(dataset_path, block=DEFAULT_BLOCK):
    """Fits the z-score scaler for `block`, or returns None when the model
    does not preprocess this block."""
    if not _spec(block)["preprocess"]:
        return None
    features, _ = _load(dataset_path, block)
    return StandardScaler().fit(features)


def train(dataset_path, model_out, block=DEFAULT_BLOCK):
    spec = _spec(block)
    features, labels = _load(dataset_path, block)
    scaler = preprocess(dataset_path, block)
    if scaler is not None:
        features = scaler.transform(features)
    if spec["classifier"]:
        labels = labels.astype(int)
    estimator = _estimator(block).fit(features, labels)
    with open(model_out, "wb") as f:
        pickle.dump({"block": block, "scaler": scaler, "estimator": estimator}, f)
    return estimator


def predict(model_in, feature_values, block=DEFAULT_BLOCK):
    spec = _spec(block)
    try:
        with open(model_in, "rb") as f:
            saved = pickle.load(f)
    except FileNotFoundError:
        raise DaOrderError("E-DA-ORDER: predict on `%s` before train" % block) from None
    if saved.get("block") != block:
        raise DaOrderError("E-DA-ORDER: %s holds block `%s`, not `%s`" % (model_in, saved.get("block"), block))
    x = np.asarray(feature_values, dtype=float).reshape(1, -1)
    if x.shape[1] != len(spec["features"]):
        raise ValueError("E-DIM: expected %d features, got %d" % (len(spec["features"]), x.shape[1]))
    if saved["scaler"] is not None:
        x = saved["scaler"].transform(x)
    value = saved["estimator"].predict(x)[0]
    return int(value) if spec["classifier"] else float(value)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--block", default=DEFAULT_BLOCK, choices=sorted(BLOCKS))
    commands = parser.add_subparsers(dest="command", required=True)
    p = commands.add_parser("preprocess")
    p.add_argument("dataset")
    p = commands.add_parser("train")
    p.add_argument("dataset")
    p.add_argument("model_out")
    p = commands.add_parser("predict")
    p.add_argument("model_in")
    p.add_argument("features", nargs="+", type=float)
    args = parser.parse_args(argv)
    if args.command == "preprocess":
        scaler = preprocess(args.dataset, args.block)
        if scaler is None:
            print("no preprocessing")
        else:
            print("mean", list(scaler.mean_), "scale", list(scaler.scale_))
    elif args.command == "train":
        train(args.dataset, args.model_out, args.block)
    else:
        print(predict(args.model_in, args.features, args.block))
    return 0


if __name__ == "__main__":
    sys.exit(main())
"#,
    );
    s
}
