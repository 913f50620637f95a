"""Data analytics for thing `DataAnalytics`.

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
from sklearn.neighbors import KNeighborsClassifier
from sklearn.preprocessing import StandardScaler

BLOCKS = {
    "detector": {
        "features": ["gap"],
        "label": "attack",
        "prediction": "attack",
        "dataset": "data/ddos.csv",
        "algorithm": "KNN",
        "classifier": True,
        "preprocess": True,
    },
}
DEFAULT_BLOCK = "detector"


class DaOrderError(RuntimeError):
    """Raised when a model is used before it has been trained."""


def _spec(block):
    try:
        return BLOCKS[block]
    except KeyError:
        raise ValueError("unknown data_analytics block `%s`" % block) from None


def _estimator(block):
    if block == "detector":
        return KNeighborsClassifier(n_neighbors=5)
    raise ValueError("unknown data_analytics block `%s`" % block)


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
