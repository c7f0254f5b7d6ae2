"""Versioned JSON model files that round-trip bit-exactly."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import DataError
from ..featurizer import Label
from .naive_bayes import NBModel
from .random_forest import DecisionNode, ForestParams, Leaf, RFModel, Split
from .sgd import SGDModel, SgdParams

FORMAT_VERSION = 1


def _node_to_doc(node: DecisionNode) -> dict[str, Any]:
    if isinstance(node, Leaf):
        return {"leaf": {"label": node.label.value, "counts": list(node.counts)}}
    return {
        "split": {
            "feature_index": node.feature_index,
            "threshold": node.threshold,
            "left": _node_to_doc(node.left),
            "right": _node_to_doc(node.right),
        }
    }


def _node_from_doc(doc: dict[str, Any]) -> DecisionNode:
    if "leaf" in doc:
        leaf = doc["leaf"]
        return Leaf(Label.parse(leaf["label"]), (int(leaf["counts"][0]), int(leaf["counts"][1])))
    split = doc["split"]
    return Split(
        int(split["feature_index"]),
        float(split["threshold"]),
        _node_from_doc(split["left"]),
        _node_from_doc(split["right"]),
    )


def model_to_document(model: NBModel | RFModel | SGDModel) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "feature_names": list(model.feature_names),
    }
    if isinstance(model, NBModel):
        doc["kind"] = "naive_bayes"
        doc["seed"] = None
        doc["params"] = {}
        doc["model"] = {
            "prior_malicious": model.prior_malicious,
            "prior_benign": model.prior_benign,
            "mean_malicious": list(model.mean_malicious),
            "mean_benign": list(model.mean_benign),
            "var_malicious": list(model.var_malicious),
            "var_benign": list(model.var_benign),
        }
    elif isinstance(model, RFModel):
        doc["kind"] = "random_forest"
        doc["seed"] = model.seed
        doc["params"] = {
            "tree_count": model.params.tree_count,
            "max_depth": model.params.max_depth,
            "min_samples_split": model.params.min_samples_split,
            "features_per_split": model.params.features_per_split,
        }
        doc["model"] = {"trees": [_node_to_doc(tree) for tree in model.trees]}
    elif isinstance(model, SGDModel):
        doc["kind"] = "sgd"
        doc["seed"] = model.seed
        doc["params"] = {
            "learning_rate": model.params.learning_rate,
            "regularization": model.params.regularization,
            "epochs": model.params.epochs,
        }
        doc["model"] = {"weights": list(model.weights), "bias": model.bias}
    else:
        raise TypeError(f"unknown model type: {type(model).__name__}")
    return doc


def model_from_document(doc: dict[str, Any]) -> NBModel | RFModel | SGDModel:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(f"unsupported model format_version {version!r}")
    kind = doc.get("kind")
    names = tuple(doc["feature_names"])
    body = doc["model"]
    if kind == "naive_bayes":
        return NBModel(
            prior_malicious=float(body["prior_malicious"]),
            prior_benign=float(body["prior_benign"]),
            mean_malicious=tuple(float(v) for v in body["mean_malicious"]),
            mean_benign=tuple(float(v) for v in body["mean_benign"]),
            var_malicious=tuple(float(v) for v in body["var_malicious"]),
            var_benign=tuple(float(v) for v in body["var_benign"]),
            feature_names=names,
        )
    if kind == "random_forest":
        params = doc["params"]
        return RFModel(
            trees=tuple(_node_from_doc(tree) for tree in body["trees"]),
            params=ForestParams(
                tree_count=int(params["tree_count"]),
                max_depth=None if params["max_depth"] is None else int(params["max_depth"]),
                min_samples_split=int(params["min_samples_split"]),
                features_per_split=(
                    None
                    if params["features_per_split"] is None
                    else int(params["features_per_split"])
                ),
            ),
            seed=int(doc["seed"]),
            feature_names=names,
        )
    if kind == "sgd":
        params = doc["params"]
        return SGDModel(
            weights=tuple(float(v) for v in body["weights"]),
            bias=float(body["bias"]),
            params=SgdParams(
                learning_rate=float(params["learning_rate"]),
                regularization=float(params["regularization"]),
                epochs=int(params["epochs"]),
            ),
            seed=int(doc["seed"]),
            feature_names=names,
        )
    raise DataError(f"unknown model kind {kind!r}")


def save_model(model: NBModel | RFModel | SGDModel, path: Path | str) -> None:
    path = Path(path)
    # json round-trips Python floats exactly (repr-based), so predictions
    # from a reloaded model match the in-memory model bit for bit.
    text = json.dumps(model_to_document(model), indent=2, sort_keys=True)
    try:
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write model file {path}: {exc}") from exc


def load_model(path: Path | str) -> NBModel | RFModel | SGDModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {path} is not valid JSON: {exc}") from exc
    try:
        return model_from_document(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"model file {path} is malformed: {exc}") from exc
