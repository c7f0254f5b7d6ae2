"""The three classifiers plus a kind-keyed dispatch used by evaluation and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from ..featurizer import Dataset
from .base import Prediction
from .naive_bayes import NBModel, predict_naive_bayes, train_naive_bayes
from .random_forest import (
    DecisionNode,
    ForestParams,
    Leaf,
    RFModel,
    Split,
    predict_random_forest,
    train_random_forest,
)
from .serialization import load_model, model_from_document, model_to_document, save_model
from .sgd import SGDModel, SgdParams, predict_sgd, train_sgd

CLASSIFIER_KINDS = ("naive_bayes", "random_forest", "sgd")

Model = Union[NBModel, RFModel, SGDModel]


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    forest: ForestParams = field(default_factory=ForestParams)
    sgd: SgdParams = field(default_factory=SgdParams)

    def __post_init__(self) -> None:
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")


def fit(spec: ClassifierSpec, train: Dataset, seed: int = 0) -> Model:
    if spec.kind == "naive_bayes":
        return train_naive_bayes(train)
    if spec.kind == "random_forest":
        return train_random_forest(train, spec.forest, seed)
    return train_sgd(train, spec.sgd, seed)


def predict(model: Model, x: Sequence[float]) -> Prediction:
    if isinstance(model, NBModel):
        return predict_naive_bayes(model, x)
    if isinstance(model, RFModel):
        return predict_random_forest(model, x)
    if isinstance(model, SGDModel):
        return predict_sgd(model, x)
    raise TypeError(f"unknown model type: {type(model).__name__}")


__all__ = [
    "CLASSIFIER_KINDS",
    "ClassifierSpec",
    "DecisionNode",
    "ForestParams",
    "Leaf",
    "Model",
    "NBModel",
    "Prediction",
    "RFModel",
    "SGDModel",
    "SgdParams",
    "Split",
    "fit",
    "load_model",
    "model_from_document",
    "model_to_document",
    "predict",
    "predict_naive_bayes",
    "predict_random_forest",
    "predict_sgd",
    "save_model",
    "train_naive_bayes",
    "train_random_forest",
    "train_sgd",
]
