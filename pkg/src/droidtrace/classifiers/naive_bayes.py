"""Gaussian Naive Bayes on binary presence features plus the detection count.

Each class keeps a table of per-feature mean and variance; prediction scores
classes by log prior plus summed log Gaussian densities. Log-domain arithmetic
avoids underflow on the ~19-feature products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..featurizer import Dataset, Label
from .base import Prediction, check_dimension, training_arrays

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class NBModel:
    prior_malicious: float
    prior_benign: float
    mean_malicious: tuple[float, ...]
    mean_benign: tuple[float, ...]
    var_malicious: tuple[float, ...]
    var_benign: tuple[float, ...]
    feature_names: tuple[str, ...]

    @property
    def feature_count(self) -> int:
        return len(self.feature_names)


def train_naive_bayes(train: Dataset) -> NBModel:
    """Class priors by frequency; per-class feature mean and population variance."""
    X, y = training_arrays(train)
    mal = X[y == 1]
    ben = X[y == 0]
    # Population variance (ddof=0), floored so constant columns stay usable.
    var_mal = np.maximum(np.var(mal, axis=0), VARIANCE_FLOOR)
    var_ben = np.maximum(np.var(ben, axis=0), VARIANCE_FLOOR)
    n = len(train.rows)
    return NBModel(
        prior_malicious=mal.shape[0] / n,
        prior_benign=ben.shape[0] / n,
        mean_malicious=tuple(float(v) for v in np.mean(mal, axis=0)),
        mean_benign=tuple(float(v) for v in np.mean(ben, axis=0)),
        var_malicious=tuple(float(v) for v in var_mal),
        var_benign=tuple(float(v) for v in var_ben),
        feature_names=train.feature_names(),
    )


def _class_log_score(
    prior: float, means: Sequence[float], variances: Sequence[float], x: Sequence[float]
) -> float:
    score = math.log(prior)
    for xi, mu, var in zip(x, means, variances):
        score += -0.5 * (math.log(2.0 * math.pi * var) + (xi - mu) ** 2 / var)
    return score


def log_scores(model: NBModel, x: Sequence[float]) -> tuple[float, float]:
    """(malicious, benign) log posterior scores, up to a shared constant."""
    check_dimension(model.feature_count, x)
    score_mal = _class_log_score(model.prior_malicious, model.mean_malicious, model.var_malicious, x)
    score_ben = _class_log_score(model.prior_benign, model.mean_benign, model.var_benign, x)
    return score_mal, score_ben


def predict_naive_bayes(model: NBModel, x: Sequence[float]) -> Prediction:
    """Argmax of the class log scores; exact ties resolve to malicious."""
    score_mal, score_ben = log_scores(model, x)
    gap = score_mal - score_ben
    label = Label.MALICIOUS if gap >= 0 else Label.BENIGN
    return Prediction(label, gap)
