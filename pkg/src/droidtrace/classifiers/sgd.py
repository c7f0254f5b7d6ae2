"""Linear classifier trained by stochastic gradient descent on hinge loss."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..featurizer import Dataset, Label
from .base import Prediction, check_dimension, training_arrays


@dataclass(frozen=True)
class SgdParams:
    learning_rate: float = 0.01  # eta0
    regularization: float = 1e-4  # L2 strength
    epochs: int = 100


@dataclass(frozen=True)
class SGDModel:
    weights: tuple[float, ...]
    bias: float
    params: SgdParams
    seed: int
    feature_names: tuple[str, ...]

    @property
    def feature_count(self) -> int:
        return len(self.feature_names)


def train_sgd(train: Dataset, params: SgdParams = SgdParams(), seed: int = 0) -> SGDModel:
    """Hinge loss with L2 penalty; labels map malicious -> +1, benign -> -1.

    The step size decays as eta0 / (1 + eta0 * lambda * t) over the global
    update count t; rows are reshuffled each epoch from the seed.
    """
    if params.epochs < 0:
        raise ValueError("epochs must be >= 0")
    if params.learning_rate <= 0:
        raise ValueError("learning_rate must be > 0")
    if params.regularization < 0:
        raise ValueError("regularization must be >= 0")
    X, y01 = training_arrays(train)
    y = np.where(y01 == 1, 1.0, -1.0)
    n, d = X.shape
    w = np.zeros(d)
    bias = 0.0
    eta0 = params.learning_rate
    lam = params.regularization
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(params.epochs):
        for i in rng.permutation(n):
            eta = eta0 / (1.0 + eta0 * lam * t)
            if y[i] * (float(np.dot(w, X[i])) + bias) < 1.0:
                w += eta * (y[i] * X[i] - lam * w)
                bias += eta * y[i]  # bias is not regularized
            else:
                w -= eta * lam * w
            t += 1
    return SGDModel(tuple(float(v) for v in w), bias, params, seed, train.feature_names())


def predict_sgd(model: SGDModel, x: Sequence[float]) -> Prediction:
    """Signed margin w.x + b; a margin of exactly zero resolves to malicious."""
    check_dimension(model.feature_count, x)
    margin = sum(wi * xi for wi, xi in zip(model.weights, x)) + model.bias
    label = Label.MALICIOUS if margin >= 0 else Label.BENIGN
    return Prediction(label, margin)
