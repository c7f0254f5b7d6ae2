"""Shared classifier types."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..featurizer import Dataset, Label


@dataclass(frozen=True)
class Prediction:
    label: Label
    score: float


def training_arrays(train: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix and 0/1 labels, rejecting single-class datasets."""
    n_malicious, n_benign = train.class_counts()
    if n_malicious == 0 or n_benign == 0:
        raise ValueError("single-class dataset: both classes must be present")
    return train.feature_matrix(), train.labels01()


def check_dimension(expected: int, x) -> None:
    if len(x) != expected:
        raise ValueError(f"dimension mismatch: model expects {expected} features, got {len(x)}")
