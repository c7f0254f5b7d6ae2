"""Random forest: bootstrap-sampled Gini decision trees with majority voting.

Per-tree RNG streams derive from (seed, tree index), so forests are
reproducible and trees could be grown concurrently without changing results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..featurizer import Dataset, Label
from .base import Prediction, check_dimension, training_arrays


@dataclass(frozen=True)
class ForestParams:
    tree_count: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: int | None = None  # None = ceil(sqrt(d))


@dataclass(frozen=True)
class Leaf:
    label: Label
    counts: tuple[int, int]  # (malicious, benign) training rows at the leaf


@dataclass(frozen=True)
class Split:
    feature_index: int
    threshold: float
    left: "DecisionNode"  # value <= threshold (bit = 0)
    right: "DecisionNode"  # value > threshold (bit = 1)


DecisionNode = Union[Leaf, Split]


@dataclass(frozen=True)
class RFModel:
    trees: tuple[DecisionNode, ...]
    params: ForestParams
    seed: int
    feature_names: tuple[str, ...]

    @property
    def feature_count(self) -> int:
        return len(self.feature_names)


def bootstrap_indices(seed: int, tree_index: int, n: int) -> np.ndarray:
    """The n-draws-with-replacement sample tree `tree_index` trains on."""
    rng = np.random.default_rng([seed, tree_index])
    return rng.integers(0, n, size=n)


def _gini(y: np.ndarray) -> float:
    p = np.count_nonzero(y) / y.size
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _leaf(y: np.ndarray) -> Leaf:
    malicious = int(np.count_nonzero(y))
    benign = int(y.size - malicious)
    label = Label.MALICIOUS if malicious >= benign else Label.BENIGN
    return Leaf(label, (malicious, benign))


def _best_split(
    X: np.ndarray, y: np.ndarray, m: int, rng: np.random.Generator
) -> tuple[int, float, np.ndarray] | None:
    """Lowest weighted child Gini over up to m non-constant sampled features.

    Features are visited in a random order; sampling continues past constant
    columns so a non-constant feature is never missed while one exists.
    """
    n = y.size
    best = None
    best_cost = math.inf
    evaluated = 0
    for f in rng.permutation(X.shape[1]):
        values = np.unique(X[:, f])
        if values.size < 2:
            continue
        evaluated += 1
        # Binary bits yield the single 0.5 threshold; integer detection
        # counts yield midpoints between neighbouring observed values.
        thresholds = (values[:-1] + values[1:]) / 2.0
        for threshold in thresholds:
            left_mask = X[:, f] <= threshold
            n_left = int(np.count_nonzero(left_mask))
            if n_left == 0 or n_left == n:
                continue
            cost = (
                n_left * _gini(y[left_mask]) + (n - n_left) * _gini(y[~left_mask])
            ) / n
            if cost < best_cost:
                best_cost = cost
                best = (int(f), float(threshold), left_mask)
        if evaluated >= m:
            break
    return best


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    depth: int,
    m: int,
    params: ForestParams,
    rng: np.random.Generator,
) -> DecisionNode:
    pure = np.all(y == y[0])
    at_depth_limit = params.max_depth is not None and depth >= params.max_depth
    if pure or at_depth_limit or y.size < params.min_samples_split:
        return _leaf(y)
    found = _best_split(X, y, m, rng)
    if found is None:
        return _leaf(y)
    feature, threshold, left_mask = found
    left = _grow(X[left_mask], y[left_mask], depth + 1, m, params, rng)
    right = _grow(X[~left_mask], y[~left_mask], depth + 1, m, params, rng)
    return Split(feature, threshold, left, right)


def train_random_forest(
    train: Dataset, params: ForestParams = ForestParams(), seed: int = 0
) -> RFModel:
    if params.tree_count < 1:
        raise ValueError(f"tree_count must be >= 1, got {params.tree_count}")
    if params.min_samples_split < 2:
        raise ValueError("min_samples_split must be >= 2")
    X, y = training_arrays(train)
    d = X.shape[1]
    m = params.features_per_split or math.ceil(math.sqrt(d))
    trees = []
    for t in range(params.tree_count):
        rng = np.random.default_rng([seed, t])
        sample = rng.integers(0, X.shape[0], size=X.shape[0])
        trees.append(_grow(X[sample], y[sample], 0, m, params, rng))
    return RFModel(tuple(trees), params, seed, train.feature_names())


def tree_predict(node: DecisionNode, x: Sequence[float]) -> Label:
    while isinstance(node, Split):
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node.label


def predict_random_forest(model: RFModel, x: Sequence[float]) -> Prediction:
    """Majority vote across trees; a split vote resolves to malicious."""
    check_dimension(model.feature_count, x)
    votes_malicious = sum(1 for tree in model.trees if tree_predict(tree, x) is Label.MALICIOUS)
    total = len(model.trees)
    label = Label.MALICIOUS if 2 * votes_malicious >= total else Label.BENIGN
    return Prediction(label, votes_malicious / total)
