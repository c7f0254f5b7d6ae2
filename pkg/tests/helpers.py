"""Small dataset factories shared across test modules."""
from __future__ import annotations

import numpy as np

from droidtrace.featurizer import Dataset, FeatureVector, FeatureVocabulary, Label


def make_dataset(bit_rows, labels, det_counts=None, names=None) -> Dataset:
    """Build a labeled dataset from bit tuples and 'M'/'B' label characters."""
    width = len(bit_rows[0]) if bit_rows else 0
    if names is None:
        names = tuple(f"sc_{i:02d}" for i in range(width))
    if det_counts is None:
        det_counts = [0] * len(bit_rows)
    rows = [
        FeatureVector(
            f"app{i:03d}",
            tuple(int(b) for b in bits),
            int(det),
            Label.MALICIOUS if lab == "M" else Label.BENIGN,
        )
        for i, (bits, lab, det) in enumerate(zip(bit_rows, labels, det_counts))
    ]
    return Dataset(FeatureVocabulary(tuple(names)), rows)


def random_dataset(rng: np.random.Generator, n=20, d=5, det_max=5) -> Dataset:
    """Random bits and detection counts with both classes guaranteed."""
    bit_rows = [tuple(int(v) for v in rng.integers(0, 2, size=d)) for _ in range(n)]
    labels = ["M" if rng.random() < 0.5 else "B" for _ in range(n)]
    labels[0], labels[1] = "M", "B"
    det_counts = [int(v) for v in rng.integers(0, det_max + 1, size=n)]
    return make_dataset(bit_rows, labels, det_counts)
