"""Chi-square filtering: score each presence bit against the class label."""
from __future__ import annotations

from dataclasses import dataclass

from .featurizer import Dataset, FeatureVector, FeatureVocabulary, Label


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 counts for one feature: (present/absent) x (malicious/benign)."""

    a: int  # present & malicious
    b: int  # present & benign
    c: int  # absent & malicious
    d: int  # absent & benign

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("contingency counts must be non-negative")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class FeatureScore:
    feature_index: int
    chi2: float


def contingency(dataset: Dataset, feature_index: int) -> ContingencyTable:
    """Count the four (presence, class) cells for one bit column."""
    if not 0 <= feature_index < dataset.vocabulary.size:
        raise ValueError(
            f"feature index {feature_index} out of range "
            f"[0, {dataset.vocabulary.size})"
        )
    a = b = c = d = 0
    for row in dataset.rows:
        present = row.bits[feature_index] == 1
        malicious = row.label is Label.MALICIOUS
        if present and malicious:
            a += 1
        elif present:
            b += 1
        elif malicious:
            c += 1
        else:
            d += 1
    return ContingencyTable(a, b, c, d)


def chi_square(table: ContingencyTable) -> float:
    """Standard 2x2 chi-square: N*(ad-bc)^2 / ((a+b)(c+d)(a+c)(b+d)).

    A zero marginal means the feature (or a class) carries no signal; such
    tables score 0 rather than dividing by zero.
    """
    n = table.n
    if n == 0:
        raise ValueError("empty table")
    present = table.a + table.b
    absent = table.c + table.d
    malicious = table.a + table.c
    benign = table.b + table.d
    if 0 in (present, absent, malicious, benign):
        return 0.0
    # Integer numerator stays exact well past count magnitudes seen here.
    numerator = n * (table.a * table.d - table.b * table.c) ** 2
    return numerator / (present * absent * malicious * benign)


def rank_features(dataset: Dataset) -> list[FeatureScore]:
    """All bit features scored and sorted by descending chi2, then index."""
    scores = [
        FeatureScore(i, chi_square(contingency(dataset, i)))
        for i in range(dataset.vocabulary.size)
    ]
    scores.sort(key=lambda s: (-s.chi2, s.feature_index))
    return scores


def score_report_csv(dataset: Dataset) -> str:
    """Ranked score report: rank,feature_name,chi2,a,b,c,d for every bit feature."""
    lines = ["rank,feature_name,chi2,a,b,c,d"]
    for rank, score in enumerate(rank_features(dataset), start=1):
        table = contingency(dataset, score.feature_index)
        name = dataset.vocabulary.names[score.feature_index]
        lines.append(
            f"{rank},{name},{score.chi2:.6f},{table.a},{table.b},{table.c},{table.d}"
        )
    return "\n".join(lines) + "\n"


def select_top_k(dataset: Dataset, k: int) -> tuple[list[int], Dataset]:
    """Keep the k highest-scoring bit columns plus the detection-count column.

    Returns the selected indices in rank order and the reduced dataset whose
    bit columns keep their original relative order.
    """
    n_malicious, n_benign = dataset.class_counts()
    if n_malicious == 0 or n_benign == 0:
        raise ValueError("degenerate labels: both classes must be present")
    if not 1 <= k <= dataset.vocabulary.size:
        raise ValueError(f"k={k} out of range [1, {dataset.vocabulary.size}]")
    ranked = rank_features(dataset)
    selected = [score.feature_index for score in ranked[:k]]
    keep = sorted(selected)
    vocab = FeatureVocabulary(tuple(dataset.vocabulary.names[i] for i in keep))
    rows = [
        FeatureVector(
            row.app_id,
            tuple(row.bits[i] for i in keep),
            row.detection_count,
            row.label,
        )
        for row in dataset.rows
    ]
    return selected, Dataset(vocab, rows)
