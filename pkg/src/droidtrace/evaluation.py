"""Confusion-count metrics, stratified splits, and classifier comparison.

Malicious is the positive class throughout. Cross-validation pools the
confusion counts of all folds before computing metrics, which stays stable
on small datasets where a single fold may contain no positives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classifiers import ClassifierSpec, ForestParams, SgdParams, fit, predict
from .featurizer import Dataset, Label

REPORT_COLUMNS = (
    "classifier",
    "tpr",
    "fpr",
    "precision",
    "recall",
    "f_measure",
    "ppv",
    "npv",
    "accuracy",
)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class Metrics:
    """Derived quantities; None marks an undefined 0/0 ratio."""

    tpr: float | None
    fpr: float | None
    precision: float | None
    recall: float | None
    f_measure: float | None
    ppv: float | None
    npv: float | None
    accuracy: float | None


def confusion(predicted: Sequence[Label], actual: Sequence[Label]) -> ConfusionCounts:
    if len(predicted) != len(actual):
        raise ValueError(f"length mismatch: {len(predicted)} predictions, {len(actual)} labels")
    if not predicted:
        raise ValueError("cannot build confusion counts from zero records")
    tp = tn = fp = fn = 0
    for pred, act in zip(predicted, actual):
        if pred is Label.MALICIOUS and act is Label.MALICIOUS:
            tp += 1
        elif pred is Label.BENIGN and act is Label.BENIGN:
            tn += 1
        elif pred is Label.MALICIOUS:
            fp += 1
        else:
            fn += 1
    return ConfusionCounts(tp, tn, fp, fn)


def _ratio(numerator: int, denominator: int) -> float | None:
    return None if denominator == 0 else numerator / denominator


def metrics(counts: ConfusionCounts) -> Metrics:
    """All derived rates from one confusion table; precision and PPV share one computation."""
    if counts.total == 0:
        raise ValueError("empty confusion counts")
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    fpr = _ratio(counts.fp, counts.fp + counts.tn)
    npv = _ratio(counts.tn, counts.tn + counts.fn)
    if precision is None or recall is None or precision + recall == 0:
        f_measure = None
    else:
        f_measure = 2 * precision * recall / (precision + recall)
    return Metrics(
        tpr=recall,
        fpr=fpr,
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        ppv=precision,
        npv=npv,
        accuracy=(counts.tp + counts.tn) / counts.total,
    )


def _class_indices(ds: Dataset) -> tuple[list[int], list[int]]:
    malicious = [i for i, row in enumerate(ds.rows) if row.label is Label.MALICIOUS]
    benign = [i for i, row in enumerate(ds.rows) if row.label is not Label.MALICIOUS]
    return malicious, benign


def _subset(ds: Dataset, indices: Sequence[int]) -> Dataset:
    return Dataset(ds.vocabulary, [ds.rows[i] for i in indices])


def holdout_split(ds: Dataset, train_fraction: float, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Stratified holdout: per-class shuffle, floor + largest-remainder sizing.

    The overall train size is round(fraction * n); each class takes the floor
    of its quota and leftover seats go to the classes with the largest
    fractional remainders (malicious first on ties). Row order within each
    partition follows the original dataset order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    malicious, benign = _class_indices(ds)
    if not malicious or not benign:
        raise ValueError("both classes must be present to split")
    rng = np.random.default_rng(seed)
    shuffled = [list(rng.permutation(idx)) for idx in (malicious, benign)]
    n = len(ds.rows)
    target = math.floor(train_fraction * n + 0.5)
    quotas = [train_fraction * len(idx) for idx in (malicious, benign)]
    takes = [math.floor(q) for q in quotas]
    remainders = sorted(
        range(2), key=lambda c: (-(quotas[c] - takes[c]), c)
    )
    for c in remainders[: target - sum(takes)]:
        takes[c] += 1
    train_idx = sorted(int(i) for c in range(2) for i in shuffled[c][: takes[c]])
    test_idx = sorted(int(i) for c in range(2) for i in shuffled[c][takes[c]:])
    if not train_idx or not test_idx:
        raise ValueError(f"train_fraction {train_fraction} leaves an empty partition")
    return _subset(ds, train_idx), _subset(ds, test_idx)


def stratified_kfold(ds: Dataset, k: int, seed: int = 0) -> list[list[int]]:
    """Partition row indices into k folds with per-class counts differing by <= 1.

    Each class's surplus rows go to consecutive folds starting where the
    previous class stopped, which keeps overall fold sizes balanced too.
    """
    malicious, benign = _class_indices(ds)
    min_class = min(len(malicious), len(benign))
    if not 2 <= k <= min_class:
        raise ValueError(f"k={k} out of range [2, {min_class}] (min class count)")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    start = 0
    for class_indices in (malicious, benign):
        perm = list(rng.permutation(class_indices))
        base, extra = divmod(len(perm), k)
        pos = 0
        for f in range(k):
            size = base + (1 if (f - start) % k < extra else 0)
            folds[f].extend(int(i) for i in perm[pos : pos + size])
            pos += size
        start = (start + extra) % k
    return [sorted(fold) for fold in folds]


@dataclass(frozen=True)
class CVResult:
    pooled_confusion: ConfusionCounts
    pooled: Metrics
    per_fold: tuple[Metrics, ...]


def cross_validate(ds: Dataset, spec: ClassifierSpec, k: int, seed: int = 0) -> CVResult:
    """k-fold CV pooling every fold's predictions into one confusion table."""
    folds = stratified_kfold(ds, k, seed)
    all_predicted: list[Label] = []
    all_actual: list[Label] = []
    per_fold: list[Metrics] = []
    for fold in folds:
        held_out = set(fold)
        train_ds = _subset(ds, [i for i in range(len(ds.rows)) if i not in held_out])
        model = fit(spec, train_ds, seed)
        predicted = [predict(model, ds.rows[i].features()).label for i in fold]
        actual = [ds.rows[i].label for i in fold]
        per_fold.append(metrics(confusion(predicted, actual)))
        all_predicted.extend(predicted)
        all_actual.extend(actual)
    pooled_counts = confusion(all_predicted, all_actual)
    return CVResult(pooled_counts, metrics(pooled_counts), tuple(per_fold))


@dataclass(frozen=True)
class ComparisonRow:
    classifier: str
    metrics: Metrics


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    folds: int
    seed: int


def compare_classifiers(
    ds: Dataset,
    k: int,
    seed: int = 0,
    forest: ForestParams | None = None,
    sgd: SgdParams | None = None,
) -> ComparisonReport:
    """One pooled-metrics row per classifier, all under identical folds."""
    forest = forest or ForestParams()
    sgd = sgd or SgdParams()
    rows = []
    for kind in ("naive_bayes", "random_forest", "sgd"):
        spec = ClassifierSpec(kind, forest=forest, sgd=sgd)
        result = cross_validate(ds, spec, k, seed)
        rows.append(ComparisonRow(kind, result.pooled))
    return ComparisonReport(tuple(rows), k, seed)


def format_metric(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.6f}"


def _metric_cells(m: Metrics) -> list[str]:
    return [
        format_metric(m.tpr),
        format_metric(m.fpr),
        format_metric(m.precision),
        format_metric(m.recall),
        format_metric(m.f_measure),
        format_metric(m.ppv),
        format_metric(m.npv),
        format_metric(m.accuracy),
    ]


def report_csv(report: ComparisonReport) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for row in report.rows:
        lines.append(",".join([row.classifier] + _metric_cells(row.metrics)))
    return "\n".join(lines) + "\n"


def report_text(report: ComparisonReport) -> str:
    table = [list(REPORT_COLUMNS)]
    for row in report.rows:
        table.append([row.classifier] + _metric_cells(row.metrics))
    widths = [max(len(line[col]) for line in table) for col in range(len(REPORT_COLUMNS))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in table]
    return "\n".join(lines) + "\n"
