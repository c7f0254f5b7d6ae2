"""Binary syscall-presence features: vocabulary, vectors, and the labeled dataset."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .trace_parser import TraceProfile


class Label(Enum):
    MALICIOUS = "malicious"
    BENIGN = "benign"

    @classmethod
    def parse(cls, text: str) -> "Label":
        for label in cls:
            if label.value == text:
                return label
        raise DataError(f"unknown label {text!r} (expected 'malicious' or 'benign')")


@dataclass(frozen=True)
class FeatureVocabulary:
    """Ordered, deduplicated master list of syscall names."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if any(not name for name in self.names):
            raise ValueError("vocabulary names must be non-empty")
        if len(set(self.names)) != len(self.names):
            raise ValueError("vocabulary names must be unique")

    @property
    def size(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class FeatureVector:
    app_id: str
    bits: tuple[int, ...]
    detection_count: int
    label: Label | None = None

    def features(self) -> tuple[float, ...]:
        """Numeric feature row: presence bits plus the detection count."""
        return tuple(float(b) for b in self.bits) + (float(self.detection_count),)


@dataclass
class Dataset:
    vocabulary: FeatureVocabulary
    rows: list[FeatureVector]

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row.bits) != self.vocabulary.size:
                raise ValueError(
                    f"row {row.app_id} has {len(row.bits)} bits, "
                    f"vocabulary has {self.vocabulary.size}"
                )

    def feature_names(self) -> tuple[str, ...]:
        return self.vocabulary.names + ("det_count",)

    def feature_matrix(self) -> np.ndarray:
        return np.array([row.features() for row in self.rows], dtype=float)

    def labels01(self) -> np.ndarray:
        """1 for malicious, 0 for benign."""
        return np.array(
            [1 if row.label is Label.MALICIOUS else 0 for row in self.rows], dtype=int
        )

    def class_counts(self) -> tuple[int, int]:
        """(malicious, benign) row counts."""
        malicious = sum(1 for row in self.rows if row.label is Label.MALICIOUS)
        return malicious, len(self.rows) - malicious


def build_vocabulary(profiles: Sequence[TraceProfile]) -> FeatureVocabulary:
    """Sorted union of all distinct syscall names across profiles."""
    if not profiles:
        raise ValueError("no profiles")
    names = sorted({name for profile in profiles for name in profile.name_counts})
    return FeatureVocabulary(tuple(names))


def vectorize(
    app_syscalls: Iterable[str], vocab: FeatureVocabulary
) -> tuple[tuple[int, ...], set[str]]:
    """Presence bits against the vocabulary plus the leftover names outside it."""
    present = set(app_syscalls)
    bits = tuple(1 if name in present else 0 for name in vocab.names)
    leftover = present.difference(vocab.names)
    return bits, leftover


def assemble_dataset(
    vectors: Sequence[tuple[str, Sequence[int]]],
    detection_counts: Mapping[str, int],
    labels: Mapping[str, Label],
    vocab: FeatureVocabulary,
) -> Dataset:
    """Combine per-app bit vectors with labels and detection counts.

    Row order follows the input order; a missing detection count defaults to 0.
    """
    rows = []
    for app_id, bits in vectors:
        if app_id not in labels:
            raise DataError(f"unlabeled app: {app_id}")
        if len(bits) != vocab.size:
            raise DataError(
                f"bit-length mismatch for {app_id}: got {len(bits)}, "
                f"vocabulary has {vocab.size}"
            )
        det = int(detection_counts.get(app_id, 0))
        if det < 0:
            raise DataError(f"negative detection count for {app_id}: {det}")
        rows.append(FeatureVector(app_id, tuple(int(b) for b in bits), det, labels[app_id]))
    return Dataset(vocab, rows)


def load_vocabulary(path: Path | str) -> FeatureVocabulary:
    """Read a vocabulary file: one syscall name per line, order preserved."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8-sig") as fh:
            names = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise DataError(f"cannot read vocabulary file {path}: {exc}") from exc
    if not names:
        raise DataError(f"vocabulary file {path} is empty")
    seen = set()
    for name in names:
        if name in seen:
            raise DataError(f"duplicate vocabulary entry {name!r} in {path}")
        seen.add(name)
    return FeatureVocabulary(tuple(names))


def load_labels(path: Path | str) -> tuple[dict[str, Label], dict[str, int]]:
    """Read the labels CSV (app_id,label,detection_count) into two maps."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise DataError(f"cannot read labels file {path}: {exc}") from exc
    if not rows:
        raise DataError(f"labels file {path}: missing header")
    header = [col.strip() for col in rows[0]]
    if header not in (["app_id", "label", "detection_count"], ["app_id", "label"]):
        raise DataError(
            f"labels file {path}: expected header app_id,label[,detection_count], "
            f"got {','.join(header)}"
        )
    labels: dict[str, Label] = {}
    detection_counts: dict[str, int] = {}
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) not in (2, 3):
            raise DataError(f"labels file {path} line {line_no}: expected 2 or 3 columns")
        app_id = row[0].strip()
        if not app_id:
            raise DataError(f"labels file {path} line {line_no}: empty app_id")
        if app_id in labels:
            raise DataError(f"labels file {path} line {line_no}: duplicate app_id {app_id}")
        try:
            labels[app_id] = Label.parse(row[1].strip())
        except DataError as exc:
            raise DataError(f"labels file {path} line {line_no}: {exc}") from None
        det_text = row[2].strip() if len(row) == 3 else ""
        if det_text:
            try:
                det = int(det_text)
            except ValueError:
                raise DataError(
                    f"labels file {path} line {line_no}: bad detection_count {det_text!r}"
                ) from None
            if det < 0:
                raise DataError(
                    f"labels file {path} line {line_no}: negative detection_count {det}"
                )
            detection_counts[app_id] = det
    return labels, detection_counts
