"""Dataset persistence: the canonical CSV layout and ARFF export for Weka."""
from __future__ import annotations

import csv
import re
from pathlib import Path

from .errors import DataError
from .featurizer import Dataset, FeatureVector, FeatureVocabulary, Label

FIXED_COLUMNS = ("app_id", "label", "det_count")

_PLAIN_ARFF_NAME = re.compile(r"[A-Za-z0-9_]+")


def export_dataset_csv(ds: Dataset, path: Path | str) -> None:
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            # Explicit \n so exports are byte-identical across platforms.
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([*FIXED_COLUMNS, *ds.vocabulary.names])
            for row in ds.rows:
                label = row.label.value if row.label is not None else ""
                writer.writerow([row.app_id, label, row.detection_count, *row.bits])
    except OSError as exc:
        raise DataError(f"cannot write dataset file {path}: {exc}") from exc


def import_dataset_csv(path: Path | str) -> Dataset:
    """Read a dataset CSV back; export followed by import is the identity."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: missing header") from None
            if tuple(header[:3]) != FIXED_COLUMNS:
                raise DataError(
                    f"{path}: missing header (expected columns "
                    f"{','.join(FIXED_COLUMNS)},<feature names...>)"
                )
            try:
                vocab = FeatureVocabulary(tuple(header[3:]))
            except ValueError as exc:
                raise DataError(f"{path}: bad feature columns: {exc}") from None
            rows = []
            width = 3 + vocab.size
            for record in reader:
                line_no = reader.line_num
                if not record:
                    continue
                if len(record) != width:
                    raise DataError(
                        f"{path} line {line_no}: expected {width} columns, got {len(record)}"
                    )
                app_id = record[0]
                if not app_id:
                    raise DataError(f"{path} line {line_no}: empty app_id")
                try:
                    label = Label.parse(record[1])
                except DataError as exc:
                    raise DataError(f"{path} line {line_no}: {exc}") from None
                try:
                    det = int(record[2])
                except ValueError:
                    raise DataError(
                        f"{path} line {line_no}: bad det_count {record[2]!r}"
                    ) from None
                if det < 0:
                    raise DataError(f"{path} line {line_no}: negative det_count {det}")
                bits = []
                for value in record[3:]:
                    if value not in ("0", "1"):
                        raise DataError(
                            f"{path} line {line_no}: non-binary bit value {value!r}"
                        )
                    bits.append(int(value))
                rows.append(FeatureVector(app_id, tuple(bits), det, label))
    except OSError as exc:
        raise DataError(f"cannot read dataset file {path}: {exc}") from exc
    return Dataset(vocab, rows)


def _arff_attribute_name(name: str) -> str:
    if _PLAIN_ARFF_NAME.fullmatch(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def export_arff(ds: Dataset, path: Path | str) -> None:
    """Weka ARFF: one {0,1} attribute per bit, numeric det_count, class last."""
    path = Path(path)
    lines = ["@relation syscalls"]
    for name in ds.vocabulary.names:
        lines.append(f"@attribute {_arff_attribute_name(name)} {{0,1}}")
    lines.append("@attribute det_count numeric")
    lines.append("@attribute class {malicious,benign}")
    lines.append("@data")
    for row in ds.rows:
        label = row.label.value if row.label is not None else "?"
        lines.append(",".join([str(b) for b in row.bits] + [str(row.detection_count), label]))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write ARFF file {path}: {exc}") from exc
