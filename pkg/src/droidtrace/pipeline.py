"""End-to-end pipeline: traces -> dataset -> top-k features -> CV report + models."""
from __future__ import annotations

import contextlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .classifiers import ClassifierSpec, ForestParams, SgdParams, fit, save_model
from .dataset_io import export_dataset_csv
from .errors import DataError, PipelineError
from .evaluation import ComparisonReport, compare_classifiers, report_csv, report_text
from .feature_selector import score_report_csv, select_top_k
from .featurizer import (
    Dataset,
    assemble_dataset,
    build_vocabulary,
    load_labels,
    load_vocabulary,
    vectorize,
)
from .trace_parser import load_traces_dir

log = logging.getLogger(__name__)

MODEL_FILES = {
    "naive_bayes": "model_naive_bayes.json",
    "random_forest": "model_random_forest.json",
    "sgd": "model_sgd.json",
}


@dataclass
class PipelineConfig:
    traces_dir: Path
    labels_file: Path
    output_dir: Path
    vocabulary_file: Path | None = None
    k: int = 18
    seed: int = 0
    folds: int = 10
    forest: ForestParams = field(default_factory=ForestParams)
    sgd: SgdParams = field(default_factory=SgdParams)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        self.traces_dir = Path(self.traces_dir)
        self.labels_file = Path(self.labels_file)
        self.output_dir = Path(self.output_dir)
        if self.vocabulary_file is not None:
            self.vocabulary_file = Path(self.vocabulary_file)


@dataclass
class PipelineResult:
    dataset: Dataset
    reduced: Dataset
    selected_names: tuple[str, ...]
    report: ComparisonReport
    output_files: dict[str, Path]


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(f"stage {name}: {exc}") from exc


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run every stage and write all reports, datasets, and model files.

    Outputs are a pure function of (trace corpus, config, seed): reruns with
    identical inputs produce byte-identical files.
    """
    if not config.traces_dir.is_dir():
        raise DataError(f"traces directory not found: {config.traces_dir}")
    if not config.labels_file.is_file():
        raise DataError(f"labels file not found: {config.labels_file}")
    if config.vocabulary_file is not None and not config.vocabulary_file.is_file():
        raise DataError(f"vocabulary file not found: {config.vocabulary_file}")
    config.output_dir.mkdir(parents=True, exist_ok=True)
    out: dict[str, Path] = {}

    with _stage("parse-traces"):
        profiles = load_traces_dir(config.traces_dir)
        total_events = sum(p.total_events for p in profiles)
        total_bad = sum(p.unparseable_lines for p in profiles)
        log.info(
            "parse-traces: %d traces, %d events, %d unparseable lines",
            len(profiles), total_events, total_bad,
        )

    with _stage("load-labels"):
        labels, detection_counts = load_labels(config.labels_file)
        log.info("load-labels: %d labeled apps", len(labels))
        unused = sorted(set(labels) - {p.app_id for p in profiles})
        if unused:
            log.info("load-labels: %d labeled apps have no trace (ignored)", len(unused))

    with _stage("vocabulary"):
        if config.vocabulary_file is not None:
            vocab = load_vocabulary(config.vocabulary_file)
            log.info("vocabulary: loaded %d names from %s", vocab.size, config.vocabulary_file)
        else:
            vocab = build_vocabulary(profiles)
            log.info("vocabulary: built %d names from traces", vocab.size)

    with _stage("vectorize"):
        vectors = []
        for profile in profiles:
            bits, leftover = vectorize(profile.name_counts, vocab)
            if leftover:
                log.warning(
                    "vectorize: app %s has %d syscalls outside the vocabulary: %s",
                    profile.app_id, len(leftover), ",".join(sorted(leftover)),
                )
            vectors.append((profile.app_id, bits))
        log.info("vectorize: %d apps x %d bits", len(vectors), vocab.size)

    with _stage("assemble-dataset"):
        dataset = assemble_dataset(vectors, detection_counts, labels, vocab)
        out["dataset"] = config.output_dir / "dataset.csv"
        export_dataset_csv(dataset, out["dataset"])
        log.info(
            "assemble-dataset: %d rows x %d features", len(dataset.rows), vocab.size + 1
        )

    with _stage("select-features"):
        selected, reduced = select_top_k(dataset, config.k)
        out["features"] = config.output_dir / "features.csv"
        out["features"].write_text(score_report_csv(dataset), encoding="utf-8")
        out["reduced"] = config.output_dir / "dataset_reduced.csv"
        export_dataset_csv(reduced, out["reduced"])
        log.info(
            "select-features: kept top %d of %d features (+det_count)",
            config.k, vocab.size,
        )

    with _stage("cross-validate"):
        report = compare_classifiers(
            reduced, config.folds, config.seed, forest=config.forest, sgd=config.sgd
        )
        out["report_csv"] = config.output_dir / "report.csv"
        out["report_csv"].write_text(report_csv(report), encoding="utf-8")
        out["report_txt"] = config.output_dir / "report.txt"
        out["report_txt"].write_text(report_text(report), encoding="utf-8")
        for row in report.rows:
            log.info(
                "cross-validate: %s accuracy %s", row.classifier,
                "n/a" if row.metrics.accuracy is None else f"{row.metrics.accuracy:.4f}",
            )

    with _stage("train-models"):
        for kind, filename in MODEL_FILES.items():
            model = fit(
                ClassifierSpec(kind, forest=config.forest, sgd=config.sgd),
                reduced,
                config.seed,
            )
            out[f"model_{kind}"] = config.output_dir / filename
            save_model(model, out[f"model_{kind}"])
        log.info("train-models: wrote %d model files", len(MODEL_FILES))

    selected_names = tuple(dataset.vocabulary.names[i] for i in selected)
    return PipelineResult(dataset, reduced, selected_names, report, out)
