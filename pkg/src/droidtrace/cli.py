"""Command-line interface.

Setting precedence, lowest to highest: built-in defaults, config file
(flat key=value lines), DROIDTRACE_* environment variables, command flags.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from .classifiers import ClassifierSpec, ForestParams, SgdParams, fit, load_model, predict, save_model
from .dataset_io import export_arff, export_dataset_csv, import_dataset_csv
from .errors import DataError, PipelineError
from .evaluation import (
    ComparisonReport,
    ComparisonRow,
    compare_classifiers,
    confusion,
    cross_validate,
    holdout_split,
    metrics,
    report_csv,
    report_text,
)
from .feature_selector import score_report_csv, select_top_k
from .featurizer import assemble_dataset, build_vocabulary, load_labels, load_vocabulary, vectorize
from .pipeline import PipelineConfig, run_pipeline
from .trace_parser import load_traces_dir, parse_trace_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

ENV_PREFIX = "DROIDTRACE_"

KIND_ALIASES = {"nb": "naive_bayes", "rf": "random_forest", "sgd": "sgd"}

DEFAULTS: dict[str, Any] = {
    "traces_dir": None,
    "labels_file": None,
    "vocabulary_file": None,
    "output_dir": None,
    "k": 18,
    "seed": 0,
    "folds": 10,
    "classifier": "all",
    "tree_count": 100,
    "max_depth": None,
    "min_samples_split": 2,
    "features_per_split": None,
    "learning_rate": 0.01,
    "regularization": 1e-4,
    "epochs": 100,
}

_INT_KEYS = {"k", "seed", "folds", "tree_count", "min_samples_split", "epochs"}
_OPTIONAL_INT_KEYS = {"max_depth", "features_per_split"}
_FLOAT_KEYS = {"learning_rate", "regularization"}
_PATH_KEYS = {"traces_dir", "labels_file", "vocabulary_file", "output_dir"}


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1.
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_setting(key: str, text: str) -> Any:
    try:
        if key in _INT_KEYS:
            return int(text)
        if key in _OPTIONAL_INT_KEYS:
            return None if text.lower() in ("", "none") else int(text)
        if key in _FLOAT_KEYS:
            return float(text)
    except ValueError:
        raise UsageError(f"bad value for setting {key}: {text!r}") from None
    if key in _PATH_KEYS:
        return Path(text) if text else None
    return text


def load_config_file(path: Path) -> dict[str, Any]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read config file {path}: {exc}") from exc
    settings: dict[str, Any] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"config file {path} line {line_no}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise DataError(f"config file {path} line {line_no}: unknown setting {key!r}")
        settings[key] = _parse_setting(key, value.strip())
    return settings


def resolve_settings(args: argparse.Namespace) -> dict[str, Any]:
    settings = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        settings.update(load_config_file(Path(config_path)))
    for key in DEFAULTS:
        env_value = os.environ.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            settings[key] = _parse_setting(key, env_value)
    flag_map = {
        "seed": "seed",
        "k": "k",
        "folds": "folds",
        "classifier": "classifier",
        "traces": "traces_dir",
        "labels": "labels_file",
        "vocabulary": "vocabulary_file",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = Path(value) if key in _PATH_KEYS else value
    if settings["classifier"] not in ("all", *KIND_ALIASES):
        raise UsageError(
            f"classifier must be one of nb, rf, sgd, all (got {settings['classifier']!r})"
        )
    return settings


def _forest_params(settings: dict[str, Any]) -> ForestParams:
    return ForestParams(
        tree_count=settings["tree_count"],
        max_depth=settings["max_depth"],
        min_samples_split=settings["min_samples_split"],
        features_per_split=settings["features_per_split"],
    )


def _sgd_params(settings: dict[str, Any]) -> SgdParams:
    return SgdParams(
        learning_rate=settings["learning_rate"],
        regularization=settings["regularization"],
        epochs=settings["epochs"],
    )


def _require(settings: dict[str, Any], key: str, flag: str) -> Any:
    value = settings[key]
    if value is None:
        raise UsageError(f"{key} not set (use {flag} or put {key}= in the config file)")
    return value


def _selected_kinds(settings: dict[str, Any]) -> list[str]:
    choice = settings["classifier"]
    if choice == "all":
        return list(KIND_ALIASES.values())
    return [KIND_ALIASES[choice]]


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_parse(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    profiles = [parse_trace_file(path) for path in args.trace_files]
    for profile in profiles:
        print(
            f"{profile.app_id}: events={profile.total_events} "
            f"distinct={profile.distinct_count} unparseable={profile.unparseable_lines}"
        )
    if args.json:
        doc = {
            p.app_id: {
                "name_counts": dict(sorted(p.name_counts.items())),
                "total_events": p.total_events,
                "unparseable_lines": p.unparseable_lines,
            }
            for p in profiles
        }
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _build_dataset(settings: dict[str, Any]):
    traces_dir = _require(settings, "traces_dir", "--traces")
    labels_file = _require(settings, "labels_file", "--labels")
    profiles = load_traces_dir(traces_dir)
    labels, detection_counts = load_labels(labels_file)
    if settings["vocabulary_file"] is not None:
        vocab = load_vocabulary(settings["vocabulary_file"])
    else:
        vocab = build_vocabulary(profiles)
    vectors = [(p.app_id, vectorize(p.name_counts, vocab)[0]) for p in profiles]
    return assemble_dataset(vectors, detection_counts, labels, vocab)


def cmd_build_dataset(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    dataset = _build_dataset(settings)
    export_dataset_csv(dataset, args.out)
    print(f"wrote {args.out}: {len(dataset.rows)} rows, {dataset.vocabulary.size} bit features")
    return EXIT_OK


def cmd_select_features(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    dataset = import_dataset_csv(args.dataset)
    _write_or_print(score_report_csv(dataset), args.report)
    if args.reduced:
        _, reduced = select_top_k(dataset, settings["k"])
        export_dataset_csv(reduced, args.reduced)
    return EXIT_OK


def cmd_train(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    kinds = _selected_kinds(settings)
    if len(kinds) != 1:
        raise UsageError("train needs a single classifier (--classifier nb|rf|sgd)")
    dataset = import_dataset_csv(args.dataset)
    spec = ClassifierSpec(kinds[0], forest=_forest_params(settings), sgd=_sgd_params(settings))
    model = fit(spec, dataset, settings["seed"])
    save_model(model, args.model)
    print(f"wrote {args.model}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    dataset = import_dataset_csv(args.dataset)
    forest = _forest_params(settings)
    sgd = _sgd_params(settings)
    kinds = _selected_kinds(settings)
    if args.holdout is not None:
        train_ds, test_ds = holdout_split(dataset, args.holdout, settings["seed"])
        rows = []
        for kind in kinds:
            spec = ClassifierSpec(kind, forest=forest, sgd=sgd)
            model = fit(spec, train_ds, settings["seed"])
            predicted = [predict(model, row.features()).label for row in test_ds.rows]
            actual = [row.label for row in test_ds.rows]
            rows.append(ComparisonRow(kind, metrics(confusion(predicted, actual))))
        report = ComparisonReport(tuple(rows), 0, settings["seed"])
    elif len(kinds) == 3:
        report = compare_classifiers(
            dataset, settings["folds"], settings["seed"], forest=forest, sgd=sgd
        )
    else:
        spec = ClassifierSpec(kinds[0], forest=forest, sgd=sgd)
        result = cross_validate(dataset, spec, settings["folds"], settings["seed"])
        report = ComparisonReport(
            (ComparisonRow(kinds[0], result.pooled),), settings["folds"], settings["seed"]
        )
    sys.stdout.write(report_text(report))
    if args.report:
        Path(args.report).write_text(report_csv(report), encoding="utf-8")
    return EXIT_OK


def cmd_predict(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    model = load_model(args.model)
    dataset = import_dataset_csv(args.dataset)
    if dataset.feature_names() != model.feature_names:
        raise DataError(
            f"dataset features {list(dataset.feature_names())} do not match "
            f"model features {list(model.feature_names)}"
        )
    lines = ["app_id,predicted,score"]
    for row in dataset.rows:
        pred = predict(model, row.features())
        lines.append(f"{row.app_id},{pred.label.value},{pred.score:.6f}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_export_arff(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    dataset = import_dataset_csv(args.dataset)
    export_arff(dataset, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace, settings: dict[str, Any]) -> int:
    if args.out is not None:
        settings["output_dir"] = Path(args.out)
    config = PipelineConfig(
        traces_dir=_require(settings, "traces_dir", "--traces"),
        labels_file=_require(settings, "labels_file", "--labels"),
        output_dir=_require(settings, "output_dir", "--out"),
        vocabulary_file=settings["vocabulary_file"],
        k=settings["k"],
        seed=settings["seed"],
        folds=settings["folds"],
        forest=_forest_params(settings),
        sgd=_sgd_params(settings),
    )
    result = run_pipeline(config)
    sys.stdout.write(report_text(result.report))
    return EXIT_OK


def build_parser() -> CliParser:
    # SUPPRESS keeps absent options out of the namespace entirely; without it
    # a subparser's defaults would clobber global flags given before the
    # subcommand (subparsers merge a freshly-parsed namespace into the parent).
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="config file with key=value settings")
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--k", type=int, help="number of top features to keep (default 18)")
    common.add_argument("--folds", type=int, help="cross-validation folds (default 10)")
    common.add_argument(
        "--classifier", choices=["nb", "rf", "sgd", "all"], help="classifier selection"
    )
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = CliParser(
        prog="droidtrace",
        description="Syscall-trace malware detection pipeline",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("parse", parents=[common], help="parse strace files into profiles")
    p.add_argument("trace_files", nargs="+", help="trace files (traces/<app_id>.strace)")
    p.add_argument("--json", help="write profiles to this JSON file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("build-dataset", parents=[common], help="traces + labels -> dataset CSV")
    p.add_argument("--traces", help="directory of *.strace files")
    p.add_argument("--labels", help="labels CSV (app_id,label,detection_count)")
    p.add_argument("--vocabulary", help="vocabulary file (one syscall per line)")
    p.add_argument("--out", required=True, help="dataset CSV to write")
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("select-features", parents=[common], help="rank features by chi-square")
    p.add_argument("--dataset", required=True, help="dataset CSV")
    p.add_argument("--report", help="write the ranked report CSV here (default stdout)")
    p.add_argument("--reduced", help="write the top-k reduced dataset CSV here")
    p.set_defaults(func=cmd_select_features)

    p = sub.add_parser("train", parents=[common], help="train one classifier")
    p.add_argument("--dataset", required=True, help="dataset CSV")
    p.add_argument("--model", required=True, help="model JSON to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="cross-validate or holdout-evaluate")
    p.add_argument("--dataset", required=True, help="dataset CSV")
    p.add_argument("--holdout", type=float, help="train fraction for a holdout split instead of CV")
    p.add_argument("--report", help="also write the report CSV here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", parents=[common], help="apply a saved model to a dataset")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("--dataset", required=True, help="dataset CSV")
    p.add_argument("--out", help="write predictions CSV here (default stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("export-arff", parents=[common], help="export a dataset CSV as ARFF")
    p.add_argument("--dataset", required=True, help="dataset CSV")
    p.add_argument("--out", required=True, help="ARFF file to write")
    p.set_defaults(func=cmd_export_arff)

    p = sub.add_parser("run", parents=[common], help="full pipeline: traces -> report + models")
    p.add_argument("--traces", help="directory of *.strace files")
    p.add_argument("--labels", help="labels CSV")
    p.add_argument("--vocabulary", help="vocabulary file")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = resolve_settings(args)
        return args.func(args, settings)
    except UsageError as exc:
        print(f"droidtrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(f"droidtrace: {exc}", file=sys.stderr)
        if isinstance(exc.__cause__, (DataError, ValueError)):
            return EXIT_DATA
        return EXIT_INTERNAL
    except (DataError, ValueError) as exc:
        print(f"droidtrace: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"droidtrace: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
