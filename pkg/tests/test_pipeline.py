import pytest

from droidtrace.dataset_io import import_dataset_csv
from droidtrace.errors import DataError, PipelineError
from droidtrace.pipeline import MODEL_FILES, PipelineConfig, run_pipeline
from droidtrace.synthetic import write_corpus


@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return write_corpus(root, seed=5, apps=20, malicious=10)


def small_config(manifest, out_dir, **overrides):
    kwargs = dict(
        traces_dir=manifest.traces_dir,
        labels_file=manifest.labels_file,
        output_dir=out_dir,
        vocabulary_file=manifest.vocabulary_file,
        k=6,
        seed=3,
        folds=5,
    )
    kwargs.update(overrides)
    return PipelineConfig(**kwargs)


def test_run_pipeline_shapes(small_corpus, tmp_path):
    result = run_pipeline(small_config(small_corpus, tmp_path / "out"))
    assert [row.classifier for row in result.report.rows] == [
        "naive_bayes", "random_forest", "sgd",
    ]
    assert len(result.dataset.rows) == 20
    assert result.dataset.vocabulary.size == 120
    # Reduced dataset keeps k bit columns + det_count.
    assert result.reduced.vocabulary.size == 6
    assert len(result.reduced.feature_names()) == 7
    assert len(result.selected_names) == 6


def test_run_pipeline_writes_all_outputs(small_corpus, tmp_path):
    out_dir = tmp_path / "out"
    result = run_pipeline(small_config(small_corpus, out_dir))
    expected = {
        "dataset.csv", "dataset_reduced.csv", "features.csv",
        "report.csv", "report.txt", *MODEL_FILES.values(),
    }
    assert {p.name for p in out_dir.iterdir()} == expected
    reduced = import_dataset_csv(out_dir / "dataset_reduced.csv")
    assert reduced == result.reduced
    header = (out_dir / "features.csv").read_text().splitlines()[0]
    assert header == "rank,feature_name,chi2,a,b,c,d"
    assert (out_dir / "report.csv").read_text().splitlines()[0].startswith("classifier,")


def test_run_pipeline_deterministic(small_corpus, tmp_path):
    first = tmp_path / "one"
    second = tmp_path / "two"
    run_pipeline(small_config(small_corpus, first))
    run_pipeline(small_config(small_corpus, second))
    for name in (p.name for p in first.iterdir()):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_run_pipeline_without_vocabulary_builds_from_traces(small_corpus, tmp_path):
    config = small_config(small_corpus, tmp_path / "out", vocabulary_file=None)
    result = run_pipeline(config)
    # Only names that actually occurred in some trace are present.
    assert 0 < result.dataset.vocabulary.size <= 120
    assert sorted(result.dataset.vocabulary.names) == list(result.dataset.vocabulary.names)


def test_run_pipeline_missing_labels_names_path(small_corpus, tmp_path):
    config = small_config(small_corpus, tmp_path / "out")
    config.labels_file = tmp_path / "missing_labels.csv"
    with pytest.raises(DataError, match="missing_labels.csv"):
        run_pipeline(config)


def test_run_pipeline_missing_traces_dir(small_corpus, tmp_path):
    config = small_config(small_corpus, tmp_path / "out")
    config.traces_dir = tmp_path / "no_traces"
    with pytest.raises(DataError, match="no_traces"):
        run_pipeline(config)


def test_run_pipeline_stage_error_carries_stage_name(small_corpus, tmp_path):
    bad_labels = tmp_path / "labels.csv"
    bad_labels.write_text("not,a,labels,header\n", encoding="utf-8")
    config = small_config(small_corpus, tmp_path / "out")
    config.labels_file = bad_labels
    with pytest.raises(PipelineError, match="stage load-labels"):
        run_pipeline(config)


def test_run_pipeline_k_too_large_fails_in_selection(small_corpus, tmp_path):
    config = small_config(small_corpus, tmp_path / "out", k=500)
    with pytest.raises(PipelineError, match="stage select-features"):
        run_pipeline(config)


def test_pipeline_config_validates_k(small_corpus, tmp_path):
    with pytest.raises(ValueError, match="k must be"):
        small_config(small_corpus, tmp_path / "out", k=0)


def test_run_pipeline_logs_stage_counts(small_corpus, tmp_path, caplog):
    import logging

    with caplog.at_level(logging.INFO, logger="droidtrace.pipeline"):
        run_pipeline(small_config(small_corpus, tmp_path / "out"))
    messages = " | ".join(rec.message for rec in caplog.records)
    for stage in ("parse-traces", "load-labels", "vocabulary", "vectorize",
                  "assemble-dataset", "select-features", "cross-validate", "train-models"):
        assert stage in messages
