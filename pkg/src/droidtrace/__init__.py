"""Behavioral malware detection from syscall trace logs."""

from .classifiers import (
    ClassifierSpec,
    ForestParams,
    NBModel,
    Prediction,
    RFModel,
    SGDModel,
    SgdParams,
    fit,
    load_model,
    predict,
    predict_naive_bayes,
    predict_random_forest,
    predict_sgd,
    save_model,
    train_naive_bayes,
    train_random_forest,
    train_sgd,
)
from .collection import CollectionSpec, CommandRunner, RunResult, SubprocessRunner, collect_trace
from .dataset_io import export_arff, export_dataset_csv, import_dataset_csv
from .errors import DataError, PipelineError
from .evaluation import (
    ComparisonReport,
    ConfusionCounts,
    CVResult,
    Metrics,
    compare_classifiers,
    confusion,
    cross_validate,
    holdout_split,
    metrics,
    stratified_kfold,
)
from .feature_selector import ContingencyTable, FeatureScore, chi_square, contingency, select_top_k
from .featurizer import (
    Dataset,
    FeatureVector,
    FeatureVocabulary,
    Label,
    assemble_dataset,
    build_vocabulary,
    load_labels,
    load_vocabulary,
    vectorize,
)
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .trace_parser import (
    EventKind,
    TraceEvent,
    TraceProfile,
    distinct_syscalls,
    parse_line,
    parse_trace,
    parse_trace_file,
)

__version__ = "0.1.0"
