"""Link prediction for drug pairs from literature-graph path features."""

from .forest import (
    DecisionTree,
    Forest,
    TrainingError,
    export_predictions_csv,
    train_random_forest,
)
from .kernels import USING_NUMBA, best_split
from .metrics import CvMetrics, evaluate_cv, roc_auc, stratified_kfold
from .paths import (
    DEFAULT_PATH_CAP,
    GraphError,
    LiteratureGraph,
    PathSet,
    build_dataset,
    enumerate_paths,
    featurize_pair,
    load_gold_pairs,
    load_vocabulary,
)

__all__ = [
    "DecisionTree",
    "Forest",
    "TrainingError",
    "export_predictions_csv",
    "train_random_forest",
    "USING_NUMBA",
    "best_split",
    "CvMetrics",
    "evaluate_cv",
    "roc_auc",
    "stratified_kfold",
    "DEFAULT_PATH_CAP",
    "GraphError",
    "LiteratureGraph",
    "PathSet",
    "build_dataset",
    "enumerate_paths",
    "featurize_pair",
    "load_gold_pairs",
    "load_vocabulary",
]
