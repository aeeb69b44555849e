"""Cross-validation and classification metrics for the pair classifier."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forest import TrainingError, train_random_forest


@dataclass
class FoldMetrics:
    roc_auc: float
    precision: float
    recall: float
    f1: float


@dataclass
class CvMetrics:
    folds: list[FoldMetrics] = field(default_factory=list)

    @property
    def roc_auc(self) -> float:
        return float(np.mean([f.roc_auc for f in self.folds]))

    @property
    def precision(self) -> float:
        return float(np.mean([f.precision for f in self.folds]))

    @property
    def recall(self) -> float:
        return float(np.mean([f.recall for f in self.folds]))

    @property
    def f1(self) -> float:
        return float(np.mean([f.f1 for f in self.folds]))


def roc_auc(scores, labels) -> float:
    """AUC via the rank statistic (Mann-Whitney U), with midranks for ties."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise TrainingError("ROC-AUC needs both classes")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(len(scores), dtype=float)
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1  # midrank, 1-based
        i = j + 1
    rank_sum = float(np.sum(ranks[labels == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def _prf(y_true, y_pred) -> tuple[float, float, float]:
    """Macro-averaged precision/recall/F1 over the two classes."""
    precisions, recalls, f1s = [], [], []
    for cls in (0, 1):
        tp = int(np.sum((y_pred == cls) & (y_true == cls)))
        fp = int(np.sum((y_pred == cls) & (y_true != cls)))
        fn = int(np.sum((y_pred != cls) & (y_true == cls)))
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        precisions.append(p)
        recalls.append(r)
        f1s.append(f)
    return float(np.mean(precisions)), float(np.mean(recalls)), float(np.mean(f1s))


def stratified_kfold(y, k: int, seed: int):
    """Index folds preserving the class ratio; each fold must hold both classes."""
    y = np.asarray(y)
    if k < 2:
        raise TrainingError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise TrainingError(
                f"class {cls} has {len(idx)} rows; cannot stratify into {k} folds"
            )
        rng.shuffle(idx)
        for i, sample in enumerate(idx):
            folds[i % k].append(int(sample))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def evaluate_cv(X, y, k: int = 10, trees: int = 100,
                max_depth: int | None = None, seed: int = 0) -> CvMetrics:
    """Stratified k-fold cross-validation of the forest classifier."""
    X = np.asarray(X, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    metrics = CvMetrics()
    for fold_no, test_idx in enumerate(stratified_kfold(y, k, seed)):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        forest = train_random_forest(
            X[mask], y[mask], trees=trees, max_depth=max_depth, seed=seed + fold_no
        )
        scores = np.array([forest.predict_confidence(x) for x in X[test_idx]])
        preds = (scores > 0.5).astype(np.int64)
        p, r, f1 = _prf(y[test_idx], preds)
        metrics.folds.append(
            FoldMetrics(roc_auc=roc_auc(scores, y[test_idx]), precision=p, recall=r, f1=f1)
        )
    return metrics
