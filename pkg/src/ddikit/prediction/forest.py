"""From-scratch random forest over integer count features.

Bagged binary trees, Gini impurity splits of the form ``x <= t``, and a
sqrt(n_features) feature subsample per split.  Everything is deterministic
under the training seed.  Confidence for a pair is the fraction of trees
voting positive; a pair is classified as interacting iff confidence > 0.5.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import best_split


class TrainingError(ValueError):
    pass


@dataclass
class Node:
    counts: tuple[int, int]  # (negatives, positives) of the training samples
    feature: int = -1
    threshold: int = 0
    left: "Node | None" = None
    right: "Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def vote(self) -> int:
        """Majority class; ties resolve toward negative."""
        return 1 if self.counts[1] > self.counts[0] else 0


@dataclass
class DecisionTree:
    root: Node
    n_features: int

    def leaf(self, x) -> Node:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict(self, x) -> int:
        return self.leaf(x).vote()

    def leaf_distribution(self, x) -> tuple[float, float]:
        neg, pos = self.leaf(x).counts
        total = neg + pos
        return (neg / total, pos / total)


@dataclass
class Forest:
    trees: list[DecisionTree]
    n_features: int
    max_depth: int | None
    seed: int
    params: dict = field(default_factory=dict)

    def predict_confidence(self, x) -> float:
        x = np.asarray(x)
        if x.shape != (self.n_features,):
            raise TrainingError(
                f"feature vector of length {x.shape} does not match forest "
                f"({self.n_features} features)"
            )
        votes = sum(t.predict(x) for t in self.trees)
        return votes / len(self.trees)

    def classify(self, x) -> bool:
        return self.predict_confidence(x) > 0.5


def _grow(X, y, idx, depth, max_depth, n_sub, rng) -> Node:
    neg = int(np.sum(y[idx] == 0))
    pos = int(np.sum(y[idx] == 1))
    node = Node(counts=(neg, pos))
    if neg == 0 or pos == 0:
        return node
    if max_depth is not None and depth >= max_depth:
        return node
    feats = np.sort(rng.choice(X.shape[1], size=n_sub, replace=False)).astype(np.int64)
    f, thr, gini = best_split(X[idx], y[idx].astype(np.int64), feats)
    if f < 0:
        return node
    mask = X[idx, f] <= thr
    node.feature = int(f)
    node.threshold = int(thr)
    node.left = _grow(X, y, idx[mask], depth + 1, max_depth, n_sub, rng)
    node.right = _grow(X, y, idx[~mask], depth + 1, max_depth, n_sub, rng)
    return node


def train_random_forest(
    X,
    y,
    trees: int = 100,
    max_depth: int | None = None,
    seed: int | None = None,
) -> Forest:
    """Train a bagged forest; seed is required for reproducibility."""
    if seed is None:
        raise TrainingError("a seed is required for reproducible training")
    X = np.asarray(X, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise TrainingError("X must be 2-D with one label per row")
    classes = set(np.unique(y).tolist())
    if not classes <= {0, 1}:
        raise TrainingError(f"labels must be 0/1, got {sorted(classes)}")
    if len(classes) < 2:
        raise TrainingError("training set contains a single class")
    n_samples, n_features = X.shape
    n_sub = max(1, round(math.sqrt(n_features)))
    built = []
    for i in range(trees):
        rng = np.random.default_rng([seed, i])
        sample = rng.integers(0, n_samples, size=n_samples)
        root = _grow(X, y, sample, 0, max_depth, n_sub, rng)
        built.append(DecisionTree(root=root, n_features=n_features))
    return Forest(
        trees=built,
        n_features=n_features,
        max_depth=max_depth,
        seed=seed,
        params={"trees": trees, "feature_subsample": n_sub},
    )


def export_predictions_csv(records, path) -> None:
    """Write ``cui_a,cui_b,confidence,method`` prediction rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["cui_a", "cui_b", "confidence", "method"])
        for cui_a, cui_b, confidence, method in records:
            w.writerow([cui_a, cui_b, f"{confidence:.4f}", method])
