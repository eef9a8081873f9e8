"""CART forests (Gini, bootstrap, sqrt-feature subsampling) and one-vs-rest
gradient-boosted trees on the logistic loss."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..kernels import build_gini_tree, build_grad_tree, tree_apply
from . import as_dense

logger = logging.getLogger("urgency")


@dataclass
class DecisionTree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray | None = None  # classification: per-node class counts
    values: np.ndarray | None = None  # regression: per-node leaf values

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]


@dataclass
class ForestModel:
    trees: list[DecisionTree]
    classes: np.ndarray
    n_features: int
    feature_subsample: str = "sqrt"
    seed: int = 0


@dataclass
class BoostedModel:
    stages: list[list[DecisionTree]]  # one list of trees per class
    classes: np.ndarray
    n_features: int
    learning_rate: float = 0.3
    base_score: float = 0.0
    n_rounds: int = 100
    max_depth: int = 6
    l2_lambda: float = 1.0
    seed: int = 0
    train_log: list[float] = field(default_factory=list)


def _encode_classes(y):
    y = np.asarray(y, dtype=np.float64)
    classes = np.unique(y)
    codes = np.searchsorted(classes, y).astype(np.int64)
    return classes, codes


def fit_forest(
    X,
    y,
    n_trees: int = 100,
    seed: int = 0,
    max_depth: int | None = None,
    min_samples_split: int = 2,
) -> ForestModel:
    X = as_dense(X)
    n, d = X.shape
    if n < 2:
        raise DataError(f"need at least 2 rows to fit a forest, got {n}")
    classes, codes = _encode_classes(y)
    n_classes = len(classes)
    if n_classes == 1:
        warnings.warn(
            f"all labels equal {classes[0]:g}; forest degenerates to a constant predictor",
            RuntimeWarning,
            stacklevel=2,
        )
    feat_k = max(1, min(d, int(np.sqrt(d))))
    depth = -1 if max_depth is None else int(max_depth)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    trees = []
    for _ in range(max(1, n_trees)):
        bootstrap = rng.integers(0, n, size=n).astype(np.int64)
        pool = rng.random((2 * n + 1) * feat_k)
        feature, threshold, left, right, counts, n_nodes = build_gini_tree(
            X, codes, n_classes, bootstrap, depth, int(min_samples_split), feat_k, pool
        )
        trees.append(
            DecisionTree(
                feature=feature[:n_nodes].copy(),
                threshold=threshold[:n_nodes].copy(),
                left=left[:n_nodes].copy(),
                right=right[:n_nodes].copy(),
                counts=counts[:n_nodes].copy(),
            )
        )
    return ForestModel(trees=trees, classes=classes, n_features=d, seed=seed)


def predict_forest(model: ForestModel, X):
    """(predicted class labels, per-class probability rows).

    Probabilities are the mean over trees of each leaf's class-frequency
    vector; argmax breaks ties toward the lowest class index.
    """
    X = as_dense(X)
    if X.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got {X.shape[1]}")
    n = X.shape[0]
    k = len(model.classes)
    probs = np.zeros((n, k))
    for tree in model.trees:
        leaves = tree_apply(tree.feature, tree.threshold, tree.left, tree.right, X)
        leaf_counts = tree.counts[leaves].astype(np.float64)
        leaf_counts /= leaf_counts.sum(axis=1, keepdims=True)
        probs += leaf_counts
    probs /= len(model.trees)
    pred = model.classes[np.argmax(probs, axis=1)]
    return pred, probs


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def fit_boosted(
    X,
    y,
    n_rounds: int = 100,
    learning_rate: float = 0.3,
    max_depth: int = 6,
    l2_lambda: float = 1.0,
    seed: int = 0,
) -> BoostedModel:
    """One-vs-rest Newton boosting: per class, trees fit the first/second
    order gradients of logistic loss on the is-class indicator; leaf values
    are -G/(H+lambda). The exact greedy builder has no sampling, so the fit
    is deterministic; `seed` is recorded for provenance only."""
    X = as_dense(X)
    n, d = X.shape
    if n < 2:
        raise DataError(f"need at least 2 rows to fit boosted trees, got {n}")
    if not (0.0 <= learning_rate <= 1.0):
        raise DataError(f"learning_rate must be in [0, 1], got {learning_rate}")
    classes, codes = _encode_classes(y)
    k = len(classes)
    if k == 1:
        warnings.warn(
            f"all labels equal {classes[0]:g}; boosted model degenerates to a constant",
            RuntimeWarning,
            stacklevel=2,
        )
    # presorted columns shared by every round and class
    order = np.ascontiguousarray(np.argsort(X, axis=0, kind="mergesort").T)
    targets = np.zeros((k, n))
    for c in range(k):
        targets[c] = (codes == c).astype(np.float64)
    margins = np.zeros((k, n))
    stages: list[list[DecisionTree]] = [[] for _ in range(k)]
    train_log: list[float] = []
    for _ in range(int(n_rounds)):
        round_loss = 0.0
        for c in range(k):
            p = _sigmoid(margins[c])
            g = p - targets[c]
            h = p * (1.0 - p)
            feature, threshold, left, right, leaf_value, n_nodes, node_of = build_grad_tree(
                X, order, g, h, float(l2_lambda), int(max_depth), 2
            )
            stages[c].append(
                DecisionTree(
                    feature=feature[:n_nodes].copy(),
                    threshold=threshold[:n_nodes].copy(),
                    left=left[:n_nodes].copy(),
                    right=right[:n_nodes].copy(),
                    values=leaf_value[:n_nodes].copy(),
                )
            )
            margins[c] += learning_rate * leaf_value[node_of]
            z = margins[c]
            round_loss += float(
                np.mean(np.maximum(z, 0.0) - targets[c] * z + np.log1p(np.exp(-np.abs(z))))
            )
        train_log.append(round_loss)
    return BoostedModel(
        stages=stages,
        classes=classes,
        n_features=d,
        learning_rate=float(learning_rate),
        base_score=0.0,
        n_rounds=int(n_rounds),
        max_depth=int(max_depth),
        l2_lambda=float(l2_lambda),
        seed=seed,
        train_log=train_log,
    )


def boosted_margins(model: BoostedModel, X) -> np.ndarray:
    """Raw per-class scores before the softmax."""
    X = as_dense(X)
    if X.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got {X.shape[1]}")
    n = X.shape[0]
    k = len(model.classes)
    margins = np.full((n, k), model.base_score)
    for c, trees in enumerate(model.stages):
        for tree in trees:
            leaves = tree_apply(tree.feature, tree.threshold, tree.left, tree.right, X)
            margins[:, c] += model.learning_rate * tree.values[leaves]
    return margins


def predict_boosted(model: BoostedModel, X):
    """(predicted class labels, softmax probabilities over class scores)."""
    margins = boosted_margins(model, X)
    shifted = margins - margins.max(axis=1, keepdims=True)
    expm = np.exp(shifted)
    probs = expm / expm.sum(axis=1, keepdims=True)
    pred = model.classes[np.argmax(probs, axis=1)]
    return pred, probs
