"""Metrics, student-grouped cross-validation, binary reduction, threshold
sweeps, inter-rater kappa, and per-label prediction statistics.

Pooled (out-of-fold concatenated) metrics are the headline numbers;
per-fold values are also reported. Per-fold featurization fits the
vocabulary and idf statistics on training rows only, and every fold
records which rows those were so leakage is checkable after the fact.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus import LabeledPost, validate_label
from .errors import ConfigError, DataError
from .featurize import FeaturizerConfig, build_vocabulary, vectorize
from .models import (
    as_dense,
    fit_boosted,
    fit_forest,
    fit_linear,
    fit_ordinal_ridge,
    fit_svr,
    init_mlp,
    predict_boosted,
    predict_forest,
    predict_linear,
    predict_mlp,
    predict_svr,
    train_mlp,
)

LEARNERS = ("lr", "orr", "rf", "xgb", "svr", "nn", "mean")
REGRESSION_ONLY = ("lr", "orr", "svr", "mean")
DEFAULT_THRESHOLD_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


# --- report types ------------------------------------------------------------


@dataclass(frozen=True)
class FoldAssignment:
    n_folds: int
    fold_of_student: dict[str, int]
    seed: int


@dataclass(frozen=True)
class MetricsReport:
    rmse: float
    spearman_rho: float
    n: int


@dataclass(frozen=True)
class BinaryReport:
    auc_macro: float
    f1_weighted: float
    f1_class0: float
    f1_class1: float
    threshold: float


@dataclass(frozen=True)
class KappaResult:
    kappa: float
    weighting: str
    n_items: int


@dataclass(frozen=True)
class CalibrationBucket:
    label: float
    mean_pred: float
    stdev_pred: float
    count: int


@dataclass(frozen=True)
class CalibrationCurve:
    buckets: tuple[CalibrationBucket, ...]


# --- fold construction -------------------------------------------------------


def grouped_kfold(posts: list[LabeledPost], k: int = 10, seed: int = 42) -> FoldAssignment:
    """Sorted unique students, seeded shuffle, round-robin fold assignment."""
    if k < 2:
        raise ConfigError(f"need k >= 2 folds, got {k}")
    students = sorted({lp.post.student_id for lp in posts})
    if len(students) < k:
        raise DataError(f"{len(students)} students cannot fill {k} folds")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    perm = rng.permutation(len(students))
    fold_of_student = {students[p]: i % k for i, p in enumerate(perm)}
    return FoldAssignment(n_folds=k, fold_of_student=fold_of_student, seed=seed)


def fold_of_posts(posts: list[LabeledPost], assignment: FoldAssignment) -> np.ndarray:
    return np.array([assignment.fold_of_student[lp.post.student_id] for lp in posts])


# --- metrics -----------------------------------------------------------------


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape or pred.size == 0:
        raise DataError(f"rmse needs equal nonzero lengths, got {pred.shape} vs {truth.shape}")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def _midranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(x.shape[0])
    sorted_x = x[order]
    i = 0
    n = x.shape[0]
    while i < n:
        j = i
        while j + 1 < n and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman_rho(pred, truth) -> float:
    """Pearson correlation of midrank-transformed vectors."""
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape or pred.size < 2:
        raise DataError("spearman_rho needs two equal-length vectors of size >= 2")
    if np.all(pred == pred[0]) or np.all(truth == truth[0]):
        raise DataError("spearman_rho undefined for a constant vector")
    ra = _midranks(pred)
    rb = _midranks(truth)
    ra -= ra.mean()
    rb -= rb.mean()
    return float((ra @ rb) / math.sqrt((ra @ ra) * (rb @ rb)))


def binarize(label: float) -> int:
    """Urgent iff the label exceeds 4 (so 4 -> 0 and 4.5 -> 1)."""
    return 1 if validate_label(float(label)) > 4.0 else 0


def binarize_labels(labels) -> np.ndarray:
    return np.array([binarize(v) for v in np.asarray(labels, dtype=np.float64)])


def roc_auc(scores, labels) -> float:
    """P(random positive outscores random negative), ties at half credit."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise DataError("roc_auc needs equal-length scores and labels")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("roc_auc undefined with a single class present")
    ranks = _midranks(scores)
    rank_sum = float(ranks[pos].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def f1_scores(pred, truth):
    """Per-class F1 (0 when precision+recall is 0) and the support-weighted mean."""
    pred = np.asarray(pred).astype(np.int64)
    truth = np.asarray(truth).astype(np.int64)
    if pred.shape != truth.shape:
        raise DataError("f1_scores needs equal-length vectors")

    def f1_for(cls):
        tp = int(np.sum((pred == cls) & (truth == cls)))
        fp = int(np.sum((pred == cls) & (truth != cls)))
        fn = int(np.sum((pred != cls) & (truth == cls)))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        return 2 * precision * recall / (precision + recall) if precision + recall else 0.0

    f1_0 = f1_for(0)
    f1_1 = f1_for(1)
    n = truth.shape[0]
    support1 = int(np.sum(truth == 1))
    weighted = ((n - support1) * f1_0 + support1 * f1_1) / n if n else 0.0
    return f1_0, f1_1, weighted


def weighted_kappa_linear(rater_a, rater_b, categories) -> KappaResult:
    """Cohen's kappa with linear weights |i-j|/(k-1) over ordered categories."""
    a = list(rater_a)
    b = list(rater_b)
    if len(a) != len(b) or not a:
        raise DataError("weighted kappa needs two equal-length nonempty vectors")
    cats = list(categories)
    index = {c: i for i, c in enumerate(cats)}
    if len(index) != len(cats):
        raise DataError("categories must be distinct")
    k = len(cats)
    try:
        ia = np.array([index[v] for v in a])
        ib = np.array([index[v] for v in b])
    except KeyError as exc:
        raise DataError(f"rating {exc.args[0]!r} not in categories") from exc
    n = len(a)
    observed = np.zeros((k, k))
    for p, q in zip(ia, ib):
        observed[p, q] += 1.0
    observed /= n
    marg_a = observed.sum(axis=1)
    marg_b = observed.sum(axis=0)
    expected = np.outer(marg_a, marg_b)
    if k == 1:
        return KappaResult(kappa=1.0, weighting="linear", n_items=n)
    idx = np.arange(k, dtype=np.float64)
    weights = np.abs(idx[:, None] - idx[None, :]) / (k - 1)
    denom = float((weights * expected).sum())
    if denom == 0.0:
        kappa = 1.0
    else:
        kappa = 1.0 - float((weights * observed).sum()) / denom
    return KappaResult(kappa=kappa, weighting="linear", n_items=n)


def sweep_thresholds(scores, labels, grid=DEFAULT_THRESHOLD_GRID):
    """BinaryReport at each threshold; AUC is threshold-free and repeated."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    auc = roc_auc(scores, labels)
    out = []
    for threshold in grid:
        pred = (scores >= threshold).astype(np.int64)
        f1_0, f1_1, weighted = f1_scores(pred, labels)
        out.append(
            (
                threshold,
                BinaryReport(
                    auc_macro=auc,
                    f1_weighted=weighted,
                    f1_class0=f1_0,
                    f1_class1=f1_1,
                    threshold=threshold,
                ),
            )
        )
    return out


def calibration_curve(pred, truth) -> CalibrationCurve:
    """Mean and population stdev of predictions grouped by true label."""
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise DataError("calibration_curve needs equal-length vectors")
    buckets = []
    for label in np.unique(truth):
        sel = pred[truth == label]
        buckets.append(
            CalibrationBucket(
                label=float(label),
                mean_pred=float(sel.mean()),
                stdev_pred=float(sel.std()),
                count=int(sel.shape[0]),
            )
        )
    return CalibrationCurve(buckets=tuple(buckets))


# --- learner registry --------------------------------------------------------


def _pop_params(params: dict, allowed: dict):
    merged = dict(allowed)
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown hyperparameters {sorted(unknown)}; allowed: {sorted(allowed)}")
    merged.update(params)
    return merged


def fit_learner(name: str, params: dict, X, y, task: str, seed: int):
    """Train one of the six learners (plus the 'mean' baseline) and return
    the fitted model object."""
    if name not in LEARNERS:
        raise ConfigError(f"unknown learner {name!r}; choose from {LEARNERS}")
    if task == "binary" and name in REGRESSION_ONLY:
        raise ConfigError(f"learner {name!r} supports the multiclass task only")
    y = np.asarray(y, dtype=np.float64)
    if name == "lr":
        _pop_params(params, {})
        return fit_linear(as_dense(X), y)
    if name == "orr":
        p = _pop_params(params, {"alpha": 1.0})
        return fit_ordinal_ridge(as_dense(X), y, alpha=p["alpha"])
    if name == "svr":
        p = _pop_params(
            params,
            {"C": 1.0, "epsilon": 0.1, "gamma": "auto", "tol": 1e-3,
             "max_iter": None, "cache_mb": 512.0},
        )
        return fit_svr(X, y, C=p["C"], epsilon=p["epsilon"], gamma=p["gamma"],
                       tol=p["tol"], max_iter=p["max_iter"], cache_mb=p["cache_mb"])
    if name == "rf":
        p = _pop_params(params, {"n_trees": 100, "max_depth": None})
        return fit_forest(X, y, n_trees=int(p["n_trees"]),
                          max_depth=p["max_depth"], seed=seed)
    if name == "xgb":
        p = _pop_params(
            params,
            {"n_rounds": 100, "learning_rate": 0.3, "max_depth": 6, "l2_lambda": 1.0},
        )
        return fit_boosted(X, y, n_rounds=int(p["n_rounds"]),
                           learning_rate=p["learning_rate"],
                           max_depth=int(p["max_depth"]),
                           l2_lambda=p["l2_lambda"], seed=seed)
    if name == "nn":
        p = _pop_params(
            params,
            {"dropout_rate": 0.85, "epochs": 100, "batch_size": 32, "learning_rate": 1e-3},
        )
        nn_task = "regression" if task == "multiclass" else "binary"
        model = init_mlp(as_dense(X).shape[1], dropout_rate=p["dropout_rate"],
                         task=nn_task, seed=seed)
        return train_mlp(model, X, y, epochs=int(p["epochs"]),
                         batch_size=int(p["batch_size"]),
                         learning_rate=p["learning_rate"], seed=seed + 1)
    # 'mean' baseline: predicts the training-label mean
    _pop_params(params, {})
    return {"mean": float(np.mean(y))}


def predict_learner(name: str, model, X, task: str):
    """(decimal predictions or class values, binary scores or None)."""
    if name in ("lr", "orr"):
        return predict_linear(model, as_dense(X)), None
    if name == "svr":
        return predict_svr(model, X), None
    if name == "mean":
        return np.full(as_dense(X).shape[0], model["mean"]), None
    if name == "rf":
        values, probs = predict_forest(model, X)
    elif name == "xgb":
        values, probs = predict_boosted(model, X)
    elif name == "nn":
        out = predict_mlp(model, X)
        if task == "binary":
            return (out >= 0.5).astype(np.float64), out
        return out, None
    else:
        raise ConfigError(f"unknown learner {name!r}")
    if task == "binary":
        ones = np.flatnonzero(model.classes == 1.0)
        scores = probs[:, ones[0]] if ones.size else np.zeros(probs.shape[0])
        return values, scores
    return values, None


# --- cross-validation --------------------------------------------------------


@dataclass(frozen=True)
class FeatureSpec:
    kind: str  # "text" | "embeddings"
    docs: tuple = ()  # TokenizedPost rows, aligned with posts (text kind)
    config: FeaturizerConfig | None = None
    matrix: np.ndarray | None = None  # embedding rows, aligned with posts

    def __post_init__(self):
        if self.kind not in ("text", "embeddings"):
            raise ConfigError(f"feature kind must be text or embeddings, got {self.kind!r}")
        if self.kind == "text" and (not self.docs or self.config is None):
            raise ConfigError("text features need docs and a FeaturizerConfig")
        if self.kind == "embeddings" and self.matrix is None:
            raise ConfigError("embedding features need a row-aligned matrix")


@dataclass(frozen=True)
class LearnerSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FoldTrace:
    fold: int
    train_students: frozenset
    val_students: frozenset
    vocab_rows: tuple  # rows whose documents fed vocabulary/idf fitting


@dataclass
class CvResult:
    predictions: np.ndarray
    scores: np.ndarray | None
    fold_of_post: np.ndarray
    report: MetricsReport | BinaryReport
    fold_reports: list
    trace: list[FoldTrace]
    assignment: FoldAssignment


def _fold_seed(seed: int, fold: int) -> int:
    return (seed * 1_000_003 + 7919 * fold + 17) % (2**31 - 1)


def _fold_features(features: FeatureSpec, train_rows, val_rows):
    if features.kind == "embeddings":
        return features.matrix[train_rows], features.matrix[val_rows]
    train_docs = [features.docs[r] for r in train_rows]
    val_docs = [features.docs[r] for r in val_rows]
    vocab = build_vocabulary(train_docs, features.config)
    X_train = vectorize(train_docs, vocab, features.config)
    X_val = vectorize(val_docs, vocab, features.config)
    return X_train, X_val


def _run_fold(payload):
    (fold, train_rows, val_rows, features, learner, task, y, seed) = payload
    try:
        X_train, X_val = _fold_features(features, train_rows, val_rows)
        model = fit_learner(learner.name, learner.params, X_train, y[train_rows],
                            task, _fold_seed(seed, fold))
        values, scores = predict_learner(learner.name, model, X_val, task)
    except Exception as exc:
        raise type(exc)(f"fold {fold}: {exc}") from exc
    return fold, val_rows, values, scores


def _pooled_report(task, y, predictions, scores, threshold=0.5):
    if task == "binary":
        f1_0, f1_1, weighted = f1_scores(predictions.astype(np.int64), y.astype(np.int64))
        return BinaryReport(
            auc_macro=roc_auc(scores, y.astype(np.int64)),
            f1_weighted=weighted,
            f1_class0=f1_0,
            f1_class1=f1_1,
            threshold=threshold,
        )
    return MetricsReport(rmse=rmse(predictions, y), spearman_rho=spearman_rho(predictions, y),
                         n=int(y.shape[0]))


def cross_validate(
    posts: list[LabeledPost],
    features: FeatureSpec,
    learner: LearnerSpec,
    task: str = "multiclass",
    k: int = 10,
    seed: int = 42,
    jobs: int = 1,
):
    """Student-grouped k-fold CV; returns a CvResult with pooled out-of-fold
    metrics, per-fold metrics, and per-fold leakage traces."""
    if task not in ("multiclass", "binary"):
        raise ConfigError(f"task must be multiclass or binary, got {task!r}")
    n = len(posts)
    if features.kind == "text" and len(features.docs) != n:
        raise DataError("docs not aligned with posts")
    if features.kind == "embeddings" and features.matrix.shape[0] != n:
        raise DataError("embedding matrix not aligned with posts")
    labels = np.array([lp.label for lp in posts])
    y = binarize_labels(labels).astype(np.float64) if task == "binary" else labels
    assignment = grouped_kfold(posts, k=k, seed=seed)
    fold_of = fold_of_posts(posts, assignment)
    students = np.array([lp.post.student_id for lp in posts])

    payloads = []
    for fold in range(k):
        val_rows = np.flatnonzero(fold_of == fold)
        train_rows = np.flatnonzero(fold_of != fold)
        if val_rows.size == 0 or train_rows.size == 0:
            raise DataError(f"fold {fold} is empty; use fewer folds")
        payloads.append((fold, train_rows, val_rows, features, learner, task, y, seed))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_fold, payloads))
    else:
        results = [_run_fold(p) for p in payloads]
    results.sort(key=lambda r: r[0])

    predictions = np.empty(n)
    scores = np.empty(n) if task == "binary" else None
    fold_reports = []
    trace = []
    for fold, val_rows, values, fold_scores in results:
        predictions[val_rows] = values
        if scores is not None:
            scores[val_rows] = fold_scores
        train_rows = payloads[fold][1]
        trace.append(
            FoldTrace(
                fold=fold,
                train_students=frozenset(students[train_rows].tolist()),
                val_students=frozenset(students[val_rows].tolist()),
                vocab_rows=tuple(train_rows.tolist()),
            )
        )
        try:
            fold_reports.append(
                _pooled_report(task, y[val_rows], values,
                               fold_scores if task == "binary" else None)
            )
        except DataError:
            fold_reports.append(None)  # e.g. single-class fold: metric undefined

    report = _pooled_report(task, y, predictions, scores)
    return CvResult(
        predictions=predictions,
        scores=scores,
        fold_of_post=fold_of,
        report=report,
        fold_reports=fold_reports,
        trace=trace,
        assignment=assignment,
    )
