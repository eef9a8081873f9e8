"""Least-squares linear regression and clamped ridge ("ordinal") regression.

Both solve the bias-augmented normal equations directly; the ridge penalty
leaves the bias unpenalized. Nearly singular Gram matrices (condition
estimate above 1e12, or a failed Cholesky factorization) get 1e-8 added to
the diagonal and the model carries a degeneracy flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError

COND_LIMIT = 1e12
JITTER = 1e-8


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    clamp_range: tuple[float, float] | None
    ridge_alpha: float
    degenerate: bool = False


def _solve_normal_equations(X, y, alpha):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise DataError("feature matrix must be 2-dimensional")
    n, d = X.shape
    if n != y.shape[0]:
        raise DataError(f"X has {n} rows but y has {y.shape[0]} entries")
    if n < 2:
        raise DataError(f"need at least 2 rows to fit, got {n}")
    A = np.hstack([X, np.ones((n, 1))])
    G = A.T @ A
    if alpha > 0.0:
        penalty = np.full(d + 1, alpha)
        penalty[d] = 0.0  # bias unpenalized
        G = G + np.diag(penalty)
    rhs = A.T @ y
    degenerate = False
    try:
        np.linalg.cholesky(G)
        if np.linalg.cond(G) > COND_LIMIT:
            degenerate = True
    except np.linalg.LinAlgError:
        degenerate = True
    if degenerate:
        G = G + JITTER * np.eye(d + 1)
    w_full = np.linalg.solve(G, rhs)
    return w_full[:d], float(w_full[d]), degenerate


def fit_linear(X, y) -> LinearModel:
    weights, bias, degenerate = _solve_normal_equations(X, y, alpha=0.0)
    return LinearModel(
        weights=weights,
        bias=bias,
        clamp_range=None,
        ridge_alpha=0.0,
        degenerate=degenerate,
    )


def fit_ordinal_ridge(X, y, alpha: float = 1.0) -> LinearModel:
    if alpha < 0:
        raise DataError(f"ridge alpha must be >= 0, got {alpha}")
    weights, bias, degenerate = _solve_normal_equations(X, y, alpha=alpha)
    y = np.asarray(y, dtype=np.float64)
    lo, hi = float(np.min(y)), float(np.max(y))
    clamp = (lo, hi) if lo < hi else None
    return LinearModel(
        weights=weights,
        bias=bias,
        clamp_range=clamp,
        ridge_alpha=float(alpha),
        degenerate=degenerate,
    )


def predict_linear(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1] != model.weights.shape[0]:
        raise DataError(
            f"model expects {model.weights.shape[0]} features, got {X.shape[1]}"
        )
    pred = X @ model.weights + model.bias
    if model.clamp_range is not None:
        np.clip(pred, model.clamp_range[0], model.clamp_range[1], out=pred)
    return pred
