"""Epsilon-insensitive support vector regression with an RBF kernel,
trained by sequential minimal optimization (maximal-violating-pair rule).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, NumericError
from ..kernels import rbf_kernel_matrix, smo_epsilon_svr
from . import as_dense

logger = logging.getLogger("urgency")

DEFAULT_CACHE_MB = 512.0
PREDICT_BLOCK = 2048


@dataclass
class SvrModel:
    support_vectors: np.ndarray
    dual_coefs: np.ndarray
    bias: float
    gamma: float
    C: float
    epsilon: float
    tol: float
    n_features: int
    n_iter: int = 0
    max_violation: float = 0.0
    converged: bool = True
    objective_log: np.ndarray | None = field(default=None, repr=False)


def rbf_kernel(u, v, gamma: float) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DataError(f"kernel arity mismatch: {u.shape} vs {v.shape}")
    if gamma <= 0:
        raise DataError(f"gamma must be > 0, got {gamma}")
    diff = u - v
    return float(np.exp(-gamma * np.dot(diff, diff)))


def resolve_gamma(X: np.ndarray, gamma) -> float:
    """'auto' -> 1 / (n_features * variance of all matrix entries)."""
    if gamma == "auto":
        var = float(X.var())
        return 1.0 / (X.shape[1] * var) if var > 0 else 1.0 / X.shape[1]
    gamma = float(gamma)
    if gamma <= 0:
        raise DataError(f"gamma must be > 0, got {gamma}")
    return gamma


def fit_svr(
    X,
    y,
    C: float = 1.0,
    epsilon: float = 0.1,
    gamma="auto",
    tol: float = 1e-3,
    max_iter: int | None = None,
    cache_mb: float = DEFAULT_CACHE_MB,
    track_objective: bool = False,
) -> SvrModel:
    X = as_dense(X)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise DataError(f"need at least 2 rows to fit SVR, got {n}")
    if not np.all(np.isfinite(y)):
        raise NumericError("SVR labels contain non-finite values")
    if C <= 0 or epsilon < 0:
        raise DataError(f"need C > 0 and epsilon >= 0, got C={C}, epsilon={epsilon}")
    gamma = resolve_gamma(X, gamma)
    if max_iter is None:
        max_iter = 200 * n
    cache_rows = int(cache_mb * 1e6 / (8 * n))
    cache_rows = max(2, min(n, cache_rows))
    sq = np.einsum("ij,ij->i", X, X)
    beta, bias, n_iter, violation, obj_log = smo_epsilon_svr(
        X, sq, y, float(C), float(epsilon), gamma, float(tol), int(max_iter),
        cache_rows, bool(track_objective),
    )
    converged = violation < tol
    if not converged:
        warnings.warn(
            f"SVR hit the iteration cap ({max_iter}) with KKT violation "
            f"{violation:.3e} >= tol {tol:g}",
            RuntimeWarning,
            stacklevel=2,
        )
    logger.debug(
        "SVR fit: n=%d iters=%d violation=%.3e converged=%s", n, n_iter, violation, converged
    )
    sv_mask = beta != 0.0
    return SvrModel(
        support_vectors=X[sv_mask].copy(),
        dual_coefs=beta[sv_mask].copy(),
        bias=float(bias),
        gamma=gamma,
        C=float(C),
        epsilon=float(epsilon),
        tol=float(tol),
        n_features=X.shape[1],
        n_iter=int(n_iter),
        max_violation=float(violation),
        converged=bool(converged),
        objective_log=obj_log if track_objective else None,
    )


def predict_svr(model: SvrModel, X) -> np.ndarray:
    X = as_dense(X)
    if X.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got {X.shape[1]}")
    out = np.full(X.shape[0], model.bias)
    if model.dual_coefs.shape[0] == 0:
        return out
    for lo in range(0, X.shape[0], PREDICT_BLOCK):
        hi = min(lo + PREDICT_BLOCK, X.shape[0])
        K = rbf_kernel_matrix(X[lo:hi], model.support_vectors, model.gamma)
        out[lo:hi] += K @ model.dual_coefs
    return out
