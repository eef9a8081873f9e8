"""Independent brute-force oracles.

Everything here is written the slow, obvious way (explicit loops, pair
enumeration, bisection projections) and never calls into the package's
implementations, so agreement is meaningful.
"""

from __future__ import annotations

import math

import numpy as np


def rmse_oracle(pred, truth):
    total = 0.0
    for p, t in zip(pred, truth):
        total += (p - t) ** 2
    return math.sqrt(total / len(pred))


def midranks_oracle(values):
    """rank_i = (# strictly smaller) + (# equal + 1) / 2, counted pairwise."""
    ranks = []
    for v in values:
        less = sum(1 for u in values if u < v)
        equal = sum(1 for u in values if u == v)
        ranks.append(less + (equal + 1) / 2.0)
    return ranks


def spearman_oracle(pred, truth):
    ra = midranks_oracle(pred)
    rb = midranks_oracle(truth)
    n = len(ra)
    ma = sum(ra) / n
    mb = sum(rb) / n
    num = sum((a - ma) * (b - mb) for a, b in zip(ra, rb))
    da = math.sqrt(sum((a - ma) ** 2 for a in ra))
    db = math.sqrt(sum((b - mb) ** 2 for b in rb))
    return num / (da * db)


def auc_oracle(scores, labels):
    """Exhaustive positive-negative pair enumeration, ties worth 1/2."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    wins = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def f1_oracle(pred, truth):
    def one(cls):
        tp = sum(1 for p, t in zip(pred, truth) if p == cls and t == cls)
        fp = sum(1 for p, t in zip(pred, truth) if p == cls and t != cls)
        fn = sum(1 for p, t in zip(pred, truth) if p != cls and t == cls)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        return 2 * prec * rec / (prec + rec) if prec + rec else 0.0

    f0, f1 = one(0), one(1)
    n1 = sum(1 for t in truth if t == 1)
    n = len(truth)
    return f0, f1, ((n - n1) * f0 + n1 * f1) / n


def kappa_linear_oracle(a, b, categories):
    cats = list(categories)
    k = len(cats)
    pos = {c: i for i, c in enumerate(cats)}
    n = len(a)
    conf = [[0.0] * k for _ in range(k)]
    for x, y in zip(a, b):
        conf[pos[x]][pos[y]] += 1.0 / n
    row = [sum(conf[i][j] for j in range(k)) for i in range(k)]
    col = [sum(conf[i][j] for i in range(k)) for j in range(k)]
    if k == 1:
        return 1.0
    num = 0.0
    den = 0.0
    for i in range(k):
        for j in range(k):
            w = abs(i - j) / (k - 1)
            num += w * conf[i][j]
            den += w * row[i] * col[j]
    return 1.0 if den == 0.0 else 1.0 - num / den


def calibration_oracle(pred, truth):
    groups: dict[float, list[float]] = {}
    for p, t in zip(pred, truth):
        groups.setdefault(t, []).append(p)
    out = []
    for label in sorted(groups):
        vals = groups[label]
        mean = sum(vals) / len(vals)
        var = sum((v - mean) ** 2 for v in vals) / len(vals)
        out.append((label, mean, math.sqrt(var), len(vals)))
    return out


# --- epsilon-SVR dual QP oracle ----------------------------------------------


def svr_dual_objective(beta, K, y, epsilon):
    """Minimization objective 0.5 b'Kb - y'b + eps * sum|b|."""
    beta = np.asarray(beta, dtype=float)
    return float(0.5 * beta @ K @ beta - y @ beta + epsilon * np.abs(beta).sum())


def _project_box_hyperplane(z, signs, C):
    """Euclidean projection onto {0 <= l <= C, signs . l = 0} by bisecting the
    hyperplane multiplier."""

    def clipped(nu):
        return np.clip(z - nu * signs, 0.0, C)

    lo, hi = -1.0, 1.0
    span = float(np.max(np.abs(z))) + C + 1.0
    lo, hi = -span, span
    g_lo = float(signs @ clipped(lo))
    g_hi = float(signs @ clipped(hi))
    assert g_lo >= 0.0 >= g_hi, "projection bracket failed"
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(signs @ clipped(mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return clipped(0.5 * (lo + hi))


def svr_qp_oracle(X, y, C, epsilon, gamma, iters=200_000, tol=1e-14):
    """Projected gradient descent on the 2n-variable epsilon-SVR dual.

    Returns (beta, minimization objective). Step size 1/L with L the largest
    eigenvalue of the quadratic term. Intended for tiny problems only.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    K = np.exp(-gamma * d2)
    signs = np.concatenate([np.ones(n), -np.ones(n)])
    Q = np.outer(signs, signs) * np.tile(K, (2, 2))
    p = np.concatenate([epsilon - y, epsilon + y])
    L = float(np.max(np.linalg.eigvalsh(Q)))
    step = 1.0 / max(L, 1e-12)
    lam = np.zeros(2 * n)
    prev_obj = np.inf
    for _ in range(iters):
        grad = Q @ lam + p
        lam = _project_box_hyperplane(lam - step * grad, signs, C)
        obj = float(0.5 * lam @ Q @ lam + p @ lam)
        if prev_obj - obj < tol and prev_obj < np.inf:
            break
        prev_obj = min(prev_obj, obj)
    beta = lam[:n] - lam[n:]
    return beta, svr_dual_objective(beta, K, y, epsilon)


# --- finite differences --------------------------------------------------------


def central_differences(fun, params, name, indices, h=1e-6):
    """d fun / d params[name] at the given flat indices, via central differences."""
    out = []
    flat = params[name].ravel()
    for idx in indices:
        orig = flat[idx]
        flat[idx] = orig + h
        up = fun(params)
        flat[idx] = orig - h
        down = fun(params)
        flat[idx] = orig
        out.append((up - down) / (2.0 * h))
    return np.array(out)
