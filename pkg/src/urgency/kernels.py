"""Hot numeric kernels: SMO solver and decision-tree builders.

Every function here is written in numba-compatible numpy and compiled with
``@jit`` from :mod:`urgency._accel` (``URGENCY_NUMBA=0`` selects the plain
numpy path; both paths share this source and give bit-identical results).
Randomness is injected via pre-generated pools so results never depend on
the execution path.
"""

from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED, jit

__all__ = [
    "NUMBA_ENABLED",
    "rbf_kernel_matrix",
    "smo_epsilon_svr",
    "build_gini_tree",
    "build_grad_tree",
    "tree_apply",
]


def rbf_kernel_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a - b||^2) for every row pair; BLAS-backed, not jitted."""
    sq_a = np.einsum("ij,ij->i", A, A)
    sq_b = np.einsum("ij,ij->i", B, B)
    d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * (A @ B.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


@jit
def smo_epsilon_svr(X, sq, y, C, eps, gamma, tol, max_iter, cache_cap, track_obj):
    """Sequential minimal optimization for the epsilon-SVR dual (RBF kernel).

    Solves min_l 0.5 l'Ql + p'l over the 2n variables l = (alpha, alpha*),
    0 <= l <= C, sum(s*l) = 0 with s = (+1...,-1...), Q_uv = s_u s_v K(u%n, v%n),
    p = (eps - y, eps + y), picking the maximal-KKT-violating pair each step.
    Kernel rows are produced on demand through an LRU cache of `cache_cap` rows.

    Returns (beta, bias, n_iter, violation, obj_log) where beta = alpha - alpha*.
    """
    n = X.shape[0]
    two_n = 2 * n
    lam = np.zeros(two_n)
    sign = np.empty(two_n)
    sign[:n] = 1.0
    sign[n:] = -1.0
    p = np.empty(two_n)
    p[:n] = eps - y
    p[n:] = eps + y
    G = p.copy()

    cache = np.empty((cache_cap, n))
    slot_of = np.full(n, -1, np.int64)
    row_of = np.full(cache_cap, -1, np.int64)
    stamp = np.zeros(cache_cap, np.int64)
    state = np.zeros(2, np.int64)  # [clock, slots in use]

    def get_row(b):
        state[0] += 1
        s = slot_of[b]
        if s >= 0:
            stamp[s] = state[0]
            return s
        if state[1] < cache_cap:
            s = state[1]
            state[1] += 1
        else:
            s = np.argmin(stamp)
            slot_of[row_of[s]] = -1
        row = np.exp(-gamma * (sq + (sq[b] - 2.0 * np.dot(X, X[b]))))
        cache[s, :] = row
        slot_of[b] = s
        row_of[s] = b
        stamp[s] = state[0]
        return s

    obj_log = np.empty(max_iter if track_obj else 0)
    it = 0
    violation = np.inf
    while it < max_iter:
        neg_yg = -(sign * G)
        up_ok = ((sign > 0.0) & (lam < C)) | ((sign < 0.0) & (lam > 0.0))
        low_ok = ((sign > 0.0) & (lam > 0.0)) | ((sign < 0.0) & (lam < C))
        up_vals = np.where(up_ok, neg_yg, -np.inf)
        low_vals = np.where(low_ok, neg_yg, np.inf)
        i = int(np.argmax(up_vals))
        j = int(np.argmin(low_vals))
        violation = up_vals[i] - low_vals[j]
        if violation < tol:
            break
        bi = i % n
        bj = j % n
        si = sign[i]
        sj = sign[j]
        slot_i = get_row(bi)
        slot_j = get_row(bj)
        k_ij = cache[slot_i, bj]
        quad = 2.0 - 2.0 * k_ij  # Q_ii + Q_jj +/- 2 Q_ij: same value either sign
        if quad <= 0.0:
            quad = 1e-12
        old_i = lam[i]
        old_j = lam[j]
        if si != sj:
            delta = (-G[i] - G[j]) / quad
            diff = old_i - old_j
            lam[i] = old_i + delta
            lam[j] = old_j + delta
            if diff > 0.0:
                if lam[j] < 0.0:
                    lam[j] = 0.0
                    lam[i] = diff
                if lam[i] > C:
                    lam[i] = C
                    lam[j] = C - diff
            else:
                if lam[i] < 0.0:
                    lam[i] = 0.0
                    lam[j] = -diff
                if lam[j] > C:
                    lam[j] = C
                    lam[i] = C + diff
        else:
            delta = (G[i] - G[j]) / quad
            total = old_i + old_j
            lam[i] = old_i - delta
            lam[j] = old_j + delta
            if total > C:
                if lam[i] > C:
                    lam[i] = C
                    lam[j] = total - C
                if lam[j] > C:
                    lam[j] = C
                    lam[i] = total - C
            else:
                if lam[j] < 0.0:
                    lam[j] = 0.0
                    lam[i] = total
                if lam[i] < 0.0:
                    lam[i] = 0.0
                    lam[j] = total
        d_i = lam[i] - old_i
        d_j = lam[j] - old_j
        upd = (si * d_i) * cache[slot_i] + (sj * d_j) * cache[slot_j]
        G[:n] += upd
        G[n:] -= upd
        if track_obj:
            obj_log[it] = 0.5 * np.sum(lam * (G + p))
        it += 1

    # bias from the KKT multiplier, averaged over free variables when any
    ub = np.inf
    lb = -np.inf
    sum_free = 0.0
    n_free = 0
    for t in range(two_n):
        yg = sign[t] * G[t]
        if lam[t] >= C:
            if sign[t] < 0.0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        elif lam[t] <= 0.0:
            if sign[t] > 0.0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        else:
            n_free += 1
            sum_free += yg
    if n_free > 0:
        rho = sum_free / n_free
    elif np.isfinite(ub) and np.isfinite(lb):
        rho = (ub + lb) / 2.0
    elif np.isfinite(ub):
        rho = ub
    elif np.isfinite(lb):
        rho = lb
    else:
        rho = 0.0
    beta = lam[:n] - lam[n:]
    return beta, -rho, it, violation, obj_log[:it]


@jit
def build_gini_tree(X, y_codes, n_classes, samples, max_depth, min_split, feat_k, rand_pool):
    """CART classification tree on a bootstrap sample, Gini splits.

    `samples` are row indices into X (repeats allowed). At each node a
    partial Fisher-Yates pass driven by `rand_pool` picks `feat_k` candidate
    features without replacement; when every candidate is constant the scan
    extends to the remaining features so nodes stay split until pure.
    Grows until pure, fewer than `min_split` samples, or `max_depth`
    (negative = unlimited). Returns (feature, threshold, left, right,
    counts, n_nodes); feature[v] == -1 marks leaves.
    """
    m = samples.shape[0]
    d = X.shape[1]
    max_nodes = 2 * m + 1
    feature = np.full(max_nodes, -1, np.int64)
    threshold = np.zeros(max_nodes)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    counts = np.zeros((max_nodes, n_classes), np.int64)

    idx = samples.copy()
    buf = np.empty(m, np.int64)
    perm = np.arange(d)
    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = m
    stack_depth[0] = 0
    top = 1
    n_nodes = 1
    pool_pos = 0

    while top > 0:
        top -= 1
        node = stack_node[top]
        start = stack_start[top]
        end = stack_end[top]
        depth = stack_depth[top]
        sz = end - start
        for q in range(start, end):
            counts[node, y_codes[idx[q]]] += 1
        n_present = 0
        for c in range(n_classes):
            if counts[node, c] > 0:
                n_present += 1
        if n_present <= 1 or sz < min_split or (max_depth >= 0 and depth >= max_depth):
            continue

        best_gain = -1.0
        best_feat = -1
        best_thr = 0.0
        t_pos = 0
        while t_pos < d:
            if t_pos < feat_k:
                r = rand_pool[pool_pos]
                pool_pos += 1
                u = t_pos + int(r * (d - t_pos))
                if u >= d:
                    u = d - 1
                tmp = perm[t_pos]
                perm[t_pos] = perm[u]
                perm[u] = tmp
            elif best_feat >= 0:
                break  # candidates exhausted and one of them split
            f = perm[t_pos]
            t_pos += 1

            vals = np.empty(sz)
            for q in range(sz):
                vals[q] = X[idx[start + q], f]
            order = np.argsort(vals, kind="mergesort")
            left_cnt = np.zeros(n_classes, np.int64)
            left_n = 0
            for q in range(sz - 1):
                s_row = idx[start + order[q]]
                left_cnt[y_codes[s_row]] += 1
                left_n += 1
                v_here = vals[order[q]]
                v_next = vals[order[q + 1]]
                if v_next <= v_here:
                    continue
                right_n = sz - left_n
                sl = 0.0
                sr = 0.0
                for c in range(n_classes):
                    lc = left_cnt[c]
                    rc = counts[node, c] - lc
                    sl += lc * lc
                    sr += rc * rc
                gain = sl / left_n + sr / right_n
                if gain > best_gain:
                    best_gain = gain
                    best_feat = f
                    best_thr = 0.5 * (v_here + v_next)

        if best_feat < 0:
            continue  # every feature constant here: impure leaf

        nl = 0
        for q in range(start, end):
            if X[idx[q], best_feat] <= best_thr:
                buf[nl] = idx[q]
                nl += 1
        nr = nl
        for q in range(start, end):
            if X[idx[q], best_feat] > best_thr:
                buf[nr] = idx[q]
                nr += 1
        for q in range(sz):
            idx[start + q] = buf[q]

        feature[node] = best_feat
        threshold[node] = best_thr
        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        left[node] = lid
        right[node] = rid
        stack_node[top] = rid
        stack_start[top] = start + nl
        stack_end[top] = end
        stack_depth[top] = depth + 1
        top += 1
        stack_node[top] = lid
        stack_start[top] = start
        stack_end[top] = start + nl
        stack_depth[top] = depth + 1
        top += 1

    return feature, threshold, left, right, counts, n_nodes


@jit
def build_grad_tree(X, order, g, h, l2_lambda, max_depth, min_split):
    """Level-wise regression tree on first/second-order gradients.

    `order` holds presorted sample indices per feature, shape (d, n) — shared
    across boosting rounds. Split gain is the second-order improvement
    GL^2/(HL+l2) + GR^2/(HR+l2) - G^2/(H+l2); leaves take -G/(H+l2).
    Returns (feature, threshold, left, right, leaf_value, n_nodes, node_of)
    where node_of maps each training sample to its leaf.
    """
    n = X.shape[0]
    d = X.shape[1]
    cap = 2 * n + 1
    full = (1 << (max_depth + 1)) - 1 if max_depth < 30 else cap
    max_nodes = min(cap, full)
    feature = np.full(max_nodes, -1, np.int64)
    threshold = np.zeros(max_nodes)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    leaf_value = np.zeros(max_nodes)
    node_g = np.zeros(max_nodes)
    node_h = np.zeros(max_nodes)
    node_n = np.zeros(max_nodes, np.int64)

    node_of = np.zeros(n, np.int64)
    node_g[0] = np.sum(g)
    node_h[0] = np.sum(h)
    node_n[0] = n
    n_nodes = 1

    in_level = np.zeros(max_nodes, np.uint8)
    in_level[0] = 1
    level_size = 1

    best_gain = np.zeros(max_nodes)
    best_feat = np.full(max_nodes, -1, np.int64)
    best_thr = np.zeros(max_nodes)
    gl = np.zeros(max_nodes)
    hl = np.zeros(max_nodes)
    cl = np.zeros(max_nodes, np.int64)
    last_val = np.zeros(max_nodes)
    has_last = np.zeros(max_nodes, np.uint8)

    depth = 0
    while depth < max_depth and level_size > 0:
        for v in range(n_nodes):
            best_gain[v] = 0.0
            best_feat[v] = -1
        for f in range(d):
            for v in range(n_nodes):
                gl[v] = 0.0
                hl[v] = 0.0
                cl[v] = 0
                has_last[v] = 0
            for pos in range(n):
                s = order[f, pos]
                nd = node_of[s]
                if in_level[nd] == 0 or node_n[nd] < min_split:
                    continue
                v = X[s, f]
                if has_last[nd] == 1 and v > last_val[nd] and cl[nd] >= 1:
                    gr = node_g[nd] - gl[nd]
                    hr = node_h[nd] - hl[nd]
                    den_l = hl[nd] + l2_lambda
                    den_r = hr + l2_lambda
                    den_p = node_h[nd] + l2_lambda
                    if den_l > 0.0 and den_r > 0.0 and den_p > 0.0:
                        gain = (
                            gl[nd] * gl[nd] / den_l
                            + gr * gr / den_r
                            - node_g[nd] * node_g[nd] / den_p
                        )
                        if gain > best_gain[nd]:
                            best_gain[nd] = gain
                            best_feat[nd] = f
                            best_thr[nd] = 0.5 * (last_val[nd] + v)
                gl[nd] += g[s]
                hl[nd] += h[s]
                cl[nd] += 1
                last_val[nd] = v
                has_last[nd] = 1

        # materialize the splits found at this level
        first_new = n_nodes
        for v in range(first_new):
            if in_level[v] == 1 and best_feat[v] >= 0 and n_nodes + 2 <= max_nodes:
                feature[v] = best_feat[v]
                threshold[v] = best_thr[v]
                left[v] = n_nodes
                right[v] = n_nodes + 1
                n_nodes += 2
        level_size = 0
        for v in range(first_new, n_nodes):
            in_level[v] = 1
            level_size += 1
        for s in range(n):
            nd = node_of[s]
            if feature[nd] >= 0:
                child = left[nd] if X[s, feature[nd]] <= threshold[nd] else right[nd]
                node_of[s] = child
                node_g[child] += g[s]
                node_h[child] += h[s]
                node_n[child] += 1
        for v in range(first_new):
            in_level[v] = 0
        depth += 1

    for v in range(n_nodes):
        if feature[v] < 0:
            den = node_h[v] + l2_lambda
            leaf_value[v] = -node_g[v] / den if den > 0.0 else 0.0

    return feature, threshold, left, right, leaf_value, n_nodes, node_of


@jit
def tree_apply(feature, threshold, left, right, X):
    """Leaf index reached by each row of X."""
    n = X.shape[0]
    out = np.empty(n, np.int64)
    for r in range(n):
        node = 0
        while feature[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = node
    return out
