"""Numba kernels for tree growth and the SVM subgradient loop.

The random choices inside the kernels (bootstrap draws, per-split feature
subsets, epoch shuffles) consume the same splitmix64 stream documented in
``avsafety.rng``, re-implemented here on uint64 so the kernels stay
self-contained and deterministic. Trees are emitted as parallel node
arrays: ``feat[i] == -1`` marks a leaf, internal nodes route rows with
``x[feat] <= thr`` to ``left`` and the rest to ``right``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_LO32 = U64(0xFFFFFFFF)


@njit(cache=True, inline="always")
def _next_u64(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return state, z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def _next_below(state, n):
    # multiply-shift: floor(u * n / 2^64), via 32-bit limbs
    state, u = _next_u64(state)
    x_lo = u & _LO32
    x_hi = u >> U64(32)
    y = U64(n)
    y_lo = y & _LO32
    y_hi = y >> U64(32)
    cross = ((x_lo * y_lo) >> U64(32)) + ((x_hi * y_lo) & _LO32) + x_lo * y_hi
    hi = x_hi * y_hi + ((x_hi * y_lo) >> U64(32)) + (cross >> U64(32))
    return state, np.int64(hi)


@njit(cache=True, inline="always")
def _next_float(state):
    state, u = _next_u64(state)
    return state, np.float64(u >> U64(11)) * (2.0**-53)


@njit(cache=True)
def rand_below_sequence(seed, n, bound):
    """Debug helper: the first n draws of next_below(bound) from seed."""
    out = np.empty(n, np.int64)
    state = U64(seed)
    for i in range(n):
        state, v = _next_below(state, bound)
        out[i] = v
    return out


@njit(cache=True)
def grow_gini_tree(X, y, max_depth, mtry, seed, bootstrap):
    """Grow one CART tree (Gini impurity, midpoint thresholds).

    The seed stream is consumed in this order: bootstrap row draws (when
    bootstrap != 0), then per-node feature subsets in depth-first,
    left-child-first node order. Candidate features are scanned in
    ascending index order and the first best split wins ties.

    Returns (feat, thr, left, right, n_incident, n_serious) node arrays.
    """
    n = X.shape[0]
    n_features = X.shape[1]
    state = U64(seed)

    idx = np.empty(n, np.int64)
    if bootstrap != 0:
        for i in range(n):
            state, j = _next_below(state, n)
            idx[i] = j
    else:
        for i in range(n):
            idx[i] = i

    max_nodes = 2 * n + 1
    feat = np.full(max_nodes, -1, np.int64)
    thr = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    c_inc = np.zeros(max_nodes, np.int64)
    c_ser = np.zeros(max_nodes, np.int64)

    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    sp = 0
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n
    stack_depth[0] = 0
    sp = 1
    n_nodes = 1

    pool = np.empty(n_features, np.int64)
    buf = np.empty(n, np.int64)

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        start = stack_start[sp]
        end = stack_end[sp]
        depth = stack_depth[sp]
        m = end - start

        n1 = 0
        for i in range(start, end):
            n1 += y[idx[i]]
        n0 = m - n1
        c_inc[node] = n0
        c_ser[node] = n1

        if depth >= max_depth or n0 == 0 or n1 == 0 or m < 2:
            continue

        # feature subset: partial Fisher-Yates from the front, then sorted
        for i in range(n_features):
            pool[i] = i
        k = mtry if mtry < n_features else n_features
        for i in range(k):
            state, j = _next_below(state, n_features - i)
            tmp = pool[i]
            pool[i] = pool[i + j]
            pool[i + j] = tmp
        chosen = np.sort(pool[:k])

        best_q = -1.0
        best_f = -1
        best_t = 0.0
        vals = np.empty(m, np.float64)
        labs = np.empty(m, np.uint8)
        for fi in range(k):
            f = chosen[fi]
            for i in range(m):
                row = idx[start + i]
                vals[i] = X[row, f]
                labs[i] = y[row]
            order = np.argsort(vals)
            nl0 = 0
            nl1 = 0
            for pos in range(m - 1):
                o = order[pos]
                if labs[o] == 1:
                    nl1 += 1
                else:
                    nl0 += 1
                v = vals[o]
                vn = vals[order[pos + 1]]
                if v == vn:
                    continue
                nl = pos + 1
                nr = m - nl
                nr0 = n0 - nl0
                nr1 = n1 - nl1
                q = (
                    np.float64(nl0 * nl0 + nl1 * nl1) / nl
                    + np.float64(nr0 * nr0 + nr1 * nr1) / nr
                )
                if q > best_q:
                    best_q = q
                    best_f = f
                    best_t = 0.5 * (v + vn)
        if best_f < 0:
            continue

        # stable partition by the chosen split
        nl = 0
        nr = 0
        for i in range(start, end):
            row = idx[i]
            if X[row, best_f] <= best_t:
                idx[start + nl] = row
                nl += 1
            else:
                buf[nr] = row
                nr += 1
        for i in range(nr):
            idx[start + nl + i] = buf[i]

        feat[node] = best_f
        thr[node] = best_t
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        left[node] = left_id
        right[node] = right_id
        stack_node[sp] = right_id
        stack_start[sp] = start + nl
        stack_end[sp] = end
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = left_id
        stack_start[sp] = start
        stack_end[sp] = start + nl
        stack_depth[sp] = depth + 1
        sp += 1

    return (
        feat[:n_nodes],
        thr[:n_nodes],
        left[:n_nodes],
        right[:n_nodes],
        c_inc[:n_nodes],
        c_ser[:n_nodes],
    )


@njit(cache=True)
def grow_newton_tree(X, grad, hess, max_depth, reg_lambda):
    """Grow one second-order boosting tree.

    Split gain is the standard half-sum-of-squares improvement with leaf
    regularization reg_lambda; a node splits only when the best gain is
    strictly positive. All features are scanned (no column subsampling),
    ascending index order, first best split wins ties.

    Returns (feat, thr, left, right, leaf_weight); leaf weights are the
    raw Newton steps -G/(H + reg_lambda), unscaled.
    """
    n = X.shape[0]
    n_features = X.shape[1]

    max_nodes = 2 * n + 1
    feat = np.full(max_nodes, -1, np.int64)
    thr = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    weight = np.zeros(max_nodes, np.float64)

    idx = np.arange(n)
    buf = np.empty(n, np.int64)

    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n
    stack_depth[0] = 0
    sp = 1
    n_nodes = 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        start = stack_start[sp]
        end = stack_end[sp]
        depth = stack_depth[sp]
        m = end - start

        g_sum = 0.0
        h_sum = 0.0
        for i in range(start, end):
            g_sum += grad[idx[i]]
            h_sum += hess[idx[i]]
        parent_score = g_sum * g_sum / (h_sum + reg_lambda)

        best_gain = 0.0
        best_f = -1
        best_t = 0.0
        if depth < max_depth and m >= 2:
            vals = np.empty(m, np.float64)
            gs = np.empty(m, np.float64)
            hs = np.empty(m, np.float64)
            for f in range(n_features):
                for i in range(m):
                    row = idx[start + i]
                    vals[i] = X[row, f]
                    gs[i] = grad[row]
                    hs[i] = hess[row]
                order = np.argsort(vals)
                gl = 0.0
                hl = 0.0
                for pos in range(m - 1):
                    o = order[pos]
                    gl += gs[o]
                    hl += hs[o]
                    v = vals[o]
                    vn = vals[order[pos + 1]]
                    if v == vn:
                        continue
                    gr = g_sum - gl
                    hr = h_sum - hl
                    gain = 0.5 * (
                        gl * gl / (hl + reg_lambda)
                        + gr * gr / (hr + reg_lambda)
                        - parent_score
                    )
                    if gain > best_gain:
                        best_gain = gain
                        best_f = f
                        best_t = 0.5 * (v + vn)

        if best_f < 0:
            weight[node] = -g_sum / (h_sum + reg_lambda)
            continue

        nl = 0
        nr = 0
        for i in range(start, end):
            row = idx[i]
            if X[row, best_f] <= best_t:
                idx[start + nl] = row
                nl += 1
            else:
                buf[nr] = row
                nr += 1
        for i in range(nr):
            idx[start + nl + i] = buf[i]

        feat[node] = best_f
        thr[node] = best_t
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        left[node] = left_id
        right[node] = right_id
        stack_node[sp] = right_id
        stack_start[sp] = start + nl
        stack_end[sp] = end
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = left_id
        stack_start[sp] = start
        stack_end[sp] = start + nl
        stack_depth[sp] = depth + 1
        sp += 1

    return (
        feat[:n_nodes],
        thr[:n_nodes],
        left[:n_nodes],
        right[:n_nodes],
        weight[:n_nodes],
    )


@njit(cache=True)
def tree_leaf_ids(feat, thr, left, right, X):
    """Leaf node id reached by each row of X."""
    n = X.shape[0]
    out = np.empty(n, np.int64)
    for r in range(n):
        node = 0
        while feat[node] >= 0:
            if X[r, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = node
    return out


@njit(cache=True)
def pegasos_train(Xa, ysign, reg_lambda, epochs, seed):
    """Averaged Pegasos on the augmented design matrix Xa (bias column last).

    Step t uses learning rate 1/(reg_lambda * t); each epoch visits the
    rows in a fresh Fisher-Yates order. Returns the average of the
    post-step iterates.
    """
    n, d = Xa.shape
    w = np.zeros(d, np.float64)
    w_sum = np.zeros(d, np.float64)
    order = np.arange(n)
    state = U64(seed)
    t = 0
    for _ in range(epochs):
        for i in range(n - 1, 0, -1):
            state, j = _next_below(state, i + 1)
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
        for oi in range(n):
            i = order[oi]
            t += 1
            margin = 0.0
            for k in range(d):
                margin += w[k] * Xa[i, k]
            margin *= ysign[i]
            scale = 1.0 - 1.0 / t
            for k in range(d):
                w[k] *= scale
            if margin < 1.0:
                c = ysign[i] / (reg_lambda * t)
                for k in range(d):
                    w[k] += c * Xa[i, k]
            for k in range(d):
                w_sum[k] += w[k]
    return w_sum / t
