"""Compiled inner loops: tree growing, tree traversal, nearest neighbours, MLP SGD."""
import math

import numpy as np
from numba import njit

NUMERIC = 0  # x <= midpoint goes left
BINARY = 1  # x <= lower value goes left
CATEGORICAL = 2  # x == value goes left

_MIN_GAIN = 1e-12


@njit(cache=True)
def _entropy(n0, n1):
    n = n0 + n1
    h = 0.0
    if n0 > 0:
        p = n0 / n
        h -= p * math.log2(p)
    if n1 > 0:
        p = n1 / n
        h -= p * math.log2(p)
    return h


@njit(cache=True)
def _score(parent_h, l0, l1, r0, r1, use_gain_ratio):
    nl = l0 + l1
    nr = r0 + r1
    m = nl + nr
    gain = parent_h - (nl / m) * _entropy(l0, l1) - (nr / m) * _entropy(r0, r1)
    if gain <= _MIN_GAIN:
        return -1.0
    if use_gain_ratio:
        return gain / _entropy(nl, nr)
    return gain


@njit(cache=True)
def _split_feature(X, y, rows, f, kind, min_leaf, use_gain_ratio, parent_h, n0, n1):
    """Best (score, threshold) for one feature over ``rows``; score -1 when none."""
    m = rows.shape[0]
    vals = np.empty(m)
    for i in range(m):
        vals[i] = X[rows[i], f]
    best = -1.0
    best_thr = 0.0
    if kind == CATEGORICAL:
        cats = np.unique(vals)
        if cats.shape[0] < 2:
            return best, best_thr
        for c in cats:
            l0 = 0
            l1 = 0
            for i in range(m):
                if vals[i] == c:
                    if y[rows[i]] == 1:
                        l1 += 1
                    else:
                        l0 += 1
            if l0 + l1 < min_leaf or m - l0 - l1 < min_leaf:
                continue
            s = _score(parent_h, l0, l1, n0 - l0, n1 - l1, use_gain_ratio)
            if s > best:
                best = s
                best_thr = c
        return best, best_thr
    order = np.argsort(vals, kind="mergesort")
    l0 = 0
    l1 = 0
    for j in range(m - 1):
        i = order[j]
        if y[rows[i]] == 1:
            l1 += 1
        else:
            l0 += 1
        a = vals[i]
        b = vals[order[j + 1]]
        if a == b:
            continue
        nl = j + 1
        if nl < min_leaf:
            continue
        if m - nl < min_leaf:
            break
        s = _score(parent_h, l0, l1, n0 - l0, n1 - l1, use_gain_ratio)
        if s > best:
            best = s
            best_thr = a if kind == BINARY else (a + b) / 2.0
    return best, best_thr


@njit(cache=True)
def grow_tree(X, y, rows, kinds, min_leaf, max_depth, use_gain_ratio, max_features, seed):
    """Grow a binary tree on ``X[rows]`` (rows may repeat, e.g. a bootstrap).

    Returns node arrays (feature, threshold, left, right, count0, count1, n_nodes).
    Features are scanned in index order, or in a seeded random order when
    ``max_features`` is below the feature count; in that case scanning goes
    on past ``max_features`` only until some split with positive gain turns up.
    """
    p = X.shape[1]
    n = rows.shape[0]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    count0 = np.zeros(cap, dtype=np.int64)
    count1 = np.zeros(cap, dtype=np.int64)
    if n == 0:
        return feature[:1], threshold[:1], left[:1], right[:1], count0[:1], count1[:1], 1
    subsample = max_features < p
    if subsample:
        np.random.seed(seed)
    work = rows.copy()
    buf = np.empty(n, dtype=np.int64)
    st_node = np.empty(cap, dtype=np.int64)
    st_start = np.empty(cap, dtype=np.int64)
    st_end = np.empty(cap, dtype=np.int64)
    st_depth = np.empty(cap, dtype=np.int64)
    top = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n
    st_depth[0] = 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        node = st_node[top]
        s = st_start[top]
        e = st_end[top]
        d = st_depth[top]
        n0 = 0
        n1 = 0
        for i in range(s, e):
            if y[work[i]] == 1:
                n1 += 1
            else:
                n0 += 1
        count0[node] = n0
        count1[node] = n1
        m = e - s
        if n0 == 0 or n1 == 0 or m < 2 * min_leaf or (max_depth >= 0 and d >= max_depth):
            continue
        parent_h = _entropy(n0, n1)
        seg = work[s:e]
        if subsample:
            order = np.random.permutation(p)
        else:
            order = np.arange(p)
        best = -1.0
        best_f = -1
        best_thr = 0.0
        for t in range(p):
            if subsample and t >= max_features and best > 0.0:
                break
            f = order[t]
            sc, thr = _split_feature(X, y, seg, f, kinds[f], min_leaf, use_gain_ratio,
                                     parent_h, n0, n1)
            if sc > best:
                best = sc
                best_f = f
                best_thr = thr
        if best_f < 0:
            continue
        # stable partition: left rows first
        kind = kinds[best_f]
        nl = 0
        nr = 0
        for i in range(s, e):
            r = work[i]
            v = X[r, best_f]
            go_left = v == best_thr if kind == CATEGORICAL else v <= best_thr
            if go_left:
                work[s + nl] = r
                nl += 1
            else:
                buf[nr] = r
                nr += 1
        for i in range(nr):
            work[s + nl + i] = buf[i]
        feature[node] = best_f
        threshold[node] = best_thr
        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        left[node] = lc
        right[node] = rc
        # right pushed first so the left subtree is expanded first
        st_node[top] = rc
        st_start[top] = s + nl
        st_end[top] = e
        st_depth[top] = d + 1
        top += 1
        st_node[top] = lc
        st_start[top] = s
        st_end[top] = s + nl
        st_depth[top] = d + 1
        top += 1
    return (feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes],
            count0[:n_nodes], count1[:n_nodes], n_nodes)


@njit(cache=True)
def apply_tree(X, kinds, feature, threshold, left, right):
    """Leaf index reached by each row of ``X``."""
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        node = 0
        while left[node] >= 0:
            f = feature[node]
            v = X[i, f]
            if kinds[f] == CATEGORICAL:
                go_left = v == threshold[node]
            else:
                go_left = v <= threshold[node]
            node = left[node] if go_left else right[node]
        out[i] = node
    return out


@njit(cache=True)
def nearest_neighbours(train, query, k):
    """Indices of the ``k`` nearest training rows per query row.

    Exact squared Euclidean distances; ties are ordered by training index.
    """
    nq = query.shape[0]
    nt = train.shape[0]
    p = train.shape[1]
    out = np.empty((nq, k), dtype=np.int64)
    for q in range(nq):
        best_d = np.full(k, np.inf)
        best_i = np.full(k, nt, dtype=np.int64)
        for t in range(nt):
            dist = 0.0
            for j in range(p):
                diff = query[q, j] - train[t, j]
                dist += diff * diff
            if dist < best_d[k - 1]:
                pos = k - 1
                while pos > 0 and best_d[pos - 1] > dist:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = dist
                best_i[pos] = t
        for j in range(k):
            out[q, j] = best_i[j]
    return out


@njit(cache=True)
def _sigmoid(z):
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


@njit(cache=True)
def mlp_sgd(X, y, W1, b1, w2, b2, lr, momentum, epochs, order):
    """Per-instance backprop with momentum on squared error; updates in place.

    ``order`` fixes the presentation order of instances within every epoch.
    """
    n, p = X.shape
    h = W1.shape[1]
    dW1 = np.zeros_like(W1)
    db1 = np.zeros_like(b1)
    dw2 = np.zeros_like(w2)
    db2 = 0.0
    hid = np.empty(h)
    for _ in range(epochs):
        for t in range(n):
            i = order[t]
            for j in range(h):
                z = b1[j]
                for a in range(p):
                    z += X[i, a] * W1[a, j]
                hid[j] = _sigmoid(z)
            z = b2
            for j in range(h):
                z += hid[j] * w2[j]
            o = _sigmoid(z)
            delta_o = (o - y[i]) * o * (1.0 - o)
            for j in range(h):
                delta_h = delta_o * w2[j] * hid[j] * (1.0 - hid[j])
                dw2[j] = -lr * delta_o * hid[j] + momentum * dw2[j]
                for a in range(p):
                    dW1[a, j] = -lr * delta_h * X[i, a] + momentum * dW1[a, j]
                    W1[a, j] += dW1[a, j]
                db1[j] = -lr * delta_h + momentum * db1[j]
                b1[j] += db1[j]
            for j in range(h):
                w2[j] += dw2[j]
            db2 = -lr * delta_o + momentum * db2
            b2 += db2
    return b2
