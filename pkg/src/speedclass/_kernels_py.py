"""Pure-numpy tree kernels: the fallback backend.

These functions mirror the compiled extension (``speedclass._kernels``)
operation for operation.  Both backends must produce bit-identical trees:
they visit nodes in the same order, sort samples with the same stable key
(value, position), accumulate sums in the same sequence, use the same
split score formula with strict-improvement acceptance, and share the
splitmix64 stream for per-node feature subsampling.  Keep any change here
in lockstep with ``_kernels.pyx``.

Tree encoding (flat, preorder node ids):
  feature[i]   split feature, -1 for leaves
  threshold[i] split threshold; samples with x <= threshold go left
  left[i], right[i]  child node ids, -1 for leaves
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + _GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return state, z


def _draw_features(state: int, n_features: int, n_draw: int) -> tuple[int, np.ndarray]:
    """Partial Fisher-Yates draw of ``n_draw`` distinct features, returned
    in ascending order."""
    feats = list(range(n_features))
    for i in range(n_draw):
        state, z = _splitmix64(state)
        j = i + z % (n_features - i)
        feats[i], feats[j] = feats[j], feats[i]
    return state, np.sort(np.asarray(feats[:n_draw], dtype=np.int64))


def _best_split_classification(xv, yv, wv, n_classes):
    """Best (threshold, score) on one feature column of one node, or None.

    Scans midpoints between consecutive distinct sorted values; the first
    strict minimum of the weighted child Gini wins (lowest threshold).
    """
    order = np.argsort(xv, kind="stable")
    xs = xv[order]
    if xs[0] == xs[-1]:
        return None
    ws = wv[order]
    scatter = np.zeros((xs.shape[0], n_classes))
    scatter[np.arange(xs.shape[0]), yv[order]] = ws
    cw = np.cumsum(scatter, axis=0)
    wl = np.cumsum(ws)
    w_total = wl[-1]
    totals = cw[-1]

    bounds = np.nonzero(xs[1:] > xs[:-1])[0]
    w_left = wl[bounds]
    w_right = w_total - w_left
    ssq_left = np.zeros(bounds.shape[0])
    ssq_right = np.zeros(bounds.shape[0])
    for k in range(n_classes):
        cl = cw[bounds, k]
        cr = totals[k] - cl
        ssq_left += cl * cl
        ssq_right += cr * cr
    g_left = 1.0 - ssq_left / (w_left * w_left)
    g_right = 1.0 - ssq_right / (w_right * w_right)
    score = (w_left * g_left + w_right * g_right) / w_total

    b = int(np.argmin(score))
    p = int(bounds[b])
    return 0.5 * (xs[p] + xs[p + 1]), float(score[b])


def _best_split_regression(xv, tv):
    """Best (threshold, score) minimizing child squared error, or None.
    Score is the negated sum of per-child (sum^2 / count) terms."""
    order = np.argsort(xv, kind="stable")
    xs = xv[order]
    if xs[0] == xs[-1]:
        return None
    ts = tv[order]
    sl = np.cumsum(ts)
    s_total = sl[-1]
    n_total = float(xs.shape[0])

    bounds = np.nonzero(xs[1:] > xs[:-1])[0]
    s_left = sl[bounds]
    n_left = (bounds + 1).astype(np.float64)
    s_right = s_total - s_left
    n_right = n_total - n_left
    score = -(s_left * s_left / n_left + s_right * s_right / n_right)

    b = int(np.argmin(score))
    p = int(bounds[b])
    return 0.5 * (xs[p] + xs[p + 1]), float(score[b])


def _grow(X, y, w, target, n_classes, max_depth, min_samples_split, max_features, feature_seed):
    """Shared growth loop; classification when ``y`` is not None, else
    regression on ``target``."""
    n, n_total_features = X.shape
    classification = y is not None
    subsample = 0 < max_features < n_total_features
    rng_state = int(feature_seed) & _MASK64

    idx = np.arange(n, dtype=np.int64)
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    counts: list[np.ndarray] = []  # classification
    value: list[float] = []  # regression
    train_leaf = np.empty(n, dtype=np.int32)

    # stack entries: (start, end, depth, node_id); right child pushed first
    # so the left subtree is processed (and numbered) before the right.
    stack = [(0, n, 0, 0)]
    next_id = 1
    feature.append(-2)  # placeholders, filled when the node is processed
    threshold.append(0.0)
    left.append(-1)
    right.append(-1)
    if classification:
        counts.append(np.zeros(n_classes))
    else:
        value.append(0.0)

    while stack:
        start, end, depth, node = stack.pop()
        node_idx = idx[start:end]
        m = end - start

        if classification:
            node_counts = np.bincount(y[node_idx], weights=w[node_idx], minlength=n_classes)
            counts[node] = node_counts
            pure = np.unique(y[node_idx]).shape[0] == 1
        else:
            t_node = target[node_idx]
            s = float(np.cumsum(t_node)[-1])
            value[node] = s / m
            pure = float(t_node.max()) == float(t_node.min())

        is_leaf = (
            m < min_samples_split
            or (max_depth >= 0 and depth >= max_depth)
            or pure
        )

        best = None  # (score, feature, threshold)
        if not is_leaf:
            if subsample:
                rng_state, cand = _draw_features(rng_state, n_total_features, max_features)
            else:
                cand = np.arange(n_total_features, dtype=np.int64)
            for j in cand:
                res = _best_split_classification(
                    X[node_idx, j], y[node_idx], w[node_idx], n_classes
                ) if classification else _best_split_regression(X[node_idx, j], target[node_idx])
                if res is None:
                    continue
                thr, score = res
                if best is None or score < best[0]:
                    best = (score, int(j), thr)
            if best is None:
                is_leaf = True

        if is_leaf:
            feature[node] = -1
            train_leaf[node_idx] = node
            continue

        _, j, thr = best
        feature[node] = j
        threshold[node] = thr
        mask = X[node_idx, j] <= thr
        n_left_child = int(np.count_nonzero(mask))
        # stable partition: both children keep the parent's relative order
        idx[start:end] = np.concatenate([node_idx[mask], node_idx[~mask]])

        left_id, right_id = next_id, next_id + 1
        next_id += 2
        left[node] = left_id
        right[node] = right_id
        for _ in range(2):
            feature.append(-2)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            if classification:
                counts.append(np.zeros(n_classes))
            else:
                value.append(0.0)
        stack.append((start + n_left_child, end, depth + 1, right_id))
        stack.append((start, start + n_left_child, depth + 1, left_id))

    out = (
        np.asarray(feature, dtype=np.int32),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
    )
    if classification:
        return out + (np.asarray(counts), train_leaf)
    return out + (np.asarray(value, dtype=np.float64), train_leaf)


def grow_tree_classification(
    X, y, sample_weight, n_classes, max_depth=-1, min_samples_split=2,
    max_features=0, feature_seed=0,
):
    """Grow a Gini-criterion classification tree.

    Returns ``(feature, threshold, left, right, counts, train_leaf)`` where
    ``counts[i]`` holds the weighted class counts of node ``i`` and
    ``train_leaf[s]`` the leaf each training sample lands in.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int32)
    w = np.ascontiguousarray(sample_weight, dtype=np.float64)
    return _grow(X, y, w, None, int(n_classes), int(max_depth),
                 int(min_samples_split), int(max_features), int(feature_seed))


def grow_tree_regression(X, target, max_depth=-1, min_samples_split=2):
    """Grow a squared-error regression tree.

    Returns ``(feature, threshold, left, right, value, train_leaf)`` where
    ``value[i]`` is the mean target of node ``i``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    t = np.ascontiguousarray(target, dtype=np.float64)
    return _grow(X, None, None, t, 0, int(max_depth), int(min_samples_split), 0, 0)


def apply_tree(feature, threshold, left, right, X):
    """Route every row of ``X`` to its leaf; returns leaf node ids."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    node = np.zeros(X.shape[0], dtype=np.int32)
    while True:
        f = feature[node]
        internal = f >= 0
        if not internal.any():
            return node
        rows = np.nonzero(internal)[0]
        cur = node[rows]
        go_left = X[rows, f[rows]] <= threshold[cur]
        node[rows] = np.where(go_left, left[cur], right[cur])
