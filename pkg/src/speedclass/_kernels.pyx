# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False, language_level=3

"""Compiled tree kernels.

Operation-for-operation mirror of ``speedclass._kernels_py``: identical
node visit order, the same stable sort key (value, position), identical
floating-point accumulation sequences, the same split score formula with
strict-improvement acceptance, and a shared splitmix64 stream for feature
subsampling.  Any behavioural change must land in both modules; the parity
test suite compares whole trees across backends.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t
from libcpp.algorithm cimport sort as cpp_sort
from libcpp.pair cimport pair
from libcpp.vector cimport vector

cnp.import_array()

ctypedef pair[double, int64_t] ValuePos

cdef struct Frame:
    int64_t start
    int64_t end
    int64_t depth
    int64_t node


cdef inline uint64_t _mix(uint64_t* state) nogil:
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15u
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9u
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBu
    return z ^ (z >> 31)


cdef void _draw_features(uint64_t* state, int64_t n_features, int64_t n_draw,
                         vector[int64_t]& pool, vector[int64_t]& out) nogil:
    """Partial Fisher-Yates draw of ``n_draw`` distinct features into
    ``out``, ascending."""
    cdef int64_t i, j, tmp, key
    pool.resize(n_features)
    for i in range(n_features):
        pool[i] = i
    out.resize(n_draw)
    for i in range(n_draw):
        j = i + <int64_t>(_mix(state) % <uint64_t>(n_features - i))
        tmp = pool[i]
        pool[i] = pool[j]
        pool[j] = tmp
        out[i] = pool[i]
    # insertion sort (n_draw is small)
    for i in range(1, n_draw):
        key = out[i]
        j = i - 1
        while j >= 0 and out[j] > key:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = key


def grow_tree_classification(X, y, sample_weight, n_classes, max_depth=-1,
                             min_samples_split=2, max_features=0,
                             feature_seed=0):
    """Grow a Gini-criterion classification tree.

    Returns ``(feature, threshold, left, right, counts, train_leaf)`` where
    ``counts[i]`` holds the weighted class counts of node ``i`` and
    ``train_leaf[s]`` the leaf each training sample lands in.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int32)
    w = np.ascontiguousarray(sample_weight, dtype=np.float64)

    cdef double[:, ::1] Xv = X
    cdef int32_t[::1] yv = y
    cdef double[::1] wv = w
    cdef int64_t n = Xv.shape[0]
    cdef int64_t n_feat = Xv.shape[1]
    cdef int64_t K = int(n_classes)
    cdef int64_t md = int(max_depth)
    cdef int64_t mss = int(min_samples_split)
    cdef int64_t mf = int(max_features)
    cdef uint64_t rng = <uint64_t>(int(feature_seed) & ((1 << 64) - 1))
    cdef bint subsample = 0 < mf < n_feat

    cdef int64_t cap = 2 * n + 1
    feature_arr = np.empty(cap, dtype=np.int32)
    threshold_arr = np.zeros(cap, dtype=np.float64)
    left_arr = np.full(cap, -1, dtype=np.int32)
    right_arr = np.full(cap, -1, dtype=np.int32)
    counts_arr = np.zeros((cap, K), dtype=np.float64)
    train_leaf_arr = np.empty(n, dtype=np.int32)
    idx_arr = np.arange(n, dtype=np.int64)
    scratch_arr = np.empty(n, dtype=np.int64)

    cdef int32_t[::1] feature = feature_arr
    cdef double[::1] threshold = threshold_arr
    cdef int32_t[::1] left = left_arr
    cdef int32_t[::1] right = right_arr
    cdef double[:, ::1] counts = counts_arr
    cdef int32_t[::1] train_leaf = train_leaf_arr
    cdef int64_t[::1] idx = idx_arr
    cdef int64_t[::1] scratch = scratch_arr

    cdef vector[Frame] stack
    cdef vector[ValuePos] pairs
    cdef vector[double] cwl
    cdef vector[double] totals
    cdef vector[int64_t] pool
    cdef vector[int64_t] cand
    cwl.resize(K)
    totals.resize(K)

    cdef Frame frame
    cdef int64_t next_id = 1
    cdef int64_t start, end, depth, node, m, p, i, j, k, si
    cdef int64_t n_cand, c, nl, best_feat
    cdef int32_t first_label
    cdef bint pure, is_leaf, has_local
    cdef double w_total, w_left, w_right, ssq_left, ssq_right
    cdef double cl, cr, g_left, g_right, score, thr
    cdef double best_score, local_best, local_thr

    frame.start = 0
    frame.end = n
    frame.depth = 0
    frame.node = 0
    stack.push_back(frame)

    while stack.size() > 0:
        frame = stack.back()
        stack.pop_back()
        start = frame.start
        end = frame.end
        depth = frame.depth
        node = frame.node
        m = end - start

        for p in range(start, end):
            si = idx[p]
            counts[node, yv[si]] += wv[si]

        first_label = yv[idx[start]]
        pure = True
        for p in range(start + 1, end):
            if yv[idx[p]] != first_label:
                pure = False
                break

        is_leaf = m < mss or (md >= 0 and depth >= md) or pure

        best_score = np.inf
        best_feat = -1
        thr = 0.0
        if not is_leaf:
            if subsample:
                _draw_features(&rng, n_feat, mf, pool, cand)
                n_cand = mf
            else:
                cand.resize(n_feat)
                for i in range(n_feat):
                    cand[i] = i
                n_cand = n_feat

            for c in range(n_cand):
                j = cand[c]
                pairs.resize(m)
                for p in range(m):
                    pairs[p].first = Xv[idx[start + p], j]
                    pairs[p].second = p
                cpp_sort(pairs.begin(), pairs.end())
                if pairs[0].first == pairs[m - 1].first:
                    continue

                # totals in sorted order, mirroring the fallback's cumsum
                w_total = 0.0
                for k in range(K):
                    totals[k] = 0.0
                for i in range(m):
                    si = idx[start + pairs[i].second]
                    w_total += wv[si]
                    totals[yv[si]] += wv[si]

                for k in range(K):
                    cwl[k] = 0.0
                w_left = 0.0
                local_best = np.inf
                local_thr = 0.0
                has_local = False
                for i in range(m - 1):
                    si = idx[start + pairs[i].second]
                    w_left += wv[si]
                    cwl[yv[si]] += wv[si]
                    if pairs[i + 1].first > pairs[i].first:
                        w_right = w_total - w_left
                        ssq_left = 0.0
                        ssq_right = 0.0
                        for k in range(K):
                            cl = cwl[k]
                            cr = totals[k] - cl
                            ssq_left += cl * cl
                            ssq_right += cr * cr
                        g_left = 1.0 - ssq_left / (w_left * w_left)
                        g_right = 1.0 - ssq_right / (w_right * w_right)
                        score = (w_left * g_left + w_right * g_right) / w_total
                        if not has_local or score < local_best:
                            local_best = score
                            local_thr = 0.5 * (pairs[i].first + pairs[i + 1].first)
                            has_local = True
                if has_local and local_best < best_score:
                    best_score = local_best
                    best_feat = j
                    thr = local_thr

            if best_feat < 0:
                is_leaf = True

        if is_leaf:
            feature[node] = -1
            for p in range(start, end):
                train_leaf[idx[p]] = <int32_t>node
            continue

        feature[node] = <int32_t>best_feat
        threshold[node] = thr
        nl = 0
        for p in range(start, end):
            if Xv[idx[p], best_feat] <= thr:
                scratch[nl] = idx[p]
                nl += 1
        i = nl
        for p in range(start, end):
            if not (Xv[idx[p], best_feat] <= thr):
                scratch[i] = idx[p]
                i += 1
        for p in range(m):
            idx[start + p] = scratch[p]

        left[node] = <int32_t>next_id
        right[node] = <int32_t>(next_id + 1)
        frame.start = start + nl
        frame.end = end
        frame.depth = depth + 1
        frame.node = next_id + 1
        stack.push_back(frame)
        frame.start = start
        frame.end = start + nl
        frame.node = next_id
        stack.push_back(frame)
        next_id += 2

    return (
        feature_arr[:next_id].copy(),
        threshold_arr[:next_id].copy(),
        left_arr[:next_id].copy(),
        right_arr[:next_id].copy(),
        counts_arr[:next_id].copy(),
        train_leaf_arr,
    )


def grow_tree_regression(X, target, max_depth=-1, min_samples_split=2):
    """Grow a squared-error regression tree.

    Returns ``(feature, threshold, left, right, value, train_leaf)`` where
    ``value[i]`` is the mean target of node ``i``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    target = np.ascontiguousarray(target, dtype=np.float64)

    cdef double[:, ::1] Xv = X
    cdef double[::1] tv = target
    cdef int64_t n = Xv.shape[0]
    cdef int64_t n_feat = Xv.shape[1]
    cdef int64_t md = int(max_depth)
    cdef int64_t mss = int(min_samples_split)

    cdef int64_t cap = 2 * n + 1
    feature_arr = np.empty(cap, dtype=np.int32)
    threshold_arr = np.zeros(cap, dtype=np.float64)
    left_arr = np.full(cap, -1, dtype=np.int32)
    right_arr = np.full(cap, -1, dtype=np.int32)
    value_arr = np.zeros(cap, dtype=np.float64)
    train_leaf_arr = np.empty(n, dtype=np.int32)
    idx_arr = np.arange(n, dtype=np.int64)
    scratch_arr = np.empty(n, dtype=np.int64)

    cdef int32_t[::1] feature = feature_arr
    cdef double[::1] threshold = threshold_arr
    cdef int32_t[::1] left = left_arr
    cdef int32_t[::1] right = right_arr
    cdef double[::1] value = value_arr
    cdef int32_t[::1] train_leaf = train_leaf_arr
    cdef int64_t[::1] idx = idx_arr
    cdef int64_t[::1] scratch = scratch_arr

    cdef vector[Frame] stack
    cdef vector[ValuePos] pairs

    cdef Frame frame
    cdef int64_t next_id = 1
    cdef int64_t start, end, depth, node, m, p, i, j, si, nl, best_feat
    cdef bint pure, is_leaf, has_local
    cdef double t_sum, t_min, t_max, s_total, s_left, s_right
    cdef double n_total, n_left, n_right, score, thr, v
    cdef double best_score, local_best, local_thr

    frame.start = 0
    frame.end = n
    frame.depth = 0
    frame.node = 0
    stack.push_back(frame)

    while stack.size() > 0:
        frame = stack.back()
        stack.pop_back()
        start = frame.start
        end = frame.end
        depth = frame.depth
        node = frame.node
        m = end - start

        t_sum = 0.0
        t_min = tv[idx[start]]
        t_max = t_min
        for p in range(start, end):
            v = tv[idx[p]]
            t_sum += v
            if v < t_min:
                t_min = v
            if v > t_max:
                t_max = v
        value[node] = t_sum / m
        pure = t_max == t_min

        is_leaf = m < mss or (md >= 0 and depth >= md) or pure

        best_score = np.inf
        best_feat = -1
        thr = 0.0
        if not is_leaf:
            for j in range(n_feat):
                pairs.resize(m)
                for p in range(m):
                    pairs[p].first = Xv[idx[start + p], j]
                    pairs[p].second = p
                cpp_sort(pairs.begin(), pairs.end())
                if pairs[0].first == pairs[m - 1].first:
                    continue

                s_total = 0.0
                for i in range(m):
                    s_total += tv[idx[start + pairs[i].second]]
                n_total = <double>m

                s_left = 0.0
                local_best = np.inf
                local_thr = 0.0
                has_local = False
                for i in range(m - 1):
                    s_left += tv[idx[start + pairs[i].second]]
                    if pairs[i + 1].first > pairs[i].first:
                        n_left = <double>(i + 1)
                        s_right = s_total - s_left
                        n_right = n_total - n_left
                        score = -(s_left * s_left / n_left + s_right * s_right / n_right)
                        if not has_local or score < local_best:
                            local_best = score
                            local_thr = 0.5 * (pairs[i].first + pairs[i + 1].first)
                            has_local = True
                if has_local and local_best < best_score:
                    best_score = local_best
                    best_feat = j
                    thr = local_thr

            if best_feat < 0:
                is_leaf = True

        if is_leaf:
            feature[node] = -1
            for p in range(start, end):
                train_leaf[idx[p]] = <int32_t>node
            continue

        feature[node] = <int32_t>best_feat
        threshold[node] = thr
        nl = 0
        for p in range(start, end):
            if Xv[idx[p], best_feat] <= thr:
                scratch[nl] = idx[p]
                nl += 1
        i = nl
        for p in range(start, end):
            if not (Xv[idx[p], best_feat] <= thr):
                scratch[i] = idx[p]
                i += 1
        for p in range(m):
            idx[start + p] = scratch[p]

        left[node] = <int32_t>next_id
        right[node] = <int32_t>(next_id + 1)
        frame.start = start + nl
        frame.end = end
        frame.depth = depth + 1
        frame.node = next_id + 1
        stack.push_back(frame)
        frame.start = start
        frame.end = start + nl
        frame.node = next_id
        stack.push_back(frame)
        next_id += 2

    return (
        feature_arr[:next_id].copy(),
        threshold_arr[:next_id].copy(),
        left_arr[:next_id].copy(),
        right_arr[:next_id].copy(),
        value_arr[:next_id].copy(),
        train_leaf_arr,
    )


def apply_tree(feature, threshold, left, right, X):
    """Route every row of ``X`` to its leaf; returns leaf node ids."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    feature = np.ascontiguousarray(feature, dtype=np.int32)
    threshold = np.ascontiguousarray(threshold, dtype=np.float64)
    left = np.ascontiguousarray(left, dtype=np.int32)
    right = np.ascontiguousarray(right, dtype=np.int32)

    cdef double[:, ::1] Xv = X
    cdef int32_t[::1] fv = feature
    cdef double[::1] tv = threshold
    cdef int32_t[::1] lv = left
    cdef int32_t[::1] rv = right
    cdef int64_t n = Xv.shape[0]

    out_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] out = out_arr
    cdef int64_t i
    cdef int32_t node

    with nogil:
        for i in range(n):
            node = 0
            while fv[node] >= 0:
                if Xv[i, fv[node]] <= tv[node]:
                    node = lv[node]
                else:
                    node = rv[node]
            out[i] = node
    return out_arr
