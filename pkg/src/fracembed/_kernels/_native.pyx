# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: fused powered row sums and kNN candidate selection/voting.

Same contracts as _fallback.py; kNN predictions must match it exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

cnp.import_array()


def powered_row_sums(matrix, omegas):
    """Row-wise powered sums: out[j, l] = sum_u matrix[l, u] ** omegas[j]."""
    cdef double complex[:, ::1] m = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef cnp.int64_t[::1] om = np.ascontiguousarray(omegas, dtype=np.int64)
    cdef Py_ssize_t n_om = om.shape[0]
    cdef Py_ssize_t nrow = m.shape[0]
    cdef Py_ssize_t ncol = m.shape[1]
    cdef Py_ssize_t j, l, u, w
    cdef cnp.int64_t top = 0
    for j in range(n_om):
        if om[j] < 0:
            raise ValueError("power orders must be non-negative")
        if om[j] > top:
            top = om[j]
    out_arr = np.zeros((n_om, nrow), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex *acc = <double complex *> malloc(sizeof(double complex) * (top + 1))
    if acc == NULL:
        raise MemoryError()
    cdef double complex p
    try:
        with nogil:
            for l in range(nrow):
                for w in range(1, top + 1):
                    acc[w] = 0
                for u in range(ncol):
                    p = 1
                    for w in range(1, top + 1):
                        p = p * m[l, u]
                        acc[w] = acc[w] + p
                for j in range(n_om):
                    if om[j] == 0:
                        out[j, l] = ncol
                    else:
                        out[j, l] = acc[om[j]]
    finally:
        free(acc)
    return out_arr


cdef struct Pair:
    double v
    cnp.int32_t i


cdef inline bint _pair_less(Pair a, Pair b) noexcept nogil:
    if a.v != b.v:
        return a.v < b.v
    return a.i < b.i


cdef double _kth_value(double *a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    """Quickselect (Hoare partition, median-of-three pivot); modifies a."""
    cdef Py_ssize_t lo = 0, hi = n - 1, i, j, mid
    cdef double pivot, tmp
    while lo < hi:
        mid = lo + (hi - lo) // 2
        if a[mid] < a[lo]:
            tmp = a[mid]; a[mid] = a[lo]; a[lo] = tmp
        if a[hi] < a[lo]:
            tmp = a[hi]; a[hi] = a[lo]; a[lo] = tmp
        if a[hi] < a[mid]:
            tmp = a[hi]; a[hi] = a[mid]; a[mid] = tmp
        pivot = a[mid]
        i = lo - 1
        j = hi + 1
        while True:
            i += 1
            while a[i] < pivot:
                i += 1
            j -= 1
            while a[j] > pivot:
                j -= 1
            if i >= j:
                break
            tmp = a[i]; a[i] = a[j]; a[j] = tmp
        if k <= j:
            hi = j
        else:
            lo = j + 1
    return a[lo]


cdef void _sort_pairs(Pair *a, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    """In-place quicksort by (value, index); insertion sort for short runs."""
    cdef Py_ssize_t i, j, mid
    cdef Pair pivot, tmp
    while hi - lo > 16:
        mid = lo + (hi - lo) // 2
        if _pair_less(a[mid], a[lo]):
            tmp = a[mid]; a[mid] = a[lo]; a[lo] = tmp
        if _pair_less(a[hi], a[lo]):
            tmp = a[hi]; a[hi] = a[lo]; a[lo] = tmp
        if _pair_less(a[hi], a[mid]):
            tmp = a[hi]; a[hi] = a[mid]; a[mid] = tmp
        pivot = a[mid]
        i = lo - 1
        j = hi + 1
        while True:
            i += 1
            while _pair_less(a[i], pivot):
                i += 1
            j -= 1
            while _pair_less(pivot, a[j]):
                j -= 1
            if i >= j:
                break
            tmp = a[i]; a[i] = a[j]; a[j] = tmp
        # recurse into the smaller side, loop on the larger
        if j - lo < hi - j - 1:
            _sort_pairs(a, lo, j)
            lo = j + 1
        else:
            _sort_pairs(a, j + 1, hi)
            hi = j
    for i in range(lo + 1, hi + 1):
        tmp = a[i]
        j = i - 1
        while j >= lo and _pair_less(tmp, a[j]):
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = tmp


def prepare_neighbor_lists(d2, m):
    """Per-row candidates: the m smallest entries plus boundary ties, (value, index) sorted.

    Two passes per row: a value-only quickselect finds the m-th smallest score,
    then every entry at or below it (so all boundary ties) is collected in
    index order and sorted by (value, index).
    """
    cdef double[:, ::1] dist = np.ascontiguousarray(d2, dtype=np.float64)
    cdef Py_ssize_t nrow = dist.shape[0]
    cdef Py_ssize_t ncol = dist.shape[1]
    cdef Py_ssize_t keep = m if m < ncol else ncol
    cdef Py_ssize_t i, j, c
    cdef double thresh

    offsets_arr = np.zeros(nrow + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] offsets = offsets_arr
    thresh_arr = np.empty(max(nrow, 1), dtype=np.float64)
    cdef double[::1] thresholds = thresh_arr

    cdef double *buf = <double *> malloc(sizeof(double) * max(ncol, 1))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(nrow):
                memcpy(buf, &dist[i, 0], sizeof(double) * ncol)
                thresh = _kth_value(buf, ncol, keep - 1) if keep > 0 else 0.0
                thresholds[i] = thresh
                c = 0
                for j in range(ncol):
                    if dist[i, j] <= thresh:
                        c += 1
                offsets[i + 1] = offsets[i] + c
    finally:
        free(buf)

    flat_arr = np.empty(offsets_arr[nrow], dtype=np.int32)
    cdef cnp.int32_t[::1] flat = flat_arr
    cdef Pair *pairs = <Pair *> malloc(sizeof(Pair) * max(ncol, 1))
    if pairs == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(nrow):
                thresh = thresholds[i]
                c = 0
                for j in range(ncol):
                    if dist[i, j] <= thresh:
                        pairs[c].v = dist[i, j]
                        pairs[c].i = <cnp.int32_t> j
                        c += 1
                _sort_pairs(pairs, 0, c - 1)
                for j in range(c):
                    flat[offsets[i] + j] = pairs[j].i
    finally:
        free(pairs)
    return flat_arr, offsets_arr


def predict_with_folds(nbr_flat, nbr_offsets, label_codes, fold_of, k):
    """Predict each sample from its k nearest out-of-fold neighbors (see fallback docs)."""
    cdef cnp.int32_t[::1] flat = np.ascontiguousarray(nbr_flat, dtype=np.int32)
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(nbr_offsets, dtype=np.int64)
    cdef cnp.int64_t[::1] labels = np.ascontiguousarray(label_codes, dtype=np.int64)
    cdef cnp.int32_t[::1] folds = np.ascontiguousarray(fold_of, dtype=np.int32)
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t i, pos, found, best, c, jlab
    cdef cnp.int32_t own, j
    cdef cnp.int64_t n_classes = 0
    cdef bint short_row = False

    for i in range(labels.shape[0]):
        if labels[i] + 1 > n_classes:
            n_classes = labels[i] + 1
    preds_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] preds = preds_arr
    cdef cnp.int64_t *counts = <cnp.int64_t *> malloc(sizeof(cnp.int64_t) * max(n_classes, 1))
    if counts == NULL:
        raise MemoryError()
    cdef cnp.int64_t nearest
    try:
        with nogil:
            for i in range(n):
                own = folds[i]
                memset(counts, 0, sizeof(cnp.int64_t) * n_classes)
                found = 0
                nearest = -1
                for pos in range(offsets[i], offsets[i + 1]):
                    j = flat[pos]
                    if folds[j] == own:
                        continue
                    if found == 0:
                        nearest = labels[j]
                    counts[labels[j]] += 1
                    found += 1
                    if found == kk:
                        break
                if found < kk:
                    short_row = True
                    break
                best = 0
                for c in range(n_classes):
                    if counts[c] > best:
                        best = counts[c]
                if counts[nearest] == best:
                    preds[i] = nearest
                else:
                    for c in range(n_classes):
                        if counts[c] == best:
                            preds[i] = c
                            break
    finally:
        free(counts)
    if short_row:
        raise ValueError(f"fewer than k={k} training neighbors available for a sample")
    return preds_arr
