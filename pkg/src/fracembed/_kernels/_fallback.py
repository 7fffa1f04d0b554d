"""Pure-numpy reference implementations of the hot kernels.

Semantics here are the contract; the Cython module in _native.pyx must produce
identical kNN predictions and matching (to rounding) powered sums.
"""

import numpy as np


def powered_row_sums(matrix, omegas):
    """Row-wise powered sums: out[j, l] = sum_u matrix[l, u] ** omegas[j].

    Integer powers by repeated multiplication; omega = 0 contributes N per row
    (0**0 counts as 1).
    """
    matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
    omegas = np.asarray(omegas, dtype=np.int64)
    if omegas.size and omegas.min() < 0:
        raise ValueError("power orders must be non-negative")
    n = matrix.shape[0]
    out = np.empty((len(omegas), n), dtype=np.complex128)
    slots = {}
    for j, w in enumerate(omegas):
        slots.setdefault(int(w), []).append(j)
    if 0 in slots:
        for j in slots[0]:
            out[j, :] = complex(matrix.shape[1])
    top = int(omegas.max()) if omegas.size else 0
    power = None
    for w in range(1, top + 1):
        power = matrix.copy() if power is None else power * matrix
        for j in slots.get(w, ()):
            out[j, :] = power.sum(axis=1)
    return out


def prepare_neighbor_lists(d2, m):
    """Per-row candidate lists sorted by (distance, index).

    Must contain at least the m smallest entries of each row plus every entry
    tied with the m-th value. This reference version simply keeps the full
    stable argsort of each row, which trivially satisfies the contract.
    """
    d2 = np.ascontiguousarray(d2, dtype=np.float64)
    n_rows, n_cols = d2.shape
    order = np.argsort(d2, axis=1, kind="stable").astype(np.int32)
    flat = order.ravel()
    offsets = np.arange(n_rows + 1, dtype=np.int64) * n_cols
    return flat, offsets


def predict_with_folds(nbr_flat, nbr_offsets, label_codes, fold_of, k):
    """Predict every sample's class from its k nearest out-of-fold neighbors.

    Neighbors are taken in (distance, index) order from the precomputed
    candidate lists, skipping entries in the sample's own fold. Majority vote;
    vote ties go to the nearest neighbor's class when it is among the tied
    classes, otherwise to the smallest tied class code.
    """
    n = len(nbr_offsets) - 1
    label_codes = np.asarray(label_codes, dtype=np.int64)
    fold_of = np.asarray(fold_of, dtype=np.int32)
    n_classes = int(label_codes.max()) + 1 if n else 0
    preds = np.empty(n, dtype=np.int64)
    for i in range(n):
        own = fold_of[i]
        counts = [0] * n_classes
        nearest = -1
        found = 0
        for j in nbr_flat[nbr_offsets[i]:nbr_offsets[i + 1]]:
            if fold_of[j] == own:
                continue
            c = label_codes[j]
            if found == 0:
                nearest = c
            counts[c] += 1
            found += 1
            if found == k:
                break
        if found < k:
            raise ValueError(f"fewer than k={k} training neighbors available for sample {i}")
        best = max(counts)
        if counts[nearest] == best:
            preds[i] = nearest
        else:
            preds[i] = counts.index(best)
    return preds
