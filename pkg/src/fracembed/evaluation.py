"""k-nearest-neighbor classification with repeated k-fold cross-validation.

All tie-breaking is fully deterministic: neighbors are ordered by
(distance, row index), and vote ties go to the nearest neighbor's class when
it is among the tied classes, else to the smallest class id. Per-repeat
shuffles derive from np.random.SeedSequence(seed).spawn(repeats), so a report
is a pure function of (rows, labels, config).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class EvalConfig:
    neighbors: int = 5
    folds: int = 5
    repeats: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.neighbors < 1:
            raise ValueError("neighbors must be >= 1")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


def pairwise_sq_distances(rows: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance matrix via the Gram expansion (shared by both backends)."""
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    gram = rows @ rows.T
    sq = np.diag(gram).copy()
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    np.maximum(d2, 0.0, out=d2)
    return d2


def neighbor_scores(rows: np.ndarray) -> np.ndarray:
    """Per-row monotone transform of squared distances: scores[i, j] = |x_j|^2 - 2<x_i, x_j>.

    Row-wise ordering (and exact ties) match pairwise_sq_distances up to the
    constant |x_i|^2 shift, which is all the neighbor selection needs; skipping
    the shift saves two full broadcast passes per evaluation.
    """
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    gram = rows @ rows.T
    sq = np.diag(gram).copy()
    np.multiply(gram, -2.0, out=gram)
    gram += sq[None, :]
    return gram


def _majority_vote(neighbor_codes: np.ndarray, n_classes: int) -> int:
    counts = np.bincount(neighbor_codes, minlength=n_classes)
    best = counts.max()
    nearest = neighbor_codes[0]
    if counts[nearest] == best:
        return int(nearest)
    return int(np.flatnonzero(counts == best)[0])


def knn_predict(train_rows: np.ndarray, train_labels: np.ndarray, query: np.ndarray,
                k: int):
    """Majority label among the k nearest training rows (Euclidean).

    Distance ties break toward the lower row index; vote ties toward the single
    nearest neighbor's class, then the smaller class id.
    """
    train_rows = np.asarray(train_rows, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    if train_rows.ndim != 2 or len(train_rows) == 0:
        raise ValueError("training set must be a non-empty 2-D array")
    if len(train_labels) != len(train_rows):
        raise ValueError("labels do not align with training rows")
    if k > len(train_rows):
        raise ValueError(f"k={k} exceeds {len(train_rows)} training rows")
    diff = train_rows - np.asarray(query, dtype=np.float64)[None, :]
    d2 = np.einsum("ij,ij->i", diff, diff)
    order = np.argsort(d2, kind="stable")[:k]
    classes, codes = np.unique(train_labels, return_inverse=True)
    return classes[_majority_vote(codes[order], len(classes))]


def fold_assignments(n: int, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Random partition into near-equal folds; returns the fold id of each sample."""
    perm = rng.permutation(n)
    out = np.empty(n, dtype=np.int32)
    base = n // folds
    extra = n % folds
    start = 0
    for f in range(folds):
        size = base + (1 if f < extra else 0)
        out[perm[start:start + size]] = f
        start += size
    return out


def _repeat_rngs(cfg: EvalConfig) -> list:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.repeats)]


class NeighborTable:
    """Precomputed (score, index)-ordered candidate lists for one score matrix.

    Accepts squared distances or any per-row monotone transform of them (see
    neighbor_scores). Reused across every repeat/fold of a cross-validation:
    candidate lists hold at least neighbors + max-fold-size entries per row,
    so k out-of-fold neighbors are always available during the walk.
    """

    def __init__(self, scores: np.ndarray, cfg: EvalConfig):
        n = scores.shape[0]
        margin = math.ceil(n / cfg.folds)
        self.n = n
        self.flat, self.offsets = _kernels.prepare_neighbor_lists(
            scores, min(n, cfg.neighbors + margin))

    def predict(self, label_codes: np.ndarray, fold_of: np.ndarray, k: int) -> np.ndarray:
        return _kernels.predict_with_folds(self.flat, self.offsets, label_codes, fold_of, k)


def _check_cv_inputs(n: int, labels: np.ndarray, cfg: EvalConfig):
    if len(labels) != n:
        raise ValueError("labels do not align with rows")
    if n < cfg.folds:
        raise ValueError(f"{n} samples is fewer than {cfg.folds} folds")
    min_train = n - math.ceil(n / cfg.folds)
    if cfg.neighbors > min_train:
        raise ValueError(
            f"k={cfg.neighbors} exceeds the smallest training split ({min_train})")
    if len(np.unique(labels)) < 2:
        raise ValueError("classification needs at least 2 distinct classes")


def cross_validate_table(table: NeighborTable, labels: np.ndarray, cfg: EvalConfig,
                         detail: bool = False):
    """Repeated k-fold CV over a prepared neighbor table; mean of all fold accuracies."""
    labels = np.asarray(labels)
    _check_cv_inputs(table.n, labels, cfg)
    _, codes = np.unique(labels, return_inverse=True)
    codes = codes.astype(np.int64)
    fold_acc = np.empty((cfg.repeats, cfg.folds))
    for r, rng in enumerate(_repeat_rngs(cfg)):
        fold_of = fold_assignments(table.n, cfg.folds, rng)
        preds = table.predict(codes, fold_of, cfg.neighbors)
        correct = preds == codes
        for f in range(cfg.folds):
            mask = fold_of == f
            fold_acc[r, f] = correct[mask].mean()
    mean = float(fold_acc.mean())
    if detail:
        return mean, fold_acc
    return mean


def cross_validate(rows: np.ndarray, labels: np.ndarray, cfg: EvalConfig,
                   detail: bool = False):
    """Mean accuracy of a 'neighbors'-NN classifier under repeated k-fold CV."""
    rows = np.asarray(rows, dtype=np.float64)
    table = NeighborTable(neighbor_scores(rows), cfg)
    return cross_validate_table(table, labels, cfg, detail=detail)
