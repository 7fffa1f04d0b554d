"""Fractional-order grid search and greedy forward feature selection."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .embedding import all_feature_rows, bank_responses, embed_dataset
from .evaluation import EvalConfig, cross_validate
from .filters import FilterBank, canonical_filter_name


def _cv_many(indices, make_rows, labels, cfg: EvalConfig, threads: int) -> list:
    """Cross-validate make_rows(i) for each index; ordered results, optional threads.

    Rows are built inside the workers so at most ``threads`` row matrices are
    alive at once. The distance kernels and BLAS release the GIL, so a thread
    pool gives real parallelism; results are gathered in index order, making
    accuracies independent of the thread count.
    """
    indices = list(indices)

    def run(i):
        return cross_validate(make_rows(i), labels, cfg)

    if threads and threads > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, indices))
    return [run(i) for i in indices]


@dataclass(frozen=True)
class AlphaGrid:
    """Inclusive fractional-order grid; must contain alpha = 1 exactly."""

    lo: float = -3.0
    hi: float = 3.0
    step: float = 0.02

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.lo >= self.hi:
            raise ValueError("lo must be below hi")
        ratio = (1.0 - self.lo) / self.step
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError("grid must contain alpha = 1 (lo + k*step = 1)")

    def values(self) -> np.ndarray:
        """Grid points, with near-integer values snapped exactly (so 1.0 is exact)."""
        count = int(round((self.hi - self.lo) / self.step)) + 1
        vals = self.lo + self.step * np.arange(count)
        near = np.abs(vals - np.round(vals)) < 1e-9
        vals[near] = np.round(vals[near])
        return vals


def _tie_beats(alpha_new: float, alpha_old: float) -> bool:
    """Tie rule between equal accuracies: smaller |alpha - 1| wins, then smaller alpha."""
    da, db = abs(alpha_new - 1.0), abs(alpha_old - 1.0)
    if da != db:
        return da < db
    return alpha_new < alpha_old


def _grid_values(grid) -> np.ndarray:
    """An AlphaGrid or any explicit sequence of orders (e.g. [1.0])."""
    if isinstance(grid, AlphaGrid):
        return grid.values()
    values = np.asarray(list(grid), dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty fractional-order grid")
    return values


@dataclass(eq=False)
class AccuracyReport:
    """Per-alpha cross-validated accuracies and the winning order."""

    alphas: np.ndarray
    accuracies: np.ndarray
    best_alpha: float
    best_accuracy: float
    detail: dict = field(default_factory=dict)

    def as_pairs(self) -> list:
        return [(float(a), float(c)) for a, c in zip(self.alphas, self.accuracies)]


def _best_alpha_index(alphas: np.ndarray, accuracies: np.ndarray) -> int:
    best = np.max(accuracies)
    tied = np.flatnonzero(accuracies == best)
    order = np.lexsort((alphas[tied], np.abs(alphas[tied] - 1.0)))
    return int(tied[order[0]])


def grid_search_alpha(decompositions: list, labels: np.ndarray, bank: FilterBank,
                      omegas, grid: AlphaGrid, cfg: EvalConfig,
                      progress=None) -> AccuracyReport:
    """Shared-alpha search: embed every (filter, omega) feature at each grid point.

    Records the cross-validated accuracy per alpha and the maximum; accuracy
    ties on the winning alpha resolve toward the point closest to 1, then the
    smaller alpha.
    """
    labels = np.asarray(labels)
    alphas = _grid_values(grid)
    accuracies = np.empty(len(alphas))
    dim = max(d.size for d in decompositions)
    responses = [bank_responses(dec, bank) for dec in decompositions]
    for i, alpha in enumerate(alphas):
        rows = embed_dataset(decompositions, bank, omegas, float(alpha), dim=dim,
                             responses=responses).rows
        accuracies[i] = cross_validate(rows, labels, cfg)
        if progress is not None:
            progress(i + 1, len(alphas))
    best = _best_alpha_index(alphas, accuracies)
    return AccuracyReport(alphas, accuracies, float(alphas[best]), float(accuracies[best]))


@dataclass(eq=False)
class FeatureSearchResult:
    """Winning order for one (filter, omega) candidate."""

    filter_name: str
    omega: int
    best_alpha: float
    best_accuracy: float
    rows: np.ndarray
    per_alpha: np.ndarray = None

    @property
    def key(self):
        return (self.filter_name, self.omega, self.best_alpha)


def search_all_features(decompositions: list, labels: np.ndarray, bank: FilterBank,
                        omegas, grid: AlphaGrid, cfg: EvalConfig, dim: int = None,
                        progress=None, threads: int = 0) -> list:
    """Per-feature alpha search for every (filter, omega) candidate at once.

    The per-graph transform work at each alpha is shared across the whole
    candidate pool, which is what makes traversing the full grid tractable.
    Only each candidate's current best rows are retained. Results come back in
    bank-major, omega-minor order with per-alpha accuracy traces.
    """
    labels = np.asarray(labels)
    if dim is None:
        dim = max(d.size for d in decompositions)
    alphas = _grid_values(grid)
    keys = [(fname, int(w)) for fname, _ in bank for w in omegas]
    acc = np.empty((len(keys), len(alphas)))
    best = {key: None for key in keys}  # key -> (accuracy, alpha, rows)
    responses = [bank_responses(dec, bank) for dec in decompositions]
    for i, alpha in enumerate(alphas):
        alpha = float(alpha)
        candidate_rows = all_feature_rows(decompositions, bank, omegas, alpha, dim=dim,
                                          responses=responses)
        # omega = 0 spectra are the constant N, so those rows (and their
        # accuracy) do not depend on alpha: evaluate them only at the first point
        todo = [j for j, key in enumerate(keys) if key[1] != 0 or i == 0]
        evaluated = _cv_many(todo, lambda j: candidate_rows[keys[j]], labels, cfg, threads)
        for j, value in zip(todo, evaluated):
            acc[j, i] = value
        for j, key in enumerate(keys):
            if key[1] == 0 and i > 0:
                acc[j, i] = acc[j, 0]
            cur = best[key]
            if cur is None or acc[j, i] > cur[0] or (
                    acc[j, i] == cur[0] and _tie_beats(alpha, cur[1])):
                best[key] = (acc[j, i], alpha, candidate_rows[key])
        if progress is not None:
            progress(i + 1, len(alphas))
    results = []
    for j, key in enumerate(keys):
        acc_best, alpha_best, rows_best = best[key]
        results.append(FeatureSearchResult(
            key[0], key[1], alpha_best, float(acc_best), rows_best,
            per_alpha=acc[j].copy()))
    return results


def per_feature_alpha_search(decompositions: list, labels: np.ndarray, spec, omega: int,
                             grid: AlphaGrid, cfg: EvalConfig,
                             name: str = None, dim: int = None) -> FeatureSearchResult:
    """Traverse the grid for a single (filter, omega) feature and keep the best order.

    Ties prefer the alpha closest to 1, then the smaller alpha.
    """
    bank = FilterBank(((name or canonical_filter_name(spec), spec),))
    return search_all_features(decompositions, labels, bank, [int(omega)], grid, cfg,
                               dim=dim)[0]


@dataclass(eq=False)
class SelectionResult:
    """Greedy forward-selection outcome: chosen keys in order and the accuracy trace."""

    selected: list
    trace: list
    accuracy: float


def forward_select(candidates: list, labels: np.ndarray, cfg: EvalConfig,
                   threads: int = 0) -> SelectionResult:
    """Greedy forward selection over (key, rows) candidates.

    Starts from the best single candidate, then repeatedly adds the candidate
    with the greatest strict accuracy improvement; list order breaks ties. The
    recorded trace is strictly increasing by construction.
    """
    if not candidates:
        raise ValueError("candidate set is empty")
    labels = np.asarray(labels)
    remaining = list(range(len(candidates)))
    picked = []
    trace = []
    current_rows = None
    current_acc = -1.0
    while remaining:
        def combine(idx):
            rows = candidates[idx][1]
            return rows if current_rows is None else np.hstack([current_rows, rows])

        accs = _cv_many(remaining, combine, labels, cfg, threads)
        best_idx = None
        best_acc = current_acc
        for idx, acc in zip(remaining, accs):
            if acc > best_acc:
                best_idx, best_acc = idx, acc
        if best_idx is None:
            break
        picked.append(candidates[best_idx][0])
        trace.append(float(best_acc))
        current_rows, current_acc = combine(best_idx), best_acc
        remaining.remove(best_idx)
    return SelectionResult(picked, trace, float(current_acc))
