"""Scaling benchmark: per-graph embedding time versus node count.

The per-graph pipeline (Laplacian eigendecomposition, Fourier-matrix Schur
form, one fractional power, powered sums, filtering) is eigendecomposition
dominated, so the log-log slope over growing N should sit near 3.
"""

from __future__ import annotations

import time

import numpy as np

from .embedding import _graph_feature_array
from .filters import default_bank
from .graphs import laplacian, random_graph
from .spectral import decompose


def time_single_graph(lap: np.ndarray, bank, omegas, alpha: float, repeats: int = 3) -> float:
    """Best-of-repeats wall time of the full per-graph embedding pipeline."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        dec = decompose(lap)
        dec.unitary_eigensystem
        _graph_feature_array(dec, bank, omegas, alpha, dec.size)
        best = min(best, time.perf_counter() - start)
    return best


def scaling_benchmark(sizes=(16, 32, 64, 128), graphs_per_size: int = 3,
                      alpha: float = 0.5, edge_prob: float = 0.4,
                      repeats: int = 3, seed: int = 7, omegas=range(6)) -> dict:
    """Median per-graph embedding time per size and the fitted log-log slope."""
    rng = np.random.default_rng(seed)
    bank = default_bank()
    omegas = list(omegas)
    times = []
    for n in sizes:
        laps = [laplacian(random_graph(n, edge_prob, rng, require_connected=True))
                for _ in range(graphs_per_size)]
        times.append(float(np.median(
            [time_single_graph(lap, bank, omegas, alpha, repeats) for lap in laps])))
    slope = float(np.polyfit(np.log(np.asarray(sizes, float)), np.log(times), 1)[0])
    return {"sizes": list(sizes), "seconds": times, "slope": slope,
            "alpha": alpha, "edge_prob": edge_prob,
            "graphs_per_size": graphs_per_size, "repeats": repeats, "seed": seed}
