"""Content-addressed cache of spectral decompositions.

Entries are keyed by a hash of the edge list, written atomically, and
validated on load; a corrupted or stale entry is recomputed and overwritten.
"""

from __future__ import annotations

import hashlib
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .graphs import Graph, LabeledDataset, laplacian
from .spectral import SpectralDecomposition, decompose

log = logging.getLogger(__name__)

_ORTHO_TOL = 1e-10


def graph_content_key(graph: Graph) -> str:
    text = f"{graph.node_count}|" + ";".join(f"{a},{b}" for a, b in graph.sorted_edges())
    return hashlib.sha256(text.encode()).hexdigest()


class DecompositionCache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.npz"

    def _validate(self, dec: SpectralDecomposition, lap: np.ndarray) -> bool:
        lam, vec = dec.eigenvalues, dec.eigenvectors
        n = lap.shape[0]
        if lam.shape != (n,) or vec.shape != (n, n):
            return False
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(vec))):
            return False
        if np.linalg.norm(vec.T @ vec - np.eye(n)) > _ORTHO_TOL:
            return False
        recon = (vec * lam) @ vec.T
        scale = max(1.0, np.linalg.norm(lap))
        return np.linalg.norm(recon - lap) <= _ORTHO_TOL * scale

    def get(self, graph: Graph) -> SpectralDecomposition:
        key = graph_content_key(graph)
        path = self._path(key)
        lap = laplacian(graph)
        if path.exists():
            try:
                with np.load(path) as data:
                    dec = SpectralDecomposition(data["eigenvalues"], data["eigenvectors"])
                if self._validate(dec, lap):
                    return dec
                log.warning("cache entry %s failed validation; recomputing", path.name)
            except Exception as exc:
                log.warning("cache entry %s unreadable (%s); recomputing", path.name, exc)
        dec = decompose(lap)
        tmp = path.with_name(f"{path.name}.{os.getpid()}.tmp")
        try:
            with open(tmp, "wb") as fh:
                np.savez(fh, eigenvalues=dec.eigenvalues, eigenvectors=dec.eigenvectors)
            os.replace(tmp, path)
        finally:
            if tmp.exists():
                tmp.unlink()
        return dec


def cache_decompositions(dataset: LabeledDataset, cache_dir) -> DecompositionCache:
    """Populate (or refresh) the decomposition cache for a dataset; returns the handle."""
    cache = DecompositionCache(cache_dir)
    for graph in dataset.graphs:
        cache.get(graph)
    return cache


def decompositions_for(dataset: LabeledDataset, cache_dir=None, threads: int = 0) -> list:
    """Spectral decompositions for every graph, in dataset order.

    The unitary eigensystem of each Fourier matrix is touched eagerly so the
    expensive per-graph work happens here (optionally across threads; LAPACK
    releases the GIL) instead of lazily inside the first grid-search step.
    ``threads`` = 0 means one worker per available core; results are collected
    in dataset order either way.
    """
    cache = DecompositionCache(cache_dir) if cache_dir else None

    def build(graph: Graph) -> SpectralDecomposition:
        dec = cache.get(graph) if cache else decompose(laplacian(graph))
        dec.unitary_eigensystem  # noqa: B018 - warm the cached property
        return dec

    if not threads:
        threads = os.cpu_count() or 1
    if threads > 1 and len(dataset) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(build, dataset.graphs))
    return [build(g) for g in dataset.graphs]
