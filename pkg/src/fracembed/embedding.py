"""Filtered, powered fractional spectra and their assembly into embedding rows.

A single feature for (filter k, power omega, order alpha) on one graph is

    f[l] = H_k(lambda_l) * sum_u (F^alpha[l, u]) ** omega,

realified by interleaving real/imaginary parts and zero-padded so graphs of
different sizes share one feature dimension. A full embedding row concatenates
the features filter-major, power-minor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .filters import FilterBank, canonical_filter_name, evaluate_filter
from .spectral import FractionalOperator, SpectralDecomposition, gfrft_matrix


@dataclass(eq=False)
class PowerSpectrum:
    """Powered-sum spectrum of one operator: values[l] = sum_u (F^alpha[l, u])**omega."""

    alpha: float
    omega: int
    values: np.ndarray


@dataclass(eq=False)
class EmbeddingFeature:
    """One realified, padded feature block keyed by (filter name, omega, alpha)."""

    filter_name: str
    omega: int
    alpha: float
    values: np.ndarray

    @property
    def key(self):
        return (self.filter_name, self.omega, self.alpha)


@dataclass(eq=False)
class EmbeddingMatrix:
    """Per-graph embedding rows plus the ordered block keys.

    Block order is filter-major, power-minor; every block has ``block_length``
    real entries (2 * padded node count, from Re/Im interleaving).
    """

    rows: np.ndarray
    column_blocks: list
    block_length: int

    def column_names(self) -> list:
        names = []
        for fname, omega, alpha in self.column_blocks:
            for i in range(self.block_length // 2):
                names.append(f"{fname}-{omega}-{alpha}[{i}][re]")
                names.append(f"{fname}-{omega}-{alpha}[{i}][im]")
        return names


def power_spectrum(op: FractionalOperator, omega: int) -> PowerSpectrum:
    """Powered row sums of F^alpha by repeated multiplication; 0**0 counts as 1."""
    if omega < 0 or int(omega) != omega:
        raise ValueError("power order must be a non-negative integer")
    values = _kernels.powered_row_sums(op.matrix, np.array([int(omega)]))[0]
    return PowerSpectrum(op.alpha, int(omega), values)


def realify(v: np.ndarray) -> np.ndarray:
    """Interleave real and imaginary parts; preserves Euclidean distances."""
    v = np.asarray(v, dtype=np.complex128)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def pad_to(v: np.ndarray, length: int) -> np.ndarray:
    """Zero-extend a vector on the right to the given length."""
    v = np.asarray(v)
    if v.size > length:
        raise ValueError(f"vector of length {v.size} exceeds padded length {length}")
    return np.pad(v, (0, length - v.size))


def feature(dec: SpectralDecomposition, op: FractionalOperator, spec, omega: int,
            dim: int = None, r_max: float = None, name: str = None) -> EmbeddingFeature:
    """One feature block: filter response times powered spectrum, realified and padded.

    ``dim`` is the padded complex length (dataset max node count); the stored
    real vector has 2*dim entries. Defaults to this graph's size.
    """
    responses = evaluate_filter(spec, dec.eigenvalues, r_max)
    spectrum = power_spectrum(op, omega)
    raw = responses * spectrum.values
    dim = dec.size if dim is None else int(dim)
    values = pad_to(realify(raw), 2 * dim)
    return EmbeddingFeature(name or canonical_filter_name(spec), int(omega), op.alpha, values)


def assemble(features: list) -> np.ndarray:
    """Concatenate feature blocks (given order) into one embedding row."""
    if not features:
        raise ValueError("no features to assemble")
    lengths = {f.values.size for f in features}
    if len(lengths) != 1:
        raise ValueError(f"inconsistent feature lengths: {sorted(lengths)}")
    return np.concatenate([f.values for f in features])


def bank_responses(dec: SpectralDecomposition, bank: FilterBank) -> np.ndarray:
    """Filter responses over one graph's eigenvalues, stacked (filters, N).

    Depends only on the decomposition, so callers sweeping the fractional
    order compute it once per graph.
    """
    return np.stack([evaluate_filter(spec, dec.eigenvalues) for _, spec in bank])


def _graph_feature_array(dec: SpectralDecomposition, bank: FilterBank, omegas, alpha: float,
                         dim: int, responses: np.ndarray = None) -> np.ndarray:
    """All (filter, omega) blocks of one graph at a shared alpha.

    Returns (filters, omegas, 2*dim): realified (Re/Im interleaved) and padded,
    ready to be flattened filter-major, power-minor.
    """
    op = gfrft_matrix(dec, alpha)
    omegas = np.asarray([int(w) for w in omegas], dtype=np.int64)
    spectra = _kernels.powered_row_sums(op.matrix, omegas)
    if responses is None:
        responses = bank_responses(dec, bank)
    raw = responses[:, None, :] * spectra[None, :, :]
    n = dec.size
    out = np.zeros((len(responses), len(omegas), 2 * dim))
    out[:, :, 0:2 * n:2] = raw.real
    out[:, :, 1:2 * n:2] = raw.imag
    return out


def embed_dataset(decompositions: list, bank: FilterBank, omegas, alpha: float,
                  dim: int = None, responses: list = None) -> EmbeddingMatrix:
    """Shared-alpha embedding: every (filter, omega) feature at one fractional order."""
    if dim is None:
        dim = max(d.size for d in decompositions)
    keys = [(fname, int(w), float(alpha)) for fname, _ in bank for w in omegas]
    rows = np.empty((len(decompositions), len(keys) * 2 * dim))
    for i, dec in enumerate(decompositions):
        resp = responses[i] if responses is not None else None
        rows[i] = _graph_feature_array(dec, bank, omegas, float(alpha), dim, resp).reshape(-1)
    return EmbeddingMatrix(rows, keys, 2 * dim)


def embed_dataset_mixed(decompositions: list, bank: FilterBank, plan: list,
                        dim: int = None) -> EmbeddingMatrix:
    """Per-feature-alpha embedding.

    ``plan`` is an ordered list of (filter name, omega, alpha) triples; each
    block is computed at its own order. Filters are looked up in ``bank``.
    """
    if dim is None:
        dim = max(d.size for d in decompositions)
    by_name = dict(bank)
    keys = []
    for fname, omega, alpha in plan:
        if fname not in by_name:
            raise ValueError(f"filter {fname!r} not present in the bank")
        keys.append((fname, int(omega), float(alpha)))
    rows = np.empty((len(decompositions), len(keys) * 2 * dim))
    for i, dec in enumerate(decompositions):
        ops = {}
        parts = []
        for fname, omega, alpha in keys:
            if alpha not in ops:
                ops[alpha] = gfrft_matrix(dec, alpha)
            parts.append(feature(dec, ops[alpha], by_name[fname], omega,
                                 dim=dim, name=fname).values)
        rows[i] = np.concatenate(parts)
    return EmbeddingMatrix(rows, keys, 2 * dim)


def all_feature_rows(decompositions: list, bank: FilterBank, omegas, alpha: float,
                     dim: int = None, responses: list = None) -> dict:
    """Rows for every (filter, omega) candidate at one alpha, sharing the per-graph work.

    Returns {(filter name, omega): rows array} with rows aligned to the
    decomposition order.
    """
    if dim is None:
        dim = max(d.size for d in decompositions)
    omegas = [int(w) for w in omegas]
    out = {(fname, w): np.empty((len(decompositions), 2 * dim))
           for fname, _ in bank for w in omegas}
    names = bank.names
    for i, dec in enumerate(decompositions):
        resp = responses[i] if responses is not None else None
        arr = _graph_feature_array(dec, bank, omegas, float(alpha), dim, resp)
        for fi, fname in enumerate(names):
            for wi, w in enumerate(omegas):
                out[(fname, w)][i] = arr[fi, wi]
    return out
