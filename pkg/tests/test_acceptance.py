"""Acceptance gate: one test per criterion, each printing a PASS line.

Criteria 6 and 8 need the real benchmark datasets (not bundled). Point
FRACEMBED_DATA at a directory containing NCI1/, PROTEINS/, IMDB-MULTI/
(TUDataset flat files) and Letter-low/, Letter-med/, Letter-high/ (GXL+CXL);
those tests skip when the data is absent.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest

from fracembed.bench import scaling_benchmark
from fracembed.cache import decompositions_for
from fracembed.datasets import DatasetManifest, load_dataset
from fracembed.embedding import all_feature_rows, embed_dataset, feature
from fracembed.evaluation import EvalConfig, cross_validate
from fracembed.filters import HeatFilter, default_bank, evaluate_filter, heat_kernel_matrix
from fracembed.graphs import laplacian, random_graph
from fracembed.search import AlphaGrid, forward_select, grid_search_alpha, \
    search_all_features
from fracembed.spectral import (decompose, gfrft_alpha_derivative, gfrft_apply,
                                gfrft_inverse, gfrft_matrix)

from geffe_oracle import oracle_features

DATA_ROOT = Path(os.environ.get("FRACEMBED_DATA", "data"))

TABLE_STATS = {
    # name: (mean vertices, graphs, classes, format)
    "Letter-low": (4.68, 2250, 15, "gxl"),
    "Letter-med": (4.67, 2250, 15, "gxl"),
    "Letter-high": (4.67, 2250, 15, "gxl"),
    "PROTEINS": (39.06, 1113, 2, "tud"),
    "IMDB-MULTI": (13.00, 1500, 3, "tud"),
    "NCI1": (29.87, 4110, 2, "tud"),
}

REPRO_SEED = 20240601


def _has_dataset(name):
    root = DATA_ROOT / name
    if TABLE_STATS[name][3] == "tud":
        return (root / f"{name}_A.txt").exists()
    return root.exists() and any(root.glob("*.cxl"))


def _load(name):
    fmt = TABLE_STATS[name][3]
    return load_dataset(DatasetManifest(name, fmt, DATA_ROOT / name))


def test_criterion_1_transform_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    for _ in range(50):
        n = int(rng.integers(3, 13))
        dec = decompose(laplacian(random_graph(n, 0.4, rng, require_connected=True)))
        eye = np.eye(n)
        assert np.linalg.norm(gfrft_matrix(dec, 0.0).matrix - eye) <= 1e-10
        assert np.linalg.norm(gfrft_matrix(dec, 1.0).matrix - dec.gft) <= 1e-10
        for _ in range(20):
            a, b = rng.uniform(-3, 3, 2)
            fa = gfrft_matrix(dec, a).matrix
            fb = gfrft_matrix(dec, b).matrix
            assert np.linalg.norm(fa @ fb - gfrft_matrix(dec, a + b).matrix) <= 1e-8
            assert np.linalg.norm(fa @ fa.conj().T - eye) <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nPASS criterion 1: transform identities on 50 graphs ({elapsed:.2f}s)")


def test_criterion_2_alpha_gradient():
    start = time.perf_counter()
    rng = np.random.default_rng(1002)
    h = 1e-5
    for _ in range(10):
        n = int(rng.integers(3, 13))
        dec = decompose(laplacian(random_graph(n, 0.4, rng, require_connected=True)))
        for alpha in (-2.5, -1.0, 0.3, 1.7):
            analytic = gfrft_alpha_derivative(dec, alpha)
            fd = (gfrft_matrix(dec, alpha + h).matrix
                  - gfrft_matrix(dec, alpha - h).matrix) / (2 * h)
            rel = np.linalg.norm(analytic - fd) / np.linalg.norm(analytic)
            assert rel <= 1e-5
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nPASS criterion 2: analytic order-derivative vs central differences "
          f"({elapsed:.2f}s)")


def test_criterion_3_heat_kernel_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1003)
    for _ in range(20):
        n = int(rng.integers(3, 13))
        dec = decompose(laplacian(random_graph(n, 0.4, rng)))
        x = rng.normal(size=n)
        op = gfrft_matrix(dec, 1.0)
        inv = gfrft_inverse(op).matrix
        for t in (1, 3, 6):
            kernel_path = heat_kernel_matrix(dec, t) @ x
            response = evaluate_filter(HeatFilter(t), dec.eigenvalues)
            transform_path = inv @ (response * gfrft_apply(op, x).coefficients)
            assert np.linalg.norm(kernel_path - transform_path) <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nPASS criterion 3: heat kernel equals filtered transform ({elapsed:.2f}s)")


def test_criterion_4_alpha1_reduction_oracle():
    rng = np.random.default_rng(1004)
    omegas = range(6)
    bank = default_bank()
    for _ in range(20):
        n = int(rng.integers(3, 13))
        lap = laplacian(random_graph(n, 0.4, rng))
        dec = decompose(lap)
        op = gfrft_matrix(dec, 1.0)
        oracle = oracle_features(lap, omegas)
        for name, spec in bank:
            for omega in omegas:
                pipeline = feature(dec, op, spec, omega, name=name)
                assert np.max(np.abs(pipeline.values[1::2])) <= 1e-10
                assert np.max(np.abs(pipeline.values[0::2] - oracle[(name, omega)])) <= 1e-12
    print("\nPASS criterion 4: pipeline at alpha=1 matches the independent "
          "direct implementation to 1e-12")


def test_criterion_5_grid_dominance(toy_dataset, toy_decs):
    for filters, powers, seed in ((["H1"], [1, 2], 7), (["AH3", "X"], [0, 3], 99)):
        from fracembed.filters import FilterBank
        bank = FilterBank.from_tokens(",".join(filters))
        cfg = EvalConfig(neighbors=5, folds=5, repeats=3, seed=seed)
        report = grid_search_alpha(toy_decs, toy_dataset.labels, bank, powers,
                                   AlphaGrid(-3, 3, 0.5), cfg)
        at_one = cross_validate(
            embed_dataset(toy_decs, bank, powers, 1.0).rows, toy_dataset.labels, cfg)
        assert report.best_accuracy >= at_one
        assert report.best_accuracy == np.max(report.accuracies)
    print("\nPASS criterion 5: grid-search accuracy dominates the alpha=1 accuracy")


def test_criterion_7_complexity_scaling():
    result = scaling_benchmark(sizes=(16, 32, 64, 128), graphs_per_size=3,
                               alpha=0.5, repeats=3, seed=7)
    slope = result["slope"]
    assert 2.0 <= slope <= 3.8, f"log-log slope {slope:.2f} outside [2.0, 3.8]"
    print(f"\nPASS criterion 7: embedding time scales with slope {slope:.2f} "
          f"(eigendecomposition dominated)")


_FORWARD_CACHE = {}


def _forward_accuracy(name, mode):
    """GEFFE- or GEFRFE-mode forward selection accuracy on a real dataset."""
    key = (name, mode)
    if key in _FORWARD_CACHE:
        return _FORWARD_CACHE[key]
    dataset = _load(name)
    threads = os.cpu_count() or 1
    decs = decompositions_for(dataset, cache_dir=DATA_ROOT / ".cache" / name,
                              threads=threads)
    bank = default_bank()
    powers = range(6)
    cfg = EvalConfig(neighbors=5, folds=5, repeats=20, seed=REPRO_SEED)
    if mode == "geffe":
        rows_by_key = all_feature_rows(decs, bank, powers, 1.0)
        candidates = [((fname, w, 1.0), rows_by_key[(fname, w)])
                      for fname, _ in bank for w in powers]
    else:
        # NCI1's full 301-point grid is the longest run; use every 5th point
        step = 0.02 * 5 if name == "NCI1" else 0.02
        results = search_all_features(decs, dataset.labels, bank, powers,
                                      AlphaGrid(-3, 3, step), cfg, threads=threads)
        candidates = [(r.key, r.rows) for r in results]
    selection = forward_select(candidates, dataset.labels, cfg, threads=threads)
    _FORWARD_CACHE[key] = selection
    return selection


@pytest.mark.skipif(not _has_dataset("Letter-low"),
                    reason="Letter-low dataset not present under FRACEMBED_DATA")
def test_criterion_6a_letter_low_anchor():
    acc = _forward_accuracy("Letter-low", "geffe").accuracy
    assert abs(acc - 0.4823) <= 0.05, f"GEFFE-forward Letter-low {acc:.4f} vs 0.4823 +- 5pp"
    print(f"\nPASS criterion 6a: GEFFE-forward on Letter-low = {acc:.4f} "
          f"(anchor 0.4823 +- 5pp)")


@pytest.mark.skipif(not (_has_dataset("Letter-low") and _has_dataset("Letter-med")),
                    reason="Letter datasets not present under FRACEMBED_DATA")
def test_criterion_6b_fractional_margin_letters():
    for name in ("Letter-low", "Letter-med"):
        geffe = _forward_accuracy(name, "geffe").accuracy
        gefrfe = _forward_accuracy(name, "gefrfe").accuracy
        assert gefrfe - geffe >= 0.10, \
            f"{name}: fractional margin {gefrfe - geffe:.4f} < 10pp"
    print("\nPASS criterion 6b: fractional search beats alpha=1 by >= 10pp on "
          "Letter-low and Letter-med")


@pytest.mark.skipif(not all(_has_dataset(n) for n in ("NCI1", "PROTEINS", "IMDB-MULTI")),
                    reason="TUDataset benchmarks not present under FRACEMBED_DATA")
def test_criterion_6c_tud_dominance():
    for name in ("NCI1", "PROTEINS", "IMDB-MULTI"):
        geffe = _forward_accuracy(name, "geffe").accuracy
        gefrfe = _forward_accuracy(name, "gefrfe").accuracy
        assert gefrfe >= geffe, f"{name}: {gefrfe:.4f} < {geffe:.4f}"
    print("\nPASS criterion 6c: fractional forward selection dominates alpha=1 "
          "on NCI1, PROTEINS, IMDB-MULTI")


@pytest.mark.skipif(not _has_dataset("Letter-low"),
                    reason="Letter-low dataset not present under FRACEMBED_DATA")
def test_letter_low_ah3_grid_beats_alpha1():
    """Directional anchor: the AH3/omega=4 grid winner strictly beats alpha=1."""
    from fracembed.filters import FilterBank
    dataset = _load("Letter-low")
    decs = decompositions_for(dataset, cache_dir=DATA_ROOT / ".cache" / "Letter-low",
                              threads=os.cpu_count() or 1)
    cfg = EvalConfig(neighbors=5, folds=5, repeats=20, seed=REPRO_SEED)
    report = grid_search_alpha(decs, dataset.labels, FilterBank.from_tokens("AH3"),
                               [4], AlphaGrid(-3, 3, 0.02), cfg)
    at_one = float(report.accuracies[np.flatnonzero(report.alphas == 1.0)[0]])
    assert report.best_accuracy > at_one
    print(f"\nPASS anchor: Letter-low AH3/omega=4 grid best {report.best_accuracy:.4f} "
          f"> alpha=1 accuracy {at_one:.4f}")


@pytest.mark.skipif(not _has_dataset("NCI1"),
                    reason="NCI1 dataset not present under FRACEMBED_DATA")
def test_paper_anchor_nci1_selects_ah1_0():
    selection = _forward_accuracy("NCI1", "gefrfe")
    picked = {(f, w) for f, w, _ in selection.selected}
    assert ("AH1", 0) in picked
    print(f"\nPASS anchor: NCI1 fractional forward selection includes AH1-0 "
          f"(selected {selection.selected})")


@pytest.mark.skipif(not _has_dataset("PROTEINS"),
                    reason="PROTEINS dataset not present under FRACEMBED_DATA")
def test_paper_anchor_proteins_selects_x_4():
    selection = _forward_accuracy("PROTEINS", "gefrfe")
    picked = {(f, w) for f, w, _ in selection.selected}
    assert ("X", 4) in picked
    print(f"\nPASS anchor: PROTEINS fractional forward selection includes X-4 "
          f"(selected {selection.selected})")


@pytest.mark.parametrize("name", list(TABLE_STATS))
def test_criterion_8_parser_fidelity(name):
    if not _has_dataset(name):
        pytest.skip(f"{name} not present under FRACEMBED_DATA")
    mean_vertices, graphs, classes, _ = TABLE_STATS[name]
    dataset = _load(name)
    assert len(dataset) == graphs
    assert dataset.class_count == classes
    assert abs(dataset.mean_node_count - mean_vertices) <= 0.005 * mean_vertices
    print(f"\nPASS criterion 8 [{name}]: {graphs} graphs, {classes} classes, "
          f"mean vertices {dataset.mean_node_count:.2f}")
