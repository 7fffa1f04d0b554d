"""Command-line driver: info, fetch, embed, gridsearch, forward, evaluate, bench-scaling.

Exit codes: 0 success, 1 usage/configuration error, 2 data error, 3 numeric
failure. Progress goes to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import urllib.error
import urllib.request
import zipfile
from dataclasses import asdict
from pathlib import Path

from . import __version__
from . import _kernels
from .bench import scaling_benchmark
from .cache import decompositions_for
from .config import RunConfig, build_config, parse_config_file
from .datasets import DATASET_SOURCES, DatasetManifest, load_dataset
from .embedding import all_feature_rows, embed_dataset, embed_dataset_mixed
from .errors import DataFormatError, NumericError
from .evaluation import EvalConfig, cross_validate
from .filters import FilterBank
from .search import AlphaGrid, forward_select, grid_search_alpha, search_all_features

log = logging.getLogger("fracembed")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_dataset_args(p):
    p.add_argument("--config", help="key = value configuration file; flags override it")
    p.add_argument("--data", help="dataset root (tud/gxl) or .jsonl file")
    p.add_argument("--format", choices=["tud", "gxl", "jsonl"], help="dataset format")
    p.add_argument("--name", help="dataset name (and TUDataset file prefix)")
    p.add_argument("--splits", help="gxl only: comma-separated .cxl index files")
    p.add_argument("--expect-graphs", type=int, dest="expect_graphs")
    p.add_argument("--expect-classes", type=int, dest="expect_classes")
    p.add_argument("--cache-dir", dest="cache_dir",
                   help="directory for cached spectral decompositions")
    p.add_argument("--threads", type=int, help="worker threads (0 = auto)")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_pipeline_args(p, grid=False):
    p.add_argument("--filters", help="comma list: H<t>, AH<t>, PS<r>[:rho], X")
    p.add_argument("--powers", help="power orders, e.g. 0..5 or 0,2,4")
    p.add_argument("--neighbors", type=int)
    p.add_argument("--folds", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    if grid:
        p.add_argument("--grid-lo", type=float, dest="grid_lo")
        p.add_argument("--grid-hi", type=float, dest="grid_hi")
        p.add_argument("--grid-step", type=float, dest="grid_step")
        p.add_argument("--subsample", type=int,
                       help="evaluate every k-th grid point (must keep alpha = 1)")


_CONFIG_KEYS = [f for f in RunConfig.__dataclass_fields__]


def _config_from_args(args) -> RunConfig:
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else {}
    cli_values = {k: getattr(args, k) for k in _CONFIG_KEYS if hasattr(args, k)}
    return build_config(file_values, cli_values)


def _eval_config(cfg: RunConfig) -> EvalConfig:
    return EvalConfig(neighbors=cfg.neighbors, folds=cfg.folds,
                      repeats=cfg.repeats, seed=cfg.seed)


def _grid(cfg: RunConfig) -> AlphaGrid:
    if cfg.subsample > 1:
        step = cfg.grid_step * cfg.subsample
        count = int(math.floor((cfg.grid_hi - cfg.grid_lo) / step + 1e-9))
        return AlphaGrid(cfg.grid_lo, cfg.grid_lo + step * count, step)
    return AlphaGrid(cfg.grid_lo, cfg.grid_hi, cfg.grid_step)


def _provenance(cfg: RunConfig) -> dict:
    return {"config": {k: v for k, v in asdict(cfg).items() if v is not None},
            "seed": cfg.seed, "backend": _kernels.BACKEND, "version": __version__}


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_pipeline(cfg: RunConfig):
    dataset = load_dataset(cfg.manifest())
    log.info("%s: %d graphs, %d classes", dataset.name, len(dataset), dataset.class_count)
    decs = decompositions_for(dataset, cfg.cache_dir, cfg.threads)
    log.info("decompositions ready (max N = %d)", dataset.max_node_count)
    return dataset, decs


def _embedding_csv(matrix, labels, stream):
    names = matrix.column_names()
    stream.write("graph,label," + ",".join(names) + "\n")
    for i, row in enumerate(matrix.rows):
        values = ",".join(repr(float(x)) for x in row)
        stream.write(f"{i},{int(labels[i])},{values}\n")


def _read_alpha_plan(path) -> list:
    """Accept forward-selection output or a bare [[filter, omega, alpha], ...] list."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(payload, dict):
        payload = payload.get("selected") or payload.get("plan")
    if not isinstance(payload, list) or not payload:
        raise ValueError(f"{path}: expected a non-empty feature plan")
    return [(str(f), int(w), float(a)) for f, w, a in payload]


def cmd_info(args) -> int:
    cfg = _config_from_args(args)
    dataset = load_dataset(cfg.manifest())
    print(f"{dataset.name}: {len(dataset)} graphs, {dataset.class_count} classes, "
          f"mean vertices {dataset.mean_node_count:.2f}, "
          f"mean edges {dataset.mean_edge_count:.2f}")
    return 0


def cmd_embed(args) -> int:
    cfg = _config_from_args(args)
    dataset, decs = _load_pipeline(cfg)
    bank = FilterBank.from_tokens(cfg.filters)
    powers = cfg.power_list()
    if cfg.alpha_map:
        plan = _read_alpha_plan(cfg.alpha_map)
        matrix = embed_dataset_mixed(decs, bank, plan)
    elif cfg.alpha_mode in ("fixed", "per-feature"):
        matrix = embed_dataset(decs, bank, powers, cfg.alpha)
    else:
        raise ValueError("embed needs a fixed --alpha or an --alpha-map plan")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "embedding.csv", "w", encoding="utf-8") as fh:
            _embedding_csv(matrix, dataset.labels, fh)
        payload = _provenance(cfg)
        payload.update({"dataset": dataset.name, "rows": len(dataset),
                        "blocks": [list(k) for k in matrix.column_blocks],
                        "block_length": matrix.block_length})
        _write_json(out / "embedding.json", payload)
        log.info("wrote %s", out / "embedding.csv")
    else:
        _embedding_csv(matrix, dataset.labels, sys.stdout)
    return 0


def cmd_gridsearch(args) -> int:
    cfg = _config_from_args(args)
    dataset, decs = _load_pipeline(cfg)
    bank = FilterBank.from_tokens(cfg.filters)
    powers = cfg.power_list()
    grid = _grid(cfg)
    n_points = len(grid.values())

    def progress(done, total):
        if done % 25 == 0 or done == total:
            log.info("grid search %d/%d", done, total)

    log.info("grid search over %d orders", n_points)
    report = grid_search_alpha(decs, dataset.labels, bank, powers, grid,
                               _eval_config(cfg), progress=progress)
    print(f"best alpha {report.best_alpha:g}: accuracy {report.best_accuracy:.4f}")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "gridsearch.csv", "w", encoding="utf-8") as fh:
            fh.write("alpha,accuracy\n")
            for alpha, acc in report.as_pairs():
                fh.write(f"{alpha!r},{acc!r}\n")
        payload = _provenance(cfg)
        payload.update({"dataset": dataset.name,
                        "best_alpha": report.best_alpha,
                        "best_accuracy": report.best_accuracy,
                        "points": report.as_pairs()})
        _write_json(out / "gridsearch.json", payload)
        log.info("wrote %s", out / "gridsearch.csv")
    return 0


def cmd_forward(args) -> int:
    cfg = _config_from_args(args)
    dataset, decs = _load_pipeline(cfg)
    bank = FilterBank.from_tokens(cfg.filters)
    powers = cfg.power_list()
    ecfg = _eval_config(cfg)
    candidate_details = []
    if cfg.mode == "geffe":
        rows_by_key = all_feature_rows(decs, bank, powers, 1.0)
        candidates = [((fname, w, 1.0), rows_by_key[(fname, w)])
                      for fname, _ in bank for w in powers]
    elif cfg.mode == "gefrfe":
        grid = _grid(cfg)
        log.info("per-feature order search over %d candidates x %d orders",
                 len(bank) * len(powers), len(grid.values()))

        def progress(done, total):
            if done % 25 == 0 or done == total:
                log.info("order search %d/%d", done, total)

        results = search_all_features(decs, dataset.labels, bank, powers, grid,
                                      ecfg, progress=progress, threads=cfg.threads)
        candidates = [(res.key, res.rows) for res in results]
        candidate_details = [
            {"filter": res.filter_name, "omega": res.omega,
             "alpha": res.best_alpha, "accuracy": res.best_accuracy}
            for res in results]
    else:
        raise ValueError(f"unknown forward-selection mode {cfg.mode!r}")
    selection = forward_select(candidates, dataset.labels, ecfg, threads=cfg.threads)
    print(f"{dataset.name} ({cfg.mode}): final accuracy {selection.accuracy:.4f}")
    print("step  feature        alpha    accuracy")
    for i, ((fname, omega, alpha), acc) in enumerate(zip(selection.selected, selection.trace), 1):
        print(f"{i:<5d} {fname + '-' + str(omega):<14s} {alpha:<8g} {acc:.4f}")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = _provenance(cfg)
        payload.update({"dataset": dataset.name, "mode": cfg.mode,
                        "selected": [list(k) for k in selection.selected],
                        "trace": selection.trace,
                        "final_accuracy": selection.accuracy,
                        "candidates": candidate_details})
        _write_json(out / "forward.json", payload)
        log.info("wrote %s", out / "forward.json")
    return 0


def cmd_evaluate(args) -> int:
    cfg = _config_from_args(args)
    dataset, decs = _load_pipeline(cfg)
    bank = FilterBank.from_tokens(cfg.filters)
    if cfg.alpha_map:
        matrix = embed_dataset_mixed(decs, bank, _read_alpha_plan(cfg.alpha_map))
    else:
        matrix = embed_dataset(decs, bank, cfg.power_list(), cfg.alpha)
    accuracy, fold_acc = cross_validate(matrix.rows, dataset.labels, _eval_config(cfg),
                                        detail=True)
    print(f"{dataset.name}: accuracy {accuracy:.4f}")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = _provenance(cfg)
        payload.update({"dataset": dataset.name, "accuracy": accuracy,
                        "per_repeat": [float(x) for x in fold_acc.mean(axis=1)],
                        "blocks": [list(k) for k in matrix.column_blocks]})
        _write_json(out / "evaluate.json", payload)
    return 0


def cmd_bench_scaling(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else (16, 32, 64, 128)
    result = scaling_benchmark(sizes=sizes, graphs_per_size=args.graphs_per_size,
                               alpha=args.alpha, repeats=args.repeats, seed=args.seed)
    print("N       seconds")
    for n, t in zip(result["sizes"], result["seconds"]):
        print(f"{n:<7d} {t:.6f}")
    print(f"log-log slope: {result['slope']:.3f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        result["backend"] = _kernels.BACKEND
        result["version"] = __version__
        _write_json(out / "bench_scaling.json", result)
    return 0


def _sha256_of(path: Path) -> str:
    import hashlib

    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def cmd_fetch(args) -> int:
    entry = DATASET_SOURCES.get(args.dataset)
    if entry is None:
        raise ValueError(f"unknown dataset {args.dataset!r}; known: "
                         + ", ".join(sorted(DATASET_SOURCES)))
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    root = dest / args.dataset
    if entry.get("manual"):
        if not root.exists():
            print(f"{args.dataset} requires manual download (registration): {entry['url']}\n"
                  f"place the GXL/CXL files under {root}/", file=sys.stderr)
            return 2
    else:
        archive = dest / f"{args.dataset}.zip"
        if not root.exists():
            if not archive.exists():
                log.info("downloading %s", entry["url"])
                try:
                    urllib.request.urlretrieve(entry["url"], archive)
                except (urllib.error.URLError, OSError) as exc:
                    print(f"download failed ({exc}); fetch {entry['url']} manually "
                          f"and place it at {archive}", file=sys.stderr)
                    return 2
            if args.sha256:
                actual = _sha256_of(archive)
                if actual != args.sha256.lower():
                    raise DataFormatError(
                        f"{archive.name}: sha256 mismatch (got {actual})")
            with zipfile.ZipFile(archive) as zf:
                zf.extractall(dest)
            if not root.exists():
                raise DataFormatError(f"{archive.name} did not contain {args.dataset}/")
    manifest = DatasetManifest(args.dataset, entry["format"], root,
                               expected_graphs=entry["graphs"],
                               expected_classes=entry["classes"])
    dataset = load_dataset(manifest)
    print(f"{args.dataset}: verified {len(dataset)} graphs, {dataset.class_count} classes")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracembed",
                     description="Fractional-domain spectral graph embeddings")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="dataset summary (graphs, classes, mean sizes)")
    _add_dataset_args(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("fetch", help="download/verify a known dataset")
    p.add_argument("dataset", help="one of " + ", ".join(sorted(DATASET_SOURCES)))
    p.add_argument("--dest", default="data", help="destination directory")
    p.add_argument("--sha256", help="expected archive digest")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("embed", help="write the embedding matrix as CSV/JSON")
    _add_dataset_args(p)
    _add_pipeline_args(p)
    p.add_argument("--alpha", type=float, help="shared fractional order")
    p.add_argument("--alpha-map", dest="alpha_map",
                   help="JSON feature plan (e.g. forward.json) with per-feature orders")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("gridsearch", help="accuracy over the fractional-order grid")
    _add_dataset_args(p)
    _add_pipeline_args(p, grid=True)
    p.set_defaults(func=cmd_gridsearch, alpha_mode="grid")

    p = sub.add_parser("forward", help="greedy forward feature selection")
    _add_dataset_args(p)
    _add_pipeline_args(p, grid=True)
    p.add_argument("--mode", choices=["geffe", "gefrfe"],
                   help="candidate orders: fixed alpha=1 (geffe) or per-feature search")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("evaluate", help="cross-validated accuracy of one configuration")
    _add_dataset_args(p)
    _add_pipeline_args(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-map", dest="alpha_map")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench-scaling", help="per-graph embedding time vs node count")
    p.add_argument("--sizes", help="comma list, default 16,32,64,128")
    p.add_argument("--graphs-per-size", type=int, default=3, dest="graphs_per_size")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_bench_scaling)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
