"""Run configuration: plain key=value files with command-line overrides (flags win)."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .datasets import DatasetManifest


@dataclass
class RunConfig:
    data: str = None
    format: str = None          # tud | gxl | jsonl
    name: str = ""
    splits: str = None          # gxl index files, comma separated
    expect_graphs: int = None
    expect_classes: int = None
    filters: str = "X,H1,H3,H6,AH1,AH3,AH6,PS1,PS6,PS11"
    powers: str = "0..5"
    alpha_mode: str = "fixed"   # fixed | grid | per-feature
    alpha: float = 1.0
    alpha_map: str = None       # JSON file with a [[filter, omega, alpha], ...] plan
    grid_lo: float = -3.0
    grid_hi: float = 3.0
    grid_step: float = 0.02
    subsample: int = 1
    mode: str = "gefrfe"        # forward selection candidate mode: geffe | gefrfe
    neighbors: int = 5
    folds: int = 5
    repeats: int = 20
    seed: int = 0
    threads: int = 0
    cache_dir: str = None
    out: str = None

    def manifest(self) -> DatasetManifest:
        if not self.data or not self.format:
            raise ValueError("a dataset needs both --data and --format")
        splits = None
        if self.splits:
            splits = [s.strip() for s in self.splits.split(",") if s.strip()]
        return DatasetManifest(self.name or Path(self.data).stem, self.format,
                               Path(self.data), splits=splits,
                               expected_graphs=self.expect_graphs,
                               expected_classes=self.expect_classes)

    def power_list(self) -> list:
        return parse_powers(self.powers)


_INT_FIELDS = {"expect_graphs", "expect_classes", "subsample", "neighbors",
               "folds", "repeats", "seed", "threads"}
_FLOAT_FIELDS = {"alpha", "grid_lo", "grid_hi", "grid_step"}


def parse_powers(text) -> list:
    """Power orders as 'lo..hi' or an explicit comma list."""
    if not isinstance(text, str):
        return [int(w) for w in text]
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(t) for t in text.split(",") if t.strip()]
    if not values:
        raise ValueError("empty power set")
    if any(w < 0 for w in values):
        raise ValueError("power orders must be non-negative")
    return values


def parse_config_file(path) -> dict:
    """key = value lines; '#' starts a comment; unknown keys are errors."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known:
                raise ValueError(f"{path}:{ln}: unknown configuration key {key!r}")
            out[key] = value
    return out


def build_config(file_values: dict, cli_values: dict) -> RunConfig:
    """Merge config-file values with CLI overrides; CLI flags win."""
    merged = dict(file_values)
    merged.update({k: v for k, v in cli_values.items() if v is not None})
    coerced = {}
    for key, value in merged.items():
        if value is None:
            continue
        if key in _INT_FIELDS and not isinstance(value, int):
            value = int(value)
        elif key in _FLOAT_FIELDS and not isinstance(value, float):
            value = float(value)
        coerced[key] = value
    return RunConfig(**coerced)
