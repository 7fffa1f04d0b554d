"""Spectral filter families and the heat kernel.

Four families act on Laplacian eigenvalues: heat (low-pass), anti-heat
(high-pass, anchored at the spectral radius R), part-sine bumps covering one
sub-range of the spectrum each, and the plain eigenvalue ramp.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .spectral import SpectralDecomposition

DEFAULT_PART_SINE_RHO = 0.579


@dataclass(frozen=True)
class HeatFilter:
    """exp(-lambda * t): amplifies low frequencies."""

    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("heat filter needs t > 0")


@dataclass(frozen=True)
class AntiHeatFilter:
    """exp(-(R - lambda) * t): amplifies high frequencies, R = spectral radius."""

    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("anti-heat filter needs t > 0")


@dataclass(frozen=True)
class PartSineFilter:
    """Sine bump supported on [rho*(r-2), rho*r], peaking at rho*(r-1)."""

    r: int
    rho: float = DEFAULT_PART_SINE_RHO

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("part-sine filter needs r >= 1")
        if not self.rho > 0:
            raise ValueError("part-sine filter needs rho > 0")


@dataclass(frozen=True)
class EigenvalueFilter:
    """Identity ramp: the response is the eigenvalue itself."""


def evaluate_filter(spec, eigenvalues: np.ndarray, r_max: float = None) -> np.ndarray:
    """Elementwise filter response over an eigenvalue vector.

    r_max is the spectral radius used by the anti-heat family; it defaults to
    max(eigenvalues) (per-graph) and must not be smaller than it.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalues must be finite")
    if isinstance(spec, HeatFilter):
        return np.exp(-lam * spec.t)
    if isinstance(spec, AntiHeatFilter):
        radius = float(np.max(lam)) if r_max is None else float(r_max)
        if lam.size and radius < np.max(lam):
            raise ValueError(f"anti-heat radius {radius} is below the largest eigenvalue")
        return np.exp(-(radius - lam) * spec.t)
    if isinstance(spec, PartSineFilter):
        lo = spec.rho * (spec.r - 2)
        hi = spec.rho * spec.r
        inside = (lam >= lo) & (lam <= hi)
        out = np.zeros_like(lam)
        out[inside] = np.sin((np.pi / (2 * spec.rho)) * (lam[inside] - lo))
        return out
    if isinstance(spec, EigenvalueFilter):
        return lam.copy()
    raise TypeError(f"unknown filter spec {spec!r}")


def canonical_filter_name(spec) -> str:
    """Stable short name: H<t>, AH<t>, PS<r> (rho appended when non-default), X."""

    def fmt(x: float) -> str:
        return str(int(x)) if float(x).is_integer() else str(x)

    if isinstance(spec, HeatFilter):
        return f"H{fmt(spec.t)}"
    if isinstance(spec, AntiHeatFilter):
        return f"AH{fmt(spec.t)}"
    if isinstance(spec, PartSineFilter):
        if spec.rho == DEFAULT_PART_SINE_RHO:
            return f"PS{spec.r}"
        return f"PS{spec.r}:{spec.rho}"
    if isinstance(spec, EigenvalueFilter):
        return "X"
    raise TypeError(f"unknown filter spec {spec!r}")


_FILTER_TOKEN = re.compile(
    r"^(?:H(?P<h>\d+(?:\.\d+)?)|AH(?P<ah>\d+(?:\.\d+)?)|PS(?P<r>\d+)(?::(?P<rho>\d+(?:\.\d+)?))?|X)$"
)


def parse_filter_token(token: str):
    """Parse one bank token: H<t>, AH<t>, PS<r>[:rho], X."""
    m = _FILTER_TOKEN.match(token.strip().upper())
    if m is None:
        raise ValueError(f"unrecognized filter token {token!r}")
    if m.group("h") is not None:
        return HeatFilter(float(m.group("h")))
    if m.group("ah") is not None:
        return AntiHeatFilter(float(m.group("ah")))
    if m.group("r") is not None:
        rho = float(m.group("rho")) if m.group("rho") else DEFAULT_PART_SINE_RHO
        return PartSineFilter(int(m.group("r")), rho)
    return EigenvalueFilter()


@dataclass(frozen=True)
class FilterBank:
    """Ordered (name, spec) pairs with unique names."""

    members: tuple

    def __post_init__(self):
        names = [name for name, _ in self.members]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate filter names in bank: {names}")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def names(self) -> list:
        return [name for name, _ in self.members]

    @classmethod
    def from_tokens(cls, tokens) -> "FilterBank":
        if isinstance(tokens, str):
            tokens = [t for t in tokens.split(",") if t.strip()]
        specs = [parse_filter_token(t) for t in tokens]
        return cls(tuple((canonical_filter_name(s), s) for s in specs))


def default_bank() -> FilterBank:
    """The ten-member bank used throughout: X, H/AH at t in {1,3,6}, PS at r in {1,6,11}."""
    return FilterBank.from_tokens("X,H1,H3,H6,AH1,AH3,AH6,PS1,PS6,PS11")


def heat_kernel_matrix(dec: SpectralDecomposition, t: float) -> np.ndarray:
    """Node-to-node heat transmission K_t[n, m] = sum_l exp(-lambda_l t) phi_l[n] phi_l[m].

    Equals V diag(exp(-lambda t)) V^T; t = 0 gives the identity.
    """
    if t < 0:
        raise ValueError("diffusion time must be non-negative")
    decay = np.exp(-dec.eigenvalues * t)
    return np.einsum("l,nl,ml->nm", decay, dec.eigenvectors, dec.eigenvectors)
