"""Counting simple closed geodesics and weighted curves of bounded length."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .markoff import MarkoffStructure, enumerate_by_log_trace, markoff_length
from .slopes import Slope


@dataclass
class CountTable:
    """Counts indexed by an ascending length grid for one curve population."""

    thresholds: list[float]
    counts: list[int]
    label: str
    structure_id: str = ""

    def __post_init__(self):
        if len(self.thresholds) != len(self.counts):
            raise ValueError("thresholds and counts must have equal length")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be ascending")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing")
        if self.counts and self.counts[0] < 0:
            raise ValueError("counts must be nonnegative")


@dataclass
class GrowthFit:
    exponent: float
    prefactor: float
    r_squared: float
    fit_window: tuple[float, float]
    degenerate: bool = field(default=False)


def geometric_thresholds(l0: float, l_max: float, rho: float = 1.25) -> list[float]:
    """Geometric grid l0 * rho^k up to l_max; log-log fits stay well conditioned."""
    if not (l0 > 0 and rho > 1):
        raise ValueError("need l0 > 0 and rho > 1")
    out = []
    L = l0
    while L <= l_max * (1 + 1e-12):
        out.append(L)
        L *= rho
    return out


def count_scc(X: MarkoffStructure, L: float) -> int:
    """Number of simple closed geodesics of length <= L."""
    if L <= 0:
        return 0
    lthr = kernels.log_trace_threshold(L)
    return kernels.tree_accumulate(X.log_x, X.log_y, X.log_z, lthr, 0)


def count_scaled(X: MarkoffStructure, L: float, c: int) -> int:
    """Number of c-weighted curves c*gamma with c*length(gamma) <= L."""
    if c < 1:
        raise ValueError("weight must be a positive integer")
    return count_scc(X, L / float(c))


def count_multicurves(X: MarkoffStructure, L: float) -> int:
    """Number of weighted curves a*gamma, a >= 1, with a*length(gamma) <= L."""
    if L <= 0:
        return 0
    lthr = kernels.log_trace_threshold(L)
    return kernels.tree_accumulate(X.log_x, X.log_y, X.log_z, lthr, 1, float(L))


def enumerate_slopes(X: MarkoffStructure, L: float) -> list[Slope]:
    """Exactly the canonical slopes of length <= L, sorted by (length, p, q)."""
    if L <= 0:
        return []
    lthr = kernels.log_trace_threshold(L)
    found = [(lt, s.p, s.q, s) for s, lt in enumerate_by_log_trace(X, lthr)]
    found.sort(key=lambda r: r[:3])
    return [r[3] for r in found]


def count_table(X: MarkoffStructure, thresholds: list[float], population: str = "scc",
                weight: int = 1, structure_id: str = "") -> CountTable:
    """Tabulate one population over a threshold grid.

    populations: "scc" (simple closed geodesics), "scaled" (weight-c copies),
    "multicurve" (all positive integer weights).
    """
    if population == "scc":
        counts = [count_scc(X, L) for L in thresholds]
        label = "scc"
    elif population == "scaled":
        counts = [count_scaled(X, L, weight) for L in thresholds]
        label = f"scaled-{weight}"
    elif population == "multicurve":
        counts = [count_multicurves(X, L) for L in thresholds]
        label = "multicurve"
    else:
        raise ValueError(f"unknown population {population!r}")
    return CountTable(list(thresholds), counts, label, structure_id)


def fit_growth(table: CountTable, window: tuple[float, float] | None = None) -> GrowthFit:
    """Least-squares power-law fit of count ~ prefactor * L^exponent on a window."""
    L = np.asarray(table.thresholds, dtype=float)
    C = np.asarray(table.counts, dtype=float)
    if window is None:
        window = (float(L[0]), float(L[-1]))
    mask = (L >= window[0]) & (L <= window[1]) & (C > 0)
    if int(mask.sum()) < 5:
        raise ValueError("need at least 5 thresholds with nonzero counts")
    x = np.log(L[mask])
    y = np.log(C[mask])
    if np.allclose(y, y[0]):
        return GrowthFit(0.0, float(np.exp(y[0])), 0.0, window, degenerate=True)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) @ (y - y.mean())))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return GrowthFit(float(slope), float(math.exp(intercept)), r2, window)


def length_spectrum(X: MarkoffStructure, L: float) -> list[tuple[Slope, float]]:
    """Slopes of length <= L with their lengths, sorted ascending."""
    pairs = [(s, markoff_length(X, s)) for s in enumerate_slopes(X, L)]
    pairs.sort(key=lambda r: (r[1], r[0].p, r[0].q))
    return pairs
