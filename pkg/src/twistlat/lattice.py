"""Twist lattice points in metric balls: exact half-plane and coarse models.

A power-n twist about the slope s moves z by the Teichmueller distance

    d(z, T z) = scale * acosh(1 + (n * lam)^2 / 2),      lam = |p - q z|^2 / im(z),

so the ball condition d <= R is exactly |n| * lam <= 2 sinh(R / (2 scale)).
Censuses therefore reduce to scanning primitive pairs by flat length with an
exact per-slope power truncation; counts are streamed, never materialised.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels
from .hyperbolic import TEICH_METRIC_SCALE, H2Point, hyp_distance, mobius_apply
from .markoff import MarkoffStructure
from .slopes import Slope, TwistSpec, twist_matrix

Powers = Union[str, int]  # "unit", "all", or a fixed nonzero power


def extremal_length(z: H2Point, s: Slope) -> float:
    """Flat-length proxy |p - q z|^2 / im(z); comparable to length^2 on the thick part."""
    dx = s.p - s.q * z.re
    dy = s.q * z.im
    return (dx * dx + dy * dy) / z.im


def parabolic_displacement(z: H2Point, s: Slope, n: int,
                           scale: float = TEICH_METRIC_SCALE) -> float:
    """Distance z is moved by the power-n twist about s (closed form)."""
    if n == 0:
        raise ValueError("power must be nonzero")
    u = n * extremal_length(z, s)
    return scale * math.acosh(1.0 + 0.5 * u * u)


def _power_radius(R: float, scale: float) -> float:
    """The census threshold 2 sinh(R / (2 scale)): |n| lam <= this iff d <= R."""
    return 2.0 * math.sinh(R / (2.0 * scale))


def count_twist_lattice(z: H2Point, R: float, powers: Powers = "unit",
                        scale: float = TEICH_METRIC_SCALE, threads: int = 1,
                        relax: float = 1.0) -> int:
    """Exact number of (slope, power) pairs with displacement <= R.

    powers: "unit" counts n in {+1, -1}; "all" counts every nonzero n;
    an integer counts the pair of fixed powers {+n, -n}.  ``relax`` widens the
    enumeration window without changing the count condition (soundness probe).
    """
    if R <= 0:
        return 0
    t = _power_radius(R, scale)
    if isinstance(powers, int):
        if powers == 0:
            raise ValueError("power must be nonzero")
        t_fixed = t / abs(powers)
        n_d, _ = _census(z, t_fixed, t_fixed * relax, threads)
        return 2 * n_d
    if powers == "unit":
        n_d, _ = _census(z, t, t * relax, threads)
        return 2 * n_d
    if powers == "all":
        _, n_m = _census(z, t, t * relax, threads)
        return 2 * n_m
    raise ValueError(f"unknown powers spec {powers!r}")


def _census(z: H2Point, t_count: float, t_enum: float, threads: int) -> tuple[int, int]:
    q_hi = int(math.floor(math.sqrt(max(t_enum / z.im, 0.0))))
    if threads <= 1 or q_hi < 64:
        return kernels.census_grid(z.re, z.im, t_count, t_enum, 0, q_hi)
    chunks = []
    step = max(1, q_hi // (4 * threads))
    lo = 0
    while lo <= q_hi:
        chunks.append((lo, min(lo + step - 1, q_hi)))
        lo += step
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(lambda c: kernels.census_grid(z.re, z.im, t_count, t_enum, *c), chunks)
        )
    # integer sums in fixed chunk order: merge is order-independent anyway
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


@dataclass
class LatticeCensus:
    """Radius-indexed lattice counts for one basepoint and model."""

    basepoint: str
    radii: list[float]
    counts_d: list[int]
    counts_m: list[int]
    model: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for seq in (self.counts_d, self.counts_m):
            if any(b < a for a, b in zip(seq, seq[1:])):
                raise ValueError("census counts must be nondecreasing in R")
        if any(d > m for d, m in zip(self.counts_d, self.counts_m)):
            raise ValueError("unit-power counts cannot exceed all-power counts")


def census_exact(z: H2Point, radii: list[float], scale: float = TEICH_METRIC_SCALE,
                 threads: int = 1) -> LatticeCensus:
    counts_d, counts_m = [], []
    for R in radii:
        t = _power_radius(R, scale)
        n_d, n_m = _census(z, t, t, threads)
        counts_d.append(2 * n_d)
        counts_m.append(2 * n_m)
    return LatticeCensus(f"h2({z.re:.17g},{z.im:.17g})", list(radii), counts_d,
                         counts_m, "exact-h2", {"scale": scale})


def coarse_census(X: MarkoffStructure, R: float, powers: Powers = "unit") -> int:
    """Count weighted slopes with log(a * length^2) <= R (positive powers).

    The coarse model drops the additive fuzz of the distance law: a slope of
    length ell admits the powers 1 <= a <= e^R / ell^2, hence the enumeration
    threshold ell <= e^{R/2}.
    """
    if R <= 0:
        return 0
    ell_max = math.exp(0.5 * R)
    lthr = kernels.log_trace_threshold(ell_max)
    if powers == "unit":
        return kernels.tree_accumulate(X.log_x, X.log_y, X.log_z, lthr, 0)
    if powers == "all":
        return kernels.tree_accumulate(X.log_x, X.log_y, X.log_z, lthr, 2, float(R))
    raise ValueError(f"unknown powers spec {powers!r}")


def census_coarse(X: MarkoffStructure, radii: list[float]) -> LatticeCensus:
    counts_d = [coarse_census(X, R, "unit") for R in radii]
    counts_m = [coarse_census(X, R, "all") for R in radii]
    return LatticeCensus(X.to_text(), list(radii), counts_d, counts_m,
                         "coarse-markoff", {"eps": X.eps})


def sandwich_check(z: H2Point, w: H2Point, R: float, powers: Powers = "unit",
                   scale: float = TEICH_METRIC_SCALE) -> dict:
    """Isometry sandwich: |orbit(z) in B_{R-d}| <= |orbit(w) in B_R(z)| <= |orbit(z) in B_{R+d}|.

    The two outer counts come from the closed-form census at z; the middle one
    is an explicit enumeration over twist elements applied to w.
    """
    d = scale * hyp_distance(z, w)
    lo = count_twist_lattice(z, R - d, powers, scale) if R > d else 0
    hi = count_twist_lattice(z, R + d, powers, scale)
    mid = _count_orbit_in_ball(z, w, R, powers, scale)
    return {
        "distance": d,
        "count_lower": lo,
        "count_mid": mid,
        "count_upper": hi,
        "ok": lo <= mid <= hi,
    }


def _count_orbit_in_ball(z: H2Point, w: H2Point, R: float, powers: Powers,
                         scale: float) -> int:
    """Count (slope, n) with d(T^n_s w, z) <= R by exhaustive evaluation."""
    d = scale * hyp_distance(z, w)
    t_enum = _power_radius(R + d, scale)  # necessary: d(Mw, w) <= R + d
    count = 0
    q_hi = int(math.floor(math.sqrt(max(t_enum / w.im, 0.0))))
    for q in range(0, q_hi + 1):
        if q == 0:
            p_range = [1]
        else:
            rad2 = t_enum * w.im - (q * w.im) ** 2
            if rad2 < 0:
                continue
            half = math.sqrt(rad2)
            p_range = range(int(math.ceil(q * w.re - half)),
                            int(math.floor(q * w.re + half)) + 1)
        for p in p_range:
            if q > 0 and math.gcd(abs(p), q) != 1:
                continue
            s = Slope(p, q)
            lam = extremal_length(w, s)
            n_max = int(t_enum / lam)
            if n_max < 1:
                continue
            if powers == "unit":
                ns = [1, -1]
            elif powers == "all":
                ns = [n for k in range(1, n_max + 1) for n in (k, -k)]
            elif isinstance(powers, int):
                ns = [powers, -powers] if abs(powers) <= n_max else []
            else:
                raise ValueError(f"unknown powers spec {powers!r}")
            for n in ns:
                m = twist_matrix(TwistSpec(s, n))
                if scale * hyp_distance(mobius_apply(m, w), z) <= R:
                    count += 1
    return count


def growth_report(census: LatticeCensus, window: tuple[float, float] | None = None) -> dict:
    """Fit records for the two populations.

    counts_d: slope of log count against R (exponential rate).  counts_m:
    drift of count/(R e^R) over the top half of the window, and the growth of
    count/e^R, which separates R*e^R from pure e^R.
    """
    radii = census.radii
    if window is None:
        window = (radii[0], radii[-1])
    rows = [(R, cd, cm) for R, cd, cm in zip(radii, census.counts_d, census.counts_m)
            if window[0] <= R <= window[1] and cd > 0 and cm > 0]
    if len(rows) < 6:
        raise ValueError("need at least 6 radii with nonzero counts")
    R = np.array([r[0] for r in rows])
    cd = np.array([r[1] for r in rows], dtype=float)
    cm = np.array([r[2] for r in rows], dtype=float)
    slope, intercept = np.polyfit(R, np.log(cd), 1)
    resid = np.log(cd) - (slope * R + intercept)
    ss_tot = float(((np.log(cd) - np.log(cd).mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 0.0
    ratio_m = cm / (R * np.exp(R))
    top = ratio_m[R >= 0.5 * (window[0] + window[1])]
    exp_ratio = cm / np.exp(R)
    return {
        "d_slope": float(slope),
        "d_r_squared": r2,
        "m_ratio_drift": float(top.max() / top.min()),
        "m_exp_ratio_increase": float(exp_ratio[-1] / exp_ratio[0]),
        "m_exp_ratio_monotone": bool((np.diff(exp_ratio) >= 0).all()),
        "window": window,
    }
