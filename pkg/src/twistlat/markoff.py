"""Marked hyperbolic structures on the once-punctured torus via basis traces.

A point of Teichmueller space is encoded by the traces (x, y, z) of the three
basis slopes (1,0), (0,1), (1,1); they satisfy x^2 + y^2 + z^2 = x*y*z and are
all > 2.  The trace of any other slope follows from the Fricke recursion
t(new) = t1*t2 - t3 along the Farey triangulation, and geodesic length is
2*acosh(trace/2).

Traces are stored as logs (long curves on a twisted structure reach e^10000
and beyond); integer triples additionally carry exact big-int traces, which is
the oracle mode used by the tests.  The float paths degrade only for triples
whose small traces are irrecoverable from log differences (e.g. recovering a
systole of 2 from basis traces of e^1000); operations that would silently do
so raise ArithmeticError instead.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .kernels import LOG2, length_from_log_trace, log_sub, log_trace_threshold
from .slopes import Slope, TwistSpec, cross, intersection_number, twist_on_slope

BASIS = (Slope(1, 0), Slope(0, 1), Slope(1, 1))

DEFAULT_EPS = 0.3

_REL_TOL = 1e-9


def _logsumexp3(a: float, b: float, c: float) -> float:
    m = max(a, b, c)
    return m + math.log(math.exp(a - m) + math.exp(b - m) + math.exp(c - m))


@dataclass(frozen=True)
class MarkoffStructure:
    """Marked hyperbolic structure, stored as basis log-traces plus eps."""

    log_x: float
    log_y: float
    log_z: float
    eps: float = DEFAULT_EPS
    exact: Optional[tuple[int, int, int]] = field(default=None, compare=False)

    def __post_init__(self):
        for lt in (self.log_x, self.log_y, self.log_z):
            if not math.isfinite(lt) or lt <= LOG2:
                raise ValueError("basis traces must be finite and > 2")
        res = self.relation_residual()
        if res > _REL_TOL:
            raise ValueError(f"trace relation violated (residual {res:.3e})")

    def relation_residual(self) -> float:
        """|log(x^2+y^2+z^2) - log(xyz)|, zero on the trace relation."""
        lhs = _logsumexp3(2 * self.log_x, 2 * self.log_y, 2 * self.log_z)
        return abs(lhs - (self.log_x + self.log_y + self.log_z))

    @property
    def x(self) -> float:
        return math.exp(self.log_x)

    @property
    def y(self) -> float:
        return math.exp(self.log_y)

    @property
    def z(self) -> float:
        return math.exp(self.log_z)

    @classmethod
    def from_traces(cls, x, y, z, eps: float = DEFAULT_EPS,
                    check_systole: bool = True) -> "MarkoffStructure":
        exact = None
        if isinstance(x, int) and isinstance(y, int) and isinstance(z, int):
            if x * x + y * y + z * z != x * y * z:
                raise ValueError("integer triple violates the trace relation")
            exact = (x, y, z)
        X = cls(math.log(x), math.log(y), math.log(z), eps, exact)
        if check_systole and systole(X) < eps - 1e-12:
            raise ValueError("systole below the thick-part parameter eps")
        return X

    def to_text(self) -> str:
        vals = (self.x, self.y, self.z, self.eps)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("triple too large for decimal serialization")
        return "markoff({:.17g},{:.17g},{:.17g};{:.17g})".format(*vals)

    @classmethod
    def from_text(cls, text: str) -> "MarkoffStructure":
        m = re.fullmatch(r"markoff\(([^,]+),([^,]+),([^;]+);([^)]+)\)", text.strip())
        if m is None:
            raise ValueError(f"not a markoff literal: {text!r}")
        x, y, z, eps = (float(g) for g in m.groups())
        return cls.from_traces(x, y, z, eps)


def modular_torus(eps: float = DEFAULT_EPS) -> MarkoffStructure:
    """The square punctured torus (3, 3, 3), the unique point with exact traces 3."""
    return MarkoffStructure.from_traces(3, 3, 3, eps)


# ---------------------------------------------------------------------------
# traces and lengths
# ---------------------------------------------------------------------------

def log_trace(X: MarkoffStructure, s: Slope) -> float:
    return kernels.log_trace_descent(s.p, s.q, X.log_x, X.log_y, X.log_z)


def markoff_length(X: MarkoffStructure, s: Slope) -> float:
    """Geodesic length of the slope: 2*acosh(trace/2), log-domain throughout."""
    return length_from_log_trace(log_trace(X, s))


def exact_trace(X: MarkoffStructure, s: Slope, max_steps: int = 10**6) -> int:
    """Exact big-integer trace by the stepwise Fricke descent (oracle mode)."""
    if X.exact is None:
        raise ValueError("structure has no exact integer traces")
    x, y, z = X.exact
    p, q = s.p, s.q
    if q == 0:
        return x
    if p == 0:
        return y
    if p < 0:
        p, z = -p, x * y - z
    if p == 1 and q == 1:
        return z
    pl, ql, ta = 0, 1, y
    pr, qr, tb = 1, 0, x
    pm, qm, tm = 1, 1, z
    steps = 0
    while True:
        cm = p * qm - q * pm
        if cm == 0:
            return tm
        steps += 1
        if steps > max_steps:
            raise ArithmeticError("exact descent exceeded the step bound")
        if cm > 0:
            pl, ql, ta, pm, qm, tm = pm, qm, tm, pm + pr, qm + qr, tb * tm - ta
        else:
            pr, qr, tb, pm, qm, tm = pm, qm, tm, pm + pl, qm + ql, ta * tm - tb


def markoff_length_exact(X: MarkoffStructure, s: Slope) -> float:
    """Length from the exact integer trace; math.log handles any size of int."""
    return length_from_log_trace(math.log(exact_trace(X, s)))


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------

def twist_on_structure(X: MarkoffStructure, t: TwistSpec) -> MarkoffStructure:
    """Marking change: basis traces of the image are traces of T^-a basis slopes."""
    inv = t.inverse()
    images = [twist_on_slope(inv, b) for b in BASIS]
    logs = [log_trace(X, s) for s in images]
    exact = None
    if X.exact is not None:
        exact = tuple(exact_trace(X, s) for s in images)
    Y = MarkoffStructure(logs[0], logs[1], logs[2], X.eps, exact)
    if Y.relation_residual() > 1e-6:
        raise ArithmeticError("trace relation degraded beyond 1e-6 after twisting")
    return Y


def twisted_length(X: MarkoffStructure, t: TwistSpec, tau: Slope) -> float:
    """Length of tau on the twisted structure, computed by pushing the slope."""
    return markoff_length(X, twist_on_slope(t.inverse(), tau))


# ---------------------------------------------------------------------------
# systole and short marking
# ---------------------------------------------------------------------------

def _reduce_triangle(X: MarkoffStructure):
    """Vieta-reduce the basis triangle until no flip decreases a trace.

    Returns three (p, q, log_trace) vertices with vec3 = vec1 + vec2.  At the
    reduced triangle the minimum over its vertices is the global minimum of the
    trace function over all slopes.
    """
    tri = [
        [1, 0, X.log_x],
        [0, 1, X.log_y],
        [1, 1, X.log_z],
    ]
    for _ in range(20000):
        best = -1
        best_lt = 0.0
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            d = tri[i][2] - tri[j][2] - tri[k][2]
            if d >= 0.0:
                raise ArithmeticError("triple too unbalanced to reduce in float logs")
            lt = tri[j][2] + tri[k][2] + math.log1p(-math.exp(d))
            if lt < tri[i][2] - 1e-12 and (best < 0 or lt < best_lt):
                best, best_lt = i, lt
        if best < 0:
            a, b, c = sorted(tri, key=lambda v: v[2])
            # re-orient so the third entry is the vector sum of the first two
            for u, v, w in ((a, b, c), (a, c, b), (b, c, a)):
                if (u[0] + v[0], u[1] + v[1]) in ((w[0], w[1]), (-w[0], -w[1])):
                    return [u, v, [u[0] + v[0], u[1] + v[1], w[2]]]
            raise AssertionError("reduced triangle lost the mediant relation")
        j, k = (best + 1) % 3, (best + 2) % 3
        # mirror: replace vertex i by the reflection (sum or difference of j, k)
        pi, qi = tri[best][0], tri[best][1]
        pj, qj, pk, qk = tri[j][0], tri[j][1], tri[k][0], tri[k][1]
        if (pj + pk, qj + qk) in ((pi, qi), (-pi, -qi)):
            np_, nq_ = pj - pk, qj - qk
        else:
            np_, nq_ = pj + pk, qj + qk
        tri[best] = [np_, nq_, best_lt]
    raise ArithmeticError("triangle reduction did not terminate")


def systole(X: MarkoffStructure) -> float:
    tri = _reduce_triangle(X)
    return length_from_log_trace(min(v[2] for v in tri))


def enumerate_by_log_trace(X: MarkoffStructure, lthr: float) -> Iterator[tuple[Slope, float]]:
    """All canonical slopes with log-trace <= lthr, as (slope, log_trace) pairs.

    Pure-python companion of the counting kernel; carries exact integer (p, q),
    so there is no size bound on the emitted slopes.
    """
    if X.log_x <= lthr:
        yield Slope(1, 0), X.log_x
    if X.log_y <= lthr:
        yield Slope(0, 1), X.log_y
    lz2 = log_sub(X.log_x + X.log_y, X.log_z)
    stack = [
        (0, 1, 1, 0, 1, 1, X.log_y, X.log_x, X.log_z),
        (-1, 0, 0, 1, -1, 1, X.log_x, X.log_y, lz2),
    ]
    while stack:
        pl, ql, pr, qr, pm, qm, la, lb, lm = stack.pop()
        if lm <= lthr:
            yield Slope(pm, qm), lm
        elif lm >= la and lm >= lb:
            continue
        lchild = la + lm + math.log1p(-math.exp(lb - la - lm))
        rchild = lm + lb + math.log1p(-math.exp(la - lm - lb))
        stack.append((pl, ql, pm, qm, pl + pm, ql + qm, la, lm, lchild))
        stack.append((pm, qm, pr, qr, pm + pr, qm + qr, lm, lb, rchild))


@dataclass(frozen=True)
class ShortMarking:
    """Shortest slope plus the shortest slope crossing it exactly once."""

    eta: Slope
    delta: Slope

    def __post_init__(self):
        if intersection_number(self.eta, self.delta) != 1:
            raise ValueError("marking slopes must intersect exactly once")

    def curves(self) -> tuple[Slope, Slope]:
        return (self.eta, self.delta)

    def paired(self, s: Slope) -> Slope:
        if s == self.eta:
            return self.delta
        if s == self.delta:
            return self.eta
        raise KeyError(f"{s} is not a marking curve")


def _family_minimizers(l_eta: float, base: tuple[int, int], step: tuple[int, int],
                       lt0: float, lt1: float, tol: float):
    """Minimise the trace over the neighbor family base + k*step.

    lt0, lt1 are the log-traces at k = 0, 1; the family satisfies the
    recursion t(k+1) = t_eta * t(k) - t(k-1) and is unimodal in k, so walk both
    directions from the initial pair until traces leave the running minimum.
    """
    found: list[tuple[float, Slope]] = []
    best = min(lt0, lt1)
    for direction in (1, -1):
        prev, cur = lt0, lt1
        k_prev, k_cur = 0, direction
        if direction == -1:
            # step backwards from (t1, t0): t(-1) = t_eta*t(0) - t(1)
            prev, cur = lt1, lt0
            k_prev, k_cur = 1, 0
        while True:
            if cur < best:
                best = cur
            if cur <= best + tol:
                found.append((cur, Slope(base[0] + k_cur * step[0],
                                         base[1] + k_cur * step[1])))
            if cur > best + tol and cur > prev:
                break
            nxt = l_eta + cur + math.log1p(-math.exp(prev - l_eta - cur))
            prev, cur = cur, nxt
            k_prev, k_cur = k_cur, k_cur + direction
    winners = [s for lt, s in found if lt <= best + tol]
    return best, sorted(set(winners))


@lru_cache(maxsize=8192)
def short_marking(X: MarkoffStructure) -> ShortMarking:
    """Deterministic short marking: lexicographic tie-breaking on (p, q)."""
    tol = 1e-9
    tri = _reduce_triangle(X)
    lt_min = min(v[2] for v in tri)
    minimizers = sorted(s for s, _ in enumerate_by_log_trace(X, lt_min + tol))
    eta = minimizers[0]
    l_eta = log_trace(X, eta)
    # one Farey neighbor of eta from the reduced triangle, plus the trace of
    # neighbor + eta, seeds the unimodal family walk
    verts = {(v[0], v[1]): v[2] for v in tri}
    items = list(verts.items())
    eta_vec = None
    for (p, q), _lt in items:
        if Slope(p, q) == eta:
            eta_vec = (p, q)
    assert eta_vec is not None
    for (p, q), lt0 in items:
        if Slope(p, q) == eta:
            continue
        base = (p, q)
        nxt = (base[0] + eta_vec[0], base[1] + eta_vec[1])
        if (nxt[0], nxt[1]) in verts:
            lt1 = verts[nxt]
        elif (-nxt[0], -nxt[1]) in verts:
            lt1 = verts[(-nxt[0], -nxt[1])]
        else:
            lt1 = log_trace(X, Slope(*nxt))
        break
    _, winners = _family_minimizers(l_eta, base, eta_vec, lt0, lt1, tol)
    return ShortMarking(eta, winners[0])


# ---------------------------------------------------------------------------
# coarse length / distance estimates from the marking
# ---------------------------------------------------------------------------

def length_formula_estimate(X: MarkoffStructure, s: Slope) -> float:
    """Sum of i(s, gamma) * length(paired gamma) over the marking curves."""
    mk = short_marking(X)
    return (intersection_number(s, mk.eta) * markoff_length(X, mk.delta)
            + intersection_number(s, mk.delta) * markoff_length(X, mk.eta))


def distance_formula_estimate(X: MarkoffStructure, Y: MarkoffStructure) -> float:
    """log of the maximum marking-length ratio; a coarse estimate, not a metric."""
    mk = short_marking(X)
    return max(
        math.log(markoff_length(Y, g)) - math.log(markoff_length(X, g))
        for g in mk.curves()
    )


def twisted_distance_estimate(X: MarkoffStructure, t: TwistSpec) -> float:
    """distance_formula_estimate(X, T_t X) evaluated by pushing slopes through X.

    Identical to the two-structure estimate by the change-of-marking identity,
    but stays accurate for arbitrarily large twist powers.
    """
    inv = t.inverse()
    mk = short_marking(X)
    return max(
        math.log(markoff_length(X, twist_on_slope(inv, g)))
        - math.log(markoff_length(X, g))
        for g in mk.curves()
    )


# ---------------------------------------------------------------------------
# thick-part sampling
# ---------------------------------------------------------------------------

def sample_thick(rng: np.random.Generator, eps: float = DEFAULT_EPS,
                 lo: float = 2.2, hi: float = 8.0,
                 max_tries: int = 10000) -> MarkoffStructure:
    """Rejection-sample a structure with systole >= eps.

    Draws x, y uniform, solves the trace relation for the larger root z and
    rejects on a negative discriminant or a thin systole.
    """
    for _ in range(max_tries):
        x = rng.uniform(lo, hi)
        y = rng.uniform(lo, hi)
        disc = x * x * y * y - 4.0 * (x * x + y * y)
        if disc < 0.0:
            continue
        z = 0.5 * (x * y + math.sqrt(disc))
        X = MarkoffStructure(math.log(x), math.log(y), math.log(z), eps)
        if systole(X) >= eps:
            return X
    raise RuntimeError("thick-part sampling failed; eps too large for the box?")


def random_slope(rng: np.random.Generator, max_entry: int = 10) -> Slope:
    while True:
        p = int(rng.integers(-max_entry, max_entry + 1))
        q = int(rng.integers(0, max_entry + 1))
        if p == 0 and q == 0:
            continue
        if math.gcd(abs(p), abs(q)) != 1:
            continue
        return Slope(p, q)
