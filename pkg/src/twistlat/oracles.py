"""Independent brute-force oracles.

Everything here recomputes a quantity by a route sharing no code with the
primary implementation: geodesic lengths come from explicit holonomy matrix
words instead of the trace recursion, distances from numerical integration
along the connecting geodesic, lattice counts from exhaustive conjugation,
and composition counts from literal enumeration.
"""

from __future__ import annotations

import math
from itertools import count as _count
from typing import Iterator

import numpy as np
from scipy.integrate import quad

from .hyperbolic import H2Point, IntMatrix2, hyp_distance, mobius_apply
from .markoff import MarkoffStructure
from .slopes import Slope, TwistSpec, twist_matrix

# ---------------------------------------------------------------------------
# distance by geodesic integration
# ---------------------------------------------------------------------------

def hyp_distance_integral(z: H2Point, w: H2Point) -> float:
    """Arc-length integral of |dz|/y along the circle or vertical connecting z, w."""
    if abs(z.re - w.re) < 1e-14 * max(1.0, abs(z.re)):
        lo, hi = sorted((z.im, w.im))
        val, _err = quad(lambda y: 1.0 / y, lo, hi, epsabs=1e-13, epsrel=1e-13)
        return val
    # center of the orthogonal semicircle through both points
    c = (w.re**2 + w.im**2 - z.re**2 - z.im**2) / (2.0 * (w.re - z.re))
    th1 = math.atan2(z.im, z.re - c)
    th2 = math.atan2(w.im, w.re - c)
    lo, hi = sorted((th1, th2))
    val, _err = quad(lambda th: 1.0 / math.sin(th), lo, hi,
                     epsabs=1e-13, epsrel=1e-13)
    return val


# ---------------------------------------------------------------------------
# lengths from holonomy matrix words
# ---------------------------------------------------------------------------

# integer holonomy generators of the square punctured torus: traces 3, 3, 3
SQUARE_TORUS_A = ((1, 1), (1, 2))
SQUARE_TORUS_B = ((1, -1), (-1, 2))


def _mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _mat_inv(m):
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def staircase_word(p: int, q: int) -> list[int]:
    """Mechanical word with p letters 0 and q letters 1 tracing the (p, q) line.

    The letters follow the closest lattice path under the segment to (p, q),
    which is the pattern realised by a simple curve of that homology class.
    """
    n = p + q
    return [0 if (k + 1) * p // n > k * p // n else 1 for k in range(n)]


def matrix_word_trace(p: int, q: int, mat_a, mat_b):
    """Trace of the slope (p, q) word in the given holonomy generators.

    Negative p substitutes the inverse of the first generator; works for exact
    integer matrices and float matrices alike.
    """
    if q == 0:
        return mat_a[0][0] + mat_a[1][1]
    if p == 0:
        return mat_b[0][0] + mat_b[1][1]
    a = mat_a if p > 0 else _mat_inv(mat_a)
    m = ((1, 0), (0, 1))
    for letter in staircase_word(abs(p), q):
        m = _mat_mul(m, a if letter == 0 else mat_b)
    return m[0][0] + m[1][1]


def holonomy_generators(x: float, y: float, z: float):
    """A float holonomy realisation of the trace triple (x, y, z).

    Any representation with these generator traces yields the same trace for
    every slope word, so the concrete choice is irrelevant to the oracle.
    """
    xi = 0.5 * (-z - math.sqrt(z * z - 4.0))
    mat_a = ((x, 1.0), (-1.0, 0.0))
    mat_b = ((0.0, xi), (-1.0 / xi, y))
    return mat_a, mat_b


def word_trace(X: MarkoffStructure, s: Slope):
    """Trace of a slope by matrix words; exact integers on the square torus."""
    if X.exact == (3, 3, 3):
        return matrix_word_trace(s.p, s.q, SQUARE_TORUS_A, SQUARE_TORUS_B)
    mat_a, mat_b = holonomy_generators(X.x, X.y, X.z)
    return matrix_word_trace(s.p, s.q, mat_a, mat_b)


def word_length(X: MarkoffStructure, s: Slope) -> float:
    t = word_trace(X, s)
    return 2.0 * math.acosh(0.5 * float(t))


# ---------------------------------------------------------------------------
# windowed brute-force slope enumeration
# ---------------------------------------------------------------------------

def _primitive_window(b: int) -> Iterator[Slope]:
    seen = set()
    for p in range(-b, b + 1):
        for q in range(0, b + 1):
            if p == 0 and q == 0:
                continue
            if math.gcd(abs(p), abs(q)) != 1:
                continue
            s = Slope(p, q)
            if (s.p, s.q) not in seen:
                seen.add((s.p, s.q))
                yield s


def brute_slopes_by_length(X: MarkoffStructure, L: float,
                           b_start: int = 4, b_cap: int = 4096) -> list[Slope]:
    """All slopes of length <= L by scanning |p|, |q| <= B with matrix-word lengths.

    B doubles until the shortest curve on the shell |p| + |q| = B already
    exceeds L, which certifies the window is complete.
    """
    b = b_start
    while b <= b_cap:
        shell = [s for s in _primitive_window(b) if abs(s.p) + s.q == b]
        if shell and min(word_length(X, s) for s in shell) > L:
            break
        b *= 2
    else:
        raise RuntimeError("brute-force window exceeded the cap")
    found = [s for s in _primitive_window(b) if word_length(X, s) <= L]
    return sorted(found, key=lambda s: (word_length(X, s), s.p, s.q))


def brute_min_slopes(X: MarkoffStructure, window: int = 50):
    """Shortest slope and shortest crossing partner over a fixed window."""
    pairs = sorted(((word_length(X, s), s.p, s.q, s) for s in _primitive_window(window)))
    eta = pairs[0][3]
    for _l, _p, _q, s in pairs[1:]:
        if abs(s.p * eta.q - s.q * eta.p) == 1:
            return eta, s
    raise RuntimeError("no crossing slope in window")


# ---------------------------------------------------------------------------
# lattice census by explicit conjugation
# ---------------------------------------------------------------------------

def unimodular_window(bound: int) -> Iterator[IntMatrix2]:
    """All determinant-one integer matrices with entries bounded in absolute value."""
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                if a == 0:
                    if b * c != -1:
                        continue
                    for d in range(-bound, bound + 1):
                        yield IntMatrix2(a, b, c, d)
                else:
                    bc1 = 1 + b * c
                    if bc1 % a != 0:
                        continue
                    d = bc1 // a
                    if abs(d) <= bound:
                        yield IntMatrix2(a, b, c, d)


def brute_census_conjugation(z: H2Point, R: float, scale: float,
                             conj_bound: int = 30, n_cap: int = 10_000) -> int:
    """Count distinct parabolics g T^n g^-1 (all n != 0) displacing z at most R.

    Conjugates keep trace exactly +2 in the integer matrix group, so distinct
    matrices are distinct group elements; displacement is monotone in |n| for
    a fixed conjugator, so each power ladder stops at the first miss.
    """
    t_mat = IntMatrix2(1, 1, 0, 1)
    t_inv = t_mat.inverse()
    seen = set()
    for g in unimodular_window(conj_bound):
        g_inv = g.inverse()
        for step in (t_mat, t_inv):
            base = g @ step @ g_inv
            m = base
            for _n in range(1, n_cap):
                if scale * hyp_distance(mobius_apply(m, z), z) > R:
                    break
                seen.add((m.a, m.b, m.c, m.d))
                m = m @ base
    return len(seen)


def enumerate_orbit(z0: H2Point, hyp_radius: float) -> list[H2Point]:
    """Modular-group orbit points within a hyperbolic radius of the base point.

    Matrices are enumerated through the entry-norm identity
    cosh d(i, g i) = (a^2+b^2+c^2+d^2)/2 and then filtered at z0 exactly.
    """
    slack = 2.0 * hyp_distance(z0, H2Point(0.0, 1.0))
    norm_bound = 2.0 * math.cosh(hyp_radius + slack)
    bound = int(math.floor(math.sqrt(norm_bound)))
    points = []
    seen = set()
    for g in unimodular_window(bound):
        if g.a**2 + g.b**2 + g.c**2 + g.d**2 > norm_bound:
            continue
        key = (g.a, g.b, g.c, g.d) if (g.a, g.b, g.c, g.d) >= (-g.a, -g.b, -g.c, -g.d) \
            else (-g.a, -g.b, -g.c, -g.d)
        if key in seen:
            continue
        seen.add(key)
        w = mobius_apply(g, z0)
        if hyp_distance(w, z0) <= hyp_radius:
            points.append(w)
    return points


# ---------------------------------------------------------------------------
# composition enumeration
# ---------------------------------------------------------------------------

def enumerate_compositions(s: int, k: int) -> Iterator[tuple[int, ...]]:
    """Literal enumeration of ordered k-tuples of positive integers summing to s."""
    if k == 1:
        if s >= 1:
            yield (s,)
        return
    for first in range(1, s - k + 2):
        for rest in enumerate_compositions(s - first, k - 1):
            yield (first,) + rest


def brute_count_compositions(s: int, k: int) -> int:
    return sum(1 for _ in enumerate_compositions(s, k))


def brute_min_part_histogram(s: int, k: int) -> dict[int, int]:
    """Histogram of min(parts) over all compositions; yields every balanced count.

    The number of compositions with all parts >= l is the tail sum of this
    histogram from l upward.
    """
    hist: dict[int, int] = {}
    for parts in enumerate_compositions(s, k):
        m = min(parts)
        hist[m] = hist.get(m, 0) + 1
    return hist


def brute_count_balanced(s: int, k: int, l: int) -> int:
    hist = brute_min_part_histogram(s, k)
    return sum(v for m, v in hist.items() if m >= l)
