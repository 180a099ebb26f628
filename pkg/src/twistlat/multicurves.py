"""Coefficient-vector combinatorics: taxonomy, composition counts, weighted
Cauchy-Schwarz slack, balance thresholds and the harmonic-sum bookkeeping
behind the R * e^R lower bound.

Pure integer/rational functions, independent of any geometric backend; the
component-count cap h/2 is a module parameter (default h = 12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

DEFAULT_H = 12

CLASS_SINGLE = "single"
CLASS_POSITIVE = "positive"
CLASS_NEGATIVE = "negative"
CLASS_MIXED_GE2 = "mixed-sign-all-ge2"
CLASS_MIXED_OTHER = "mixed-sign-other"


@dataclass(frozen=True)
class CoefficientVector:
    """Nonzero integer coefficients of a multicurve, 1 <= k <= h/2."""

    coeffs: tuple[int, ...]
    h: int = DEFAULT_H

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("need at least one coefficient")
        if any(a == 0 for a in self.coeffs):
            raise ValueError("coefficients must be nonzero")
        if len(self.coeffs) > self.h // 2:
            raise ValueError(f"at most h/2 = {self.h // 2} components allowed")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def total_weight(self) -> int:
        """Sum of absolute coefficients (always >= k)."""
        return sum(abs(a) for a in self.coeffs)


def classify(v: CoefficientVector) -> str:
    """Total, mutually exclusive classification of the coefficient pattern."""
    if v.k == 1:
        return CLASS_SINGLE
    if all(a > 0 for a in v.coeffs):
        return CLASS_POSITIVE
    if all(a < 0 for a in v.coeffs):
        return CLASS_NEGATIVE
    if all(abs(a) >= 2 for a in v.coeffs):
        return CLASS_MIXED_GE2
    return CLASS_MIXED_OTHER


def in_star_family(v: CoefficientVector) -> bool:
    """Whether the vector is single, one-signed, or mixed with all |a_i| >= 2."""
    return classify(v) != CLASS_MIXED_OTHER


def cauchy_schwarz_slack(v: CoefficientVector, lengths: Sequence) -> object:
    """Slack of (sum |a| ell)^2 <= (sum |a|) * sum |a| ell^2; exact on rationals."""
    if len(lengths) != v.k:
        raise ValueError("lengths must match the component count")
    if any(ell <= 0 for ell in lengths):
        raise ValueError("lengths must be positive")
    weighted = sum(abs(a) * ell for a, ell in zip(v.coeffs, lengths))
    quad = sum(abs(a) * ell * ell for a, ell in zip(v.coeffs, lengths))
    return v.total_weight * quad - weighted * weighted


def count_compositions(s: int, k: int) -> int:
    """Number of ordered k-tuples of positive integers summing to s: C(s-1, k-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    if s < k:
        return 0
    return math.comb(s - 1, k - 1)


def count_balanced(s: int, k: int, l: int) -> int:
    """Compositions of s into k parts all >= l: C(s - k(l-1) - 1, k - 1)."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    reduced = s - k * (l - 1)
    if reduced < k:
        return 0
    return math.comb(reduced - 1, k - 1)


def composition_lower_bound_holds(s: int, k: int) -> bool:
    """Exact check of C(s-1, k-1) >= s^(k-1) / (2^(k-1) (k-1)!)."""
    lhs = count_compositions(s, k) * 2 ** (k - 1) * math.factorial(k - 1)
    return lhs >= s ** (k - 1)


def find_balance_threshold(k: int, fraction: Fraction = Fraction(1, 2),
                           s_max: int = 200, t_max: int = 64) -> int:
    """Smallest t with count_balanced(s, k, ceil(s/t)) >= fraction * count(s, k)
    for every s in [max(2(k-1), k), s_max]; existence is a measure fact, the
    value is computed."""
    s_lo = max(2 * (k - 1), k, 1)
    for t in range(1, t_max + 1):
        ok = True
        for s in range(s_lo, s_max + 1):
            l = -(-s // t)  # ceil(s / t)
            if count_balanced(s, k, l) * fraction.denominator < \
                    fraction.numerator * count_compositions(s, k):
                ok = False
                break
        if ok:
            return t
    raise RuntimeError(f"no balance threshold below {t_max} on the tested range")


def scaling_bounds_hold(v: CoefficientVector, base_lengths: Sequence, t: int) -> bool:
    """For balanced vectors (all |a_i| >= s/t): (s/t) L <= weighted length <= s L,
    with L the unweighted total; exact when lengths are Fractions."""
    s = v.total_weight
    if any(abs(a) * t < s for a in v.coeffs):
        raise ValueError("vector is not balanced at level s/t")
    base = sum(base_lengths)
    weighted = sum(abs(a) * ell for a, ell in zip(v.coeffs, base_lengths))
    return t * weighted >= s * base and weighted <= s * base


def harmonic_sum(lo: int, hi: int) -> float:
    """Sum of 1/s over [lo, hi]; asymptotic expansion above 10^6 terms."""
    if hi < lo:
        return 0.0

    def _h(n: int) -> float:
        if n <= 0:
            return 0.0
        if n <= 10**6:
            return float(sum(1.0 / s for s in range(1, n + 1)))
        # H_n = ln n + gamma + 1/2n - 1/12n^2 + O(n^-4)
        gamma = 0.5772156649015329
        return math.log(n) + gamma + 0.5 / n - 1.0 / (12.0 * n * n)

    return _h(hi) - _h(lo - 1)


def count_prefactor(k: int, t: int, n_const: float = 1.0) -> float:
    """The lower-bound prefactor n / (2^(k+1) (k-1)! t^k)."""
    return n_const / (2 ** (k + 1) * math.factorial(k - 1) * t**k)


def lower_bound_ledger(k: int, r_grid: Sequence[float], h_const: float, t: int,
                       r_scale: float = 1.0, n_const: float = 1.0) -> list[dict]:
    """Per-radius bookkeeping of the harmonic-sum lower bound.

    For each R: the weight sum runs over s in [h-2, e^(R-H)/(t r^2)] where
    h = 2k; reports the harmonic factor (linear in R) and the resulting
    prefactor * R * e^(kR) bound shape.
    """
    h = 2 * k
    records = []
    for R in r_grid:
        s_lo = max(h - 2, 1)
        s_hi = int(math.floor(math.exp(R - h_const) / (t * r_scale * r_scale)))
        harm = harmonic_sum(s_lo, s_hi)
        r_min = 2.0 * (h_const + math.log(t * r_scale * r_scale)
                       + math.log(max(h - 2, 1)))
        records.append({
            "R": R,
            "s_lo": s_lo,
            "s_hi": s_hi,
            "harmonic": harm,
            "harmonic_ge_half_R": harm >= 0.5 * R,
            "linear_regime": R >= r_min,
            "lower_bound": count_prefactor(k, t, n_const) * R * math.exp(k * R),
        })
    return records
