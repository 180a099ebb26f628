"""Slopes (isotopy classes of simple closed curves on the punctured torus) and twists.

A slope is a primitive integer pair (p, q); (p, q) and (-p, -q) are the same
curve, canonicalised to q > 0 or (p, q) = (1, 0).  Geometric intersection
number is |p q' - q p'|, and a power-a twist about (p, q) acts on homology by
the determinant-one parabolic [[1 - a p q, a p^2], [-a q^2, 1 + a p q]].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .hyperbolic import IntMatrix2


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("slope (0, 0) is not a curve")
        if math.gcd(abs(p), abs(q)) != 1:
            raise ValueError(f"slope ({p}, {q}) is not primitive")
        if q < 0 or (q == 0 and p < 0):
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)

    def __repr__(self):
        return f"Slope({self.p}, {self.q})"

    def to_text(self) -> str:
        return f"slope({self.p}/{self.q})"

    @classmethod
    def from_text(cls, text: str) -> "Slope":
        m = re.fullmatch(r"slope\((-?\d+)/(-?\d+)\)", text.strip())
        if m is None:
            raise ValueError(f"not a slope literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))


def canonical(p: int, q: int) -> Slope:
    g = math.gcd(abs(p), abs(q))
    if g == 0:
        raise ValueError("slope (0, 0) is not a curve")
    return Slope(p // g, q // g)


def cross(s1: Slope, s2: Slope) -> int:
    """Signed intersection pairing p1*q2 - q1*p2."""
    return s1.p * s2.q - s1.q * s2.p


def intersection_number(s1: Slope, s2: Slope) -> int:
    """Geometric intersection number; zero exactly for equal slopes."""
    return abs(cross(s1, s2))


@dataclass(frozen=True)
class TwistSpec:
    """A twist: curve plus a nonzero integer power."""

    curve: Slope
    power: int

    def __post_init__(self):
        if self.power == 0:
            raise ValueError("twist power must be nonzero")

    def inverse(self) -> "TwistSpec":
        return TwistSpec(self.curve, -self.power)


def twist_matrix(t: TwistSpec) -> IntMatrix2:
    """Homology action of the twist: a parabolic fixing p/q, trace 2, det 1."""
    p, q, a = t.curve.p, t.curve.q, t.power
    return IntMatrix2(1 - a * p * q, a * p * p, -a * q * q, 1 + a * p * q)


def twist_on_slope(t: TwistSpec, target: Slope) -> Slope:
    """Image of a slope under the twist: target + a * <curve, target> * curve."""
    k = t.power * cross(t.curve, target)
    return Slope(target.p + k * t.curve.p, target.q + k * t.curve.q)


def matrix_on_slope(m: IntMatrix2, s: Slope) -> Slope:
    """Projective action on the boundary fixed point: column (p, q) -> M (p, q)."""
    return Slope(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q)
