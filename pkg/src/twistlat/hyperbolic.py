"""Upper half-plane numerics: Moebius action, distances, collar width."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Teichmueller metric normalisation on the once-punctured torus: d_T = 1/2 d_H2.
#: Kept as a single constant so census experiments can be rerun at scale 1.0 to
#: confirm fitted growth exponents double.
TEICH_METRIC_SCALE = 0.5


@dataclass(frozen=True)
class H2Point:
    """Point of the upper half-plane, im > 0."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("coordinates must be finite")
        if self.im <= 0.0:
            raise ValueError("im must be strictly positive")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> "H2Point":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class IntMatrix2:
    """Integer 2x2 matrix of determinant one (arbitrary precision entries)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "IntMatrix2":
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def power(self, n: int) -> "IntMatrix2":
        m = IntMatrix2(1, 0, 0, 1)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            m = m @ base
        return m


IDENTITY = IntMatrix2(1, 0, 0, 1)


def mobius_apply(m: IntMatrix2, z: H2Point) -> H2Point:
    """Apply (a z + b) / (c z + d); det 1 keeps the image in the half-plane."""
    w = (m.a * z.z + m.b) / (m.c * z.z + m.d)
    return H2Point(w.real, w.imag)


def hyp_distance(z: H2Point, w: H2Point) -> float:
    """Hyperbolic distance, acosh(1 + |z-w|^2 / (2 im(z) im(w)))."""
    dx = z.re - w.re
    dy = z.im - w.im
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * z.im * w.im))


def teich_distance_h2(z: H2Point, w: H2Point) -> float:
    """Teichmueller distance in the half-plane model of the punctured torus."""
    return TEICH_METRIC_SCALE * hyp_distance(z, w)


def collar_width(length: float) -> float:
    """Half-width arcsinh(1/sinh(L/2)) of the embedded collar around a geodesic.

    Strictly decreasing in the length; rejects nonpositive input.
    """
    if length <= 0.0:
        raise ValueError("geodesic length must be positive")
    return math.asinh(1.0 / math.sinh(0.5 * length))
