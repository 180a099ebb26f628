"""twistlat: twist lattice points, curve counting and twist-length laws on the
once-punctured torus, with brute-force oracles for every desk-checkable claim."""

__version__ = "0.1.0"

from .hyperbolic import (
    H2Point,
    IntMatrix2,
    TEICH_METRIC_SCALE,
    collar_width,
    hyp_distance,
    mobius_apply,
    teich_distance_h2,
)
from .markoff import (
    MarkoffStructure,
    ShortMarking,
    distance_formula_estimate,
    length_formula_estimate,
    markoff_length,
    modular_torus,
    sample_thick,
    short_marking,
    systole,
    twist_on_structure,
    twisted_length,
)
from .slopes import Slope, TwistSpec, intersection_number, twist_matrix, twist_on_slope

__all__ = [
    "H2Point",
    "IntMatrix2",
    "TEICH_METRIC_SCALE",
    "MarkoffStructure",
    "ShortMarking",
    "Slope",
    "TwistSpec",
    "collar_width",
    "distance_formula_estimate",
    "hyp_distance",
    "intersection_number",
    "length_formula_estimate",
    "markoff_length",
    "mobius_apply",
    "modular_torus",
    "sample_thick",
    "short_marking",
    "systole",
    "teich_distance_h2",
    "twist_matrix",
    "twist_on_slope",
    "twist_on_structure",
    "twisted_length",
]
