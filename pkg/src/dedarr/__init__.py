"""Characteristic quasi-polynomials of arrangements over Z and quadratic orders."""

from .charquasi import (
    Arrangement,
    constituents,
    evaluate,
    lcm_period,
    localize,
    m_value,
    minimality_certificate,
    subset_data,
)
from .layers import (
    intersection_lattice,
    layer_poset,
    whitney_characteristic_polynomial,
)
from .oracle import brute_count_complement, brute_count_kernel
from .quasipoly import QuasiPolynomial
from .ring import FractionalIdeal, Ideal, Ring, quadratic, rational_integers
from .rootsys import builtin

__all__ = [
    "Arrangement",
    "FractionalIdeal",
    "Ideal",
    "QuasiPolynomial",
    "Ring",
    "brute_count_complement",
    "brute_count_kernel",
    "builtin",
    "constituents",
    "evaluate",
    "intersection_lattice",
    "layer_poset",
    "lcm_period",
    "localize",
    "m_value",
    "minimality_certificate",
    "quadratic",
    "rational_integers",
    "subset_data",
    "whitney_characteristic_polynomial",
]

__version__ = "0.1.0"
