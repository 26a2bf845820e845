"""Sugeno integrals over intervals and Hermite-Hadamard type bounds for
log-convex functions."""

from .analysis import RealFunction, classify, log_majorant, logarithmic_mean
from .expr import Expression, parse
from .hh import bound_general, bound_unit, classical_check, verify_bound
from .measure import FuzzyMeasure, Interval, IntervalUnion, lebesgue
from .sugeno import distribution, integrate, integrate_fixed_point, integrate_grid

__all__ = [
    "Expression",
    "FuzzyMeasure",
    "Interval",
    "IntervalUnion",
    "RealFunction",
    "bound_general",
    "bound_unit",
    "classical_check",
    "classify",
    "distribution",
    "integrate",
    "integrate_fixed_point",
    "integrate_grid",
    "lebesgue",
    "log_majorant",
    "logarithmic_mean",
    "parse",
    "verify_bound",
]
