"""Formal Weierstrass division and the regularity-loss probes."""

from src.division.gevrey import GevreyFit, derivative_stream, gevrey_fit
from src.division.series import PowerSeries2, combine_remainders, translate_x
from src.division.wdiv import (
    DivisionResult,
    anisotropy_probe,
    extremal_series,
    formal_divide,
    linear_solve_divide,
    optimality_probe,
    substitute_check,
    translated_divide,
)

__all__ = [
    "GevreyFit",
    "derivative_stream",
    "gevrey_fit",
    "PowerSeries2",
    "combine_remainders",
    "translate_x",
    "DivisionResult",
    "anisotropy_probe",
    "extremal_series",
    "formal_divide",
    "linear_solve_divide",
    "optimality_probe",
    "substitute_check",
    "translated_divide",
]
