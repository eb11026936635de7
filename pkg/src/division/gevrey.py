"""
Division - Gevrey Order Fitting

Fits log(|b_l| / l!) = alpha * l log l + c * l + c_0 over the top half of a
coefficient stream b_0..b_L. The c * l term absorbs geometric constants.
"""

import logging
from fractions import Fraction
from typing import List, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, Field

from src.errors import UndefinedFitError

logger = logging.getLogger(__name__)

MIN_POINTS = 6


class GevreyFit(BaseModel):
    """Fitted Gevrey index of a coefficient stream."""

    alpha_hat: float
    c: float = Field(description="Geometric rate term")
    c0: float
    fit_window: Tuple[int, int] = Field(description="Inclusive index range of the fit")
    indices: List[int] = Field(description="Indices with nonzero coefficients used in the fit")
    r2: float
    window_shrunk: bool = Field(description="Zero coefficients were skipped or the window extended")


def log_abs(value) -> float:
    """log |value| for Fractions, big ints or mpf without overflow."""
    if isinstance(value, Fraction):
        return float(mpmath.log(abs(value.numerator)) - mpmath.log(value.denominator))
    return float(mpmath.log(abs(mpmath.mpf(value))))


def derivative_stream(taylor: Sequence) -> List:
    """b_l = l! * c_l: derivative values at 0 from Taylor coefficients."""
    out, factorial = [], 1
    for l, c in enumerate(taylor):
        if l:
            factorial *= l
        out.append(c * factorial)
    return out


def gevrey_fit(coeffs: Sequence) -> GevreyFit:
    """Least-squares Gevrey index over the top half of the stream."""
    L = len(coeffs) - 1
    nonzero = [l for l, b in enumerate(coeffs) if b != 0]
    if not nonzero:
        raise UndefinedFitError("all coefficients vanish; Gevrey index undefined")

    start = L // 2
    window = [l for l in nonzero if l >= start]
    shrunk = len(window) < L - start + 1
    while len(window) < MIN_POINTS and start > 0:
        start -= 1
        window = [l for l in nonzero if l >= start]
        shrunk = True
    if len(window) < MIN_POINTS:
        raise UndefinedFitError(f"only {len(window)} nonzero coefficients; need {MIN_POINTS}")
    if shrunk:
        logger.warning("Gevrey fit window [%d, %d] has zero coefficients; using %d points", start, L, len(window))

    l = np.array(window, dtype=float)
    y = np.array([log_abs(coeffs[i]) - float(mpmath.loggamma(i + 1)) for i in window])
    with np.errstate(divide="ignore", invalid="ignore"):
        l_log_l = np.where(l > 0, l * np.log(np.where(l > 0, l, 1.0)), 0.0)
    design = np.column_stack([l_log_l, l, np.ones_like(l)])
    solution, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ solution
    spread = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(residual ** 2)) / spread if spread > 0 else 1.0
    return GevreyFit(
        alpha_hat=float(solution[0]),
        c=float(solution[1]),
        c0=float(solution[2]),
        fit_window=(start, L),
        indices=window,
        r2=r2,
        window_shrunk=shrunk,
    )
