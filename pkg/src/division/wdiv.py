"""
Division - Formal Weierstrass Division

f = P q + sum_{j<d} r_j(t) x^j on truncated power series, by t-adic
fixed-point iteration on the Taylor split in x. Also hosts the exact
linear-system oracle, the substitution identity for P = x^d - t^2, the
extremal-series optimality probe, the x/t anisotropy probe and the
translated division for x^2 - 2tx + t^2 + t^4.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from pydantic import BaseModel, Field
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src import config
from src.division.gevrey import GevreyFit, derivative_stream, gevrey_fit, log_abs
from src.division.series import Key, PowerSeries2, combine_remainders
from src.errors import ConvergenceError, MisuseError, UndefinedFitError
from src.poly.parampoly import T1, ParamPoly
from src.sequences.dcseq import DCSequence, seq_value

logger = logging.getLogger(__name__)

ANISOTROPY_TOL = 0.2
OPTIMALITY_SLOPE_TOL = 0.05
OPTIMALITY_TAIL_FRACTION = 0.5


class DivisionSummary(BaseModel):
    """JSON view of a division result."""

    poly: str
    d: int
    m: int
    N: int
    mode: Literal["exact", "float"]
    method: Literal["iteration", "taylor_split", "linear_solve"]
    iterations: int
    residual_max: float
    residual_zero: bool = Field(description="Residual vanishes identically through degree N")
    q_terms: int
    r_terms: List[int]


class DivisionResult:
    """q and r_0..r_{d-1} with f = P q + sum r_j x^j through total degree N."""

    def __init__(
        self,
        P: ParamPoly,
        q: PowerSeries2,
        r: List[PowerSeries2],
        N: int,
        residual_max,
        iterations: int,
        method: str,
    ):
        self.P = P
        self.q = q
        self.r = r
        self.N = N
        self.residual_max = residual_max
        self.iterations = iterations
        self.method = method

    @property
    def mode(self) -> str:
        return self.q.mode

    def __repr__(self) -> str:
        return f"DivisionResult(P={self.P.expr}, N={self.N}, iterations={self.iterations})"

    def summary(self) -> DivisionSummary:
        return DivisionSummary(
            poly=str(self.P.expr),
            d=self.P.d,
            m=self.P.m,
            N=self.N,
            mode=self.mode,
            method=self.method,
            iterations=self.iterations,
            residual_max=float(self.residual_max),
            residual_zero=self.residual_max == 0,
            q_terms=len(self.q),
            r_terms=[len(rj) for rj in self.r],
        )


def _lower_part(P: ParamPoly, N: int, mode: str) -> PowerSeries2:
    """P - x^d as a series."""
    leading = (P.d, (0,) * P.m)
    return PowerSeries2(P.m, N, {(k, L): c for k, L, c in P.terms() if (k, L) != leading}, mode)


def division_residual(f: PowerSeries2, P: ParamPoly, q: PowerSeries2, r: Sequence[PowerSeries2], N: int):
    """max |coefficient| of f - P q - sum r_j x^j through degree N."""
    product = PowerSeries2.from_poly(P, N, f.mode) * q.with_order(N)
    defect = f.truncate(N) - product - combine_remainders(r, N)
    return defect.max_abs()


def _check_input(f: PowerSeries2, P: ParamPoly, N: Optional[int]) -> int:
    N = f.N if N is None else N
    if f.m != P.m:
        raise ValueError(f"series has m={f.m} but P has m={P.m}")
    if f.N < N:
        raise ValueError(f"f is truncated at {f.N} < N={N}")
    return N


def formal_divide(f: PowerSeries2, P: ParamPoly, N: Optional[int] = None) -> DivisionResult:
    """Iterate q, r = split(f - (P - x^d) q) to the fixed point at order N."""
    N = _check_input(f, P, N)
    f = f.truncate(N)
    with mpmath.workdps(config.MP_DPS):
        q, r = f.split(P.d)
        if P.trivial:
            residual = division_residual(f, P, q, r, N)
            return DivisionResult(P, q, r, N, residual, 0, "taylor_split")

        lower = _lower_part(P, N, f.mode)
        for iterations in range(1, N + 2):
            q_next, r_next = (f - lower * q.with_order(N)).split(P.d)
            if q_next == q and r_next == r:
                break
            q, r = q_next, r_next
        else:
            raise ConvergenceError(f"no fixed point after {N + 1} iterations; is a_j(0) = 0?")
        residual = division_residual(f, P, q, r, N)

    logger.debug("divided by %s at N=%d in %d iterations", P.expr, N, iterations)
    return DivisionResult(P, q, r, N, residual, iterations, "iteration")


def _monomials(m: int, N: int) -> List[Key]:
    out = []
    for total in range(N + 1):
        for k in range(total, -1, -1):
            rest = total - k
            if m == 1:
                out.append((k, (rest,)))
            else:
                out.extend((k, (a, rest - a)) for a in range(rest, -1, -1))
    return out


def linear_solve_divide(f: PowerSeries2, P: ParamPoly, N: Optional[int] = None) -> DivisionResult:
    """Brute-force oracle: equate coefficients of f = P q + r and solve exactly."""
    N = _check_input(f, P, N)
    if f.mode != "exact":
        raise MisuseError("the linear-solve oracle works in exact mode only")
    d, m = P.d, P.m
    rows = {key: i for i, key in enumerate(_monomials(m, N))}
    q_unknowns = _monomials(m, N - d) if N >= d else []
    r_unknowns = [(j, L) for j in range(min(d, N + 1)) for k, L in _monomials(m, N - j) if k == 0]
    size = len(rows)
    if len(q_unknowns) + len(r_unknowns) != size:
        raise MisuseError("coefficient system is not square")

    matrix = [[QQ(0)] * size for _ in range(size)]
    terms = [(k, L, c) for k, L, c in P.terms()]
    for col, (a, La) in enumerate(q_unknowns):
        for k, L, c in terms:
            key = (a + k, tuple(x + y for x, y in zip(La, L)))
            if key in rows:
                matrix[rows[key]][col] += QQ(c.numerator, c.denominator)
    offset = len(q_unknowns)
    for col, (j, L) in enumerate(r_unknowns, start=offset):
        matrix[rows[(j, L)]][col] = QQ(1)

    rhs = [[QQ(0)] for _ in range(size)]
    for key, c in f.truncate(N).items():
        rhs[rows[key]][0] = QQ(c.numerator, c.denominator)

    solution = DomainMatrix(matrix, (size, size), QQ).lu_solve(DomainMatrix(rhs, (size, 1), QQ))
    values = [sympy.Rational(v) for v in solution.to_Matrix()]

    def fraction(v) -> Fraction:
        return Fraction(int(v.p), int(v.q))

    q = PowerSeries2(m, max(N - d, 0), {key: fraction(v) for key, v in zip(q_unknowns, values)})
    r_maps: List[Dict[Key, Fraction]] = [{} for _ in range(d)]
    for (j, L), v in zip(r_unknowns, values[offset:]):
        r_maps[j][(0, L)] = fraction(v)
    r = [PowerSeries2(m, max(N - j, 0), r_maps[j]) for j in range(d)]
    residual = division_residual(f, P, q, r, N)
    return DivisionResult(P, q, r, N, residual, 0, "linear_solve")


# Substitution identity


class SubstituteCheck(BaseModel):
    """f(y^2) against sum_j r_j(y^d) y^(2j), coefficientwise in y."""

    passed: bool
    max_defect: float
    order: int = Field(description="Highest power of y compared")
    exact: bool


def substitute_check(f: PowerSeries2, result: DivisionResult, d: Optional[int] = None) -> SubstituteCheck:
    """Check f(y^2) = sum_j r_j(y^d) y^(2j) for a division by x^d - t^2."""
    P = result.P
    if not P.is_x_power_minus_t_squared():
        raise MisuseError(f"substitute_check needs P = x^d - t^2, got {P.expr}")
    if d is not None and d != P.d:
        raise MisuseError(f"d={d} does not match the divisor degree {P.d}")
    if f.depends_on_t():
        raise MisuseError("substitute_check needs f in x only")
    d = P.d
    order = 2 * (result.N // d) * d

    lhs: Dict[int, object] = {}
    for k, c in enumerate(f.x_stream()):
        if 2 * k <= order and c != 0:
            lhs[2 * k] = c
    rhs: Dict[int, object] = {}
    for j, rj in enumerate(result.r):
        for l, c in enumerate(rj.t_stream()):
            power = d * l + 2 * j
            if power <= order and c != 0:
                rhs[power] = rhs.get(power, 0) + c

    defects = [abs(lhs.get(p, 0) - rhs.get(p, 0)) for p in set(lhs) | set(rhs)]
    worst = max(defects, default=0)
    exact = f.mode == "exact"
    if exact:
        passed = worst == 0
    else:
        scale = max((abs(v) for v in lhs.values()), default=1)
        passed = worst <= mpmath.mpf(10) ** (-(config.MP_DPS - 10)) * max(scale, 1)
    return SubstituteCheck(passed=bool(passed), max_defect=float(worst), order=order, exact=exact)


# Extremal series and optimality


def x_power_minus_t_squared(d: int) -> ParamPoly:
    return ParamPoly.from_expr(f"x**{d} - t**2", name=f"x^{d} - t^2")


def extremal_series(seq: DCSequence, N: int, m: int = 1) -> PowerSeries2:
    """sum_k M_k x^k, so that the k-th derivative at 0 is k! M_k."""
    if seq.is_exact:
        return PowerSeries2.from_x_coeffs([seq.exact_value(k) for k in range(N + 1)], m, N, "exact")
    return PowerSeries2.from_x_coeffs([seq_value(seq, k) for k in range(N + 1)], m, N, "float")


def _try_fit(stream: Sequence) -> Optional[GevreyFit]:
    try:
        return gevrey_fit(stream)
    except UndefinedFitError as exc:
        logger.info("Gevrey fit skipped: %s", exc)
        return None


class OptimalityRow(BaseModel):
    k: int
    log_n_2k: float = Field(description="log of the t^(2k) coefficient of r_0")
    log_m_2k: float
    log_m_k: float
    ratio_matched: float = Field(description="(N_2k / M_2k^(d/2))^(1/(2k+1))")
    log_ratio_matched: float
    ratio_distilled: float = Field(description="(N_2k / M_k^(d/2))^(1/(k+1))")


class OptimalityReport(BaseModel):
    """Growth of r_0 after dividing the extremal series by x^d - t^2."""

    d: int
    K: int
    N: int
    mode: Optional[Literal["exact", "float"]] = None
    rows: List[OptimalityRow] = Field(default_factory=list)
    lower_constant_matched: Optional[float] = None
    lower_constant_distilled: Optional[float] = None
    decay_slope: Optional[float] = Field(
        default=None, description="Least-squares slope of log ratio_matched over k"
    )
    tail_ratio: Optional[float] = Field(
        default=None, description="min ratio_matched for k >= K/2 over max ratio_matched for k < K/2"
    )
    positive: Optional[bool] = Field(
        default=None, description="The matched lower bound does not decay over k <= K"
    )
    log_domain: bool = True
    gevrey: Optional[GevreyFit] = None


def lower_bound_certificate(
    rows: Sequence[OptimalityRow], K: int
) -> Tuple[Optional[float], Optional[float], bool]:
    """Slope and tail/head ratio of the matched constants; positive when neither decays."""
    ks = np.array([row.k for row in rows], dtype=float)
    logs = np.array([row.log_ratio_matched for row in rows])
    slope = float(np.polyfit(ks, logs, 1)[0]) if len(rows) >= 2 else None
    head = [row.log_ratio_matched for row in rows if 2 * row.k < K]
    tail = [row.log_ratio_matched for row in rows if 2 * row.k >= K]
    tail_ratio = math.exp(min(tail) - max(head)) if head and tail else None
    positive = (slope is None or slope >= -OPTIMALITY_SLOPE_TOL) and (
        tail_ratio is None or tail_ratio >= OPTIMALITY_TAIL_FRACTION
    )
    return slope, tail_ratio, bool(positive)


def optimality_probe(seq: DCSequence, d: int, K: int) -> OptimalityReport:
    """Lower constants of N_2k against M^(d/2) for k <= K."""
    if K == 0:
        return OptimalityReport(d=d, K=0, N=0)
    N = d * K
    f = extremal_series(seq, N)
    result = formal_divide(f, x_power_minus_t_squared(d), N)
    r0 = result.r[0]
    logs = seq.log_values

    rows = []
    with mpmath.workdps(config.MP_DPS):
        for k in range(K + 1):
            coefficient = r0[(0, (2 * k,))]
            if coefficient == 0:
                continue
            log_n = log_abs(coefficient)
            matched = (log_n - 0.5 * d * float(logs[2 * k])) / (2 * k + 1)
            distilled = (log_n - 0.5 * d * float(logs[k])) / (k + 1)
            rows.append(
                OptimalityRow(
                    k=k,
                    log_n_2k=log_n,
                    log_m_2k=float(logs[2 * k]),
                    log_m_k=float(logs[k]),
                    ratio_matched=math.exp(matched),
                    log_ratio_matched=matched,
                    ratio_distilled=math.exp(distilled),
                )
            )
    lower_matched = min(row.ratio_matched for row in rows)
    lower_distilled = min(row.ratio_distilled for row in rows)
    slope, tail, positive = lower_bound_certificate(rows, K)
    return OptimalityReport(
        d=d,
        K=K,
        N=N,
        mode=f.mode,
        rows=rows,
        lower_constant_matched=lower_matched,
        lower_constant_distilled=lower_distilled,
        decay_slope=slope,
        tail_ratio=tail,
        positive=positive,
        gevrey=_try_fit(derivative_stream(r0.t_stream())),
    )


# Anisotropy


class AnisotropyReport(BaseModel):
    """Gevrey indices of q along the pure-x and pure-t directions."""

    poly: str
    N: int
    alpha_x: Optional[float]
    alpha_t: Optional[float]
    alpha_r: List[Optional[float]] = Field(description="t-direction index of each r_j")
    alpha_f: Optional[float] = Field(description="x-direction index of f")
    agree: Optional[bool] = Field(description="|alpha_x - alpha_t| <= tolerance, when both are defined")
    tolerance: float = ANISOTROPY_TOL
    iterations: int


def _x_squared_plus_t_power(P: ParamPoly) -> bool:
    if P.m != 1 or P.d != 2 or P.coeffs[0] != 0:
        return False
    a2 = P.coeffs[1]
    if a2 == 0:
        return True
    power = sympy.Poly(a2, T1)
    return len(power.terms()) == 1 and power.LC() == 1 and power.degree() % 2 == 0


def anisotropy_probe(P: ParamPoly, f: PowerSeries2, N: Optional[int] = None) -> AnisotropyReport:
    """Compare the x- and t-direction growth of q for P = x^2 + t^(2p)."""
    if not _x_squared_plus_t_power(P):
        raise MisuseError(f"anisotropy probe needs P = x^2 + t^(2p), got {P.expr}")
    result = formal_divide(f, P, N)
    alpha_x = _try_fit(derivative_stream(result.q.x_stream()))
    alpha_t = _try_fit(derivative_stream(result.q.t_stream()))
    alpha_r = [_try_fit(derivative_stream(rj.t_stream())) for rj in result.r]
    alpha_f = _try_fit(derivative_stream(f.x_stream()))

    agree = None
    if alpha_x is not None and alpha_t is not None:
        agree = abs(alpha_x.alpha_hat - alpha_t.alpha_hat) <= ANISOTROPY_TOL
    return AnisotropyReport(
        poly=str(P.expr),
        N=result.N,
        alpha_x=None if alpha_x is None else alpha_x.alpha_hat,
        alpha_t=None if alpha_t is None else alpha_t.alpha_hat,
        alpha_r=[None if fit is None else fit.alpha_hat for fit in alpha_r],
        alpha_f=None if alpha_f is None else alpha_f.alpha_hat,
        agree=agree,
        iterations=result.iterations,
    )


# Translated division


class TranslationReport(BaseModel):
    """Division by x^2 - 2tx + t^2 + t^4 through the shift x -> x + t."""

    N: int
    q_equal: bool
    r_equal: bool
    matches: bool
    iterations_direct: int
    iterations_translated: int
    residual_zero: bool


def translated_divide(f: PowerSeries2, N: Optional[int] = None) -> TranslationReport:
    """Divide f(x + t, t) by x^2 + t^4 and transport the result back."""
    if f.m != 1:
        raise MisuseError("translated division is defined for m = 1")
    tangent = ParamPoly.from_expr("x**2 - 2*t*x + t**2 + t**4", name="x^2 - 2tx + t^2 + t^4")
    shifted = ParamPoly.from_expr("x**2 + t**4", name="x^2 + t^4")
    N = f.N if N is None else N

    inner = formal_divide(f.translate_x(1), shifted, N)
    q = inner.q.translate_x(-1)
    r1 = inner.r[1]
    r0 = inner.r[0] - r1.with_order(N).shift_t(1)
    direct = formal_divide(f, tangent, N)

    q_equal = q == direct.q
    r_equal = r0 == direct.r[0] and r1 == direct.r[1]
    if not (q_equal and r_equal):
        logger.warning("translated division disagrees with the direct division at N=%d", N)
    return TranslationReport(
        N=N,
        q_equal=q_equal,
        r_equal=r_equal,
        matches=q_equal and r_equal,
        iterations_direct=direct.iterations,
        iterations_translated=inner.iterations,
        residual_zero=direct.residual_max == 0,
    )
