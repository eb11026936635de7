"""
Sequences - Denjoy-Carleman Weight Sequences

Construction of weight sequences M, finite-range regularity certificates,
the associated function h_M, Legendre duality and power sequences M^s.
All constants are suprema over the cached indices: they are lower bounds
on the true constants, never proofs.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src import config
from src.errors import InvalidSequenceError, SequenceRangeError
from src.schemas import SequenceSpec

logger = logging.getLogger(__name__)

Exact = Union[int, Fraction]


class DCSequence:
    """Immutable weight sequence M_0..M_{j_max} with its generator."""

    def __init__(
        self,
        spec: SequenceSpec,
        values: Sequence[mpmath.mpf],
        exact: Optional[Sequence[Exact]] = None,
    ):
        self._spec = spec
        self._values: Tuple[mpmath.mpf, ...] = tuple(values)
        self._exact: Optional[Tuple[Exact, ...]] = None if exact is None else tuple(exact)
        with mpmath.workdps(config.MP_DPS):
            self._log_values = np.array(
                [float(mpmath.log(v)) for v in self._values], dtype=float
            )
        self._log_values.setflags(write=False)

    @property
    def spec(self) -> SequenceSpec:
        return self._spec

    @property
    def generator(self) -> str:
        return self._spec.generator

    @property
    def j_max(self) -> int:
        return len(self._values) - 1

    @property
    def values(self) -> Tuple[mpmath.mpf, ...]:
        return self._values

    @property
    def log_values(self) -> np.ndarray:
        return self._log_values

    @property
    def is_exact(self) -> bool:
        return self._exact is not None

    def exact_value(self, j: int) -> Optional[Exact]:
        """Exact integer/rational M_j when the generator allows it."""
        self._check_index(j)
        return None if self._exact is None else self._exact[j]

    def _check_index(self, j: int) -> None:
        if not 0 <= j <= self.j_max:
            raise SequenceRangeError(
                f"index {j} outside cached range 0..{self.j_max}"
            )

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"DCSequence({self._spec.model_dump(exclude_none=True)}, j_max={self.j_max})"

    # Construction

    @classmethod
    def gevrey(cls, alpha: float, j_max: Optional[int] = None) -> "DCSequence":
        return cls.from_spec(SequenceSpec(generator="gevrey", alpha=alpha, j_max=j_max))

    @classmethod
    def gevrey_log(
        cls, alpha: float, beta: float, j_max: Optional[int] = None
    ) -> "DCSequence":
        return cls.from_spec(
            SequenceSpec(generator="gevrey_log", alpha=alpha, beta=beta, j_max=j_max)
        )

    @classmethod
    def explicit(cls, values: List[float]) -> "DCSequence":
        return cls.from_spec(SequenceSpec(generator="explicit", values=values))

    @classmethod
    def from_spec(cls, spec: SequenceSpec) -> "DCSequence":
        if spec.generator == "explicit":
            return cls._build_explicit(spec)
        if spec.generator == "power":
            base = cls.from_spec(spec.base)
            return _raise_to_power(base, spec.s)

        j_max = spec.j_max if spec.j_max is not None else config.J_MAX
        if j_max < 8:
            raise InvalidSequenceError(f"j_max must be >= 8, got {j_max}")
        alpha = spec.alpha
        beta = spec.beta or 0.0
        integral = float(alpha).is_integer() and beta == 0.0

        with mpmath.workdps(config.MP_DPS):
            if integral:
                exact = [math.factorial(j) ** int(alpha) for j in range(j_max + 1)]
                values = [mpmath.mpf(v) for v in exact]
                return cls(spec, values, exact)
            values = []
            for j in range(j_max + 1):
                log_m = mpmath.mpf(alpha) * mpmath.loggamma(j + 1)
                if beta:
                    log_m += mpmath.mpf(beta) * j * mpmath.log(mpmath.log(j + mpmath.e))
                values.append(mpmath.exp(log_m))
        return cls(spec, values)

    @classmethod
    def _build_explicit(cls, spec: SequenceSpec) -> "DCSequence":
        raw = spec.values
        if len(raw) < 2:
            raise InvalidSequenceError("explicit sequences need at least M_0 and M_1")
        if any(v <= 0 for v in raw):
            raise InvalidSequenceError("explicit values must be positive")
        if raw[0] != 1:
            raise InvalidSequenceError(f"explicit values must start with M_0 = 1, got {raw[0]}")
        exact = [Fraction(v) for v in raw]
        with mpmath.workdps(config.MP_DPS):
            values = [mpmath.mpf(v.numerator) / v.denominator for v in exact]
        return cls(spec, values, exact)

    def to_spec(self) -> SequenceSpec:
        return self._spec


def _raise_to_power(base: DCSequence, s: float) -> DCSequence:
    spec = SequenceSpec(generator="power", base=base.spec, s=s)
    with mpmath.workdps(config.MP_DPS):
        values = [v ** mpmath.mpf(s) for v in base.values]
    exact = None
    if base.is_exact and float(s).is_integer():
        exact = [base.exact_value(j) ** int(s) for j in range(base.j_max + 1)]
    return DCSequence(spec, values, exact)


class RegularityReport(BaseModel):
    """Finite-range certificates of the strong regularity axioms."""

    j_max: int = Field(description="Largest index used by every certificate")
    normalized: bool = Field(description="M_0 = 1")
    increasing: bool = Field(description="M_{j+1} >= M_j for all cached j")
    log_convex: bool = Field(description="M_j^2 <= M_{j-1} M_{j+1} for all cached j")
    superadditive: bool = Field(description="M_j M_k <= M_{j+k} for all cached pairs")
    moderate_growth_A: float = Field(
        description="Smallest A >= 1 with M_{j+k} <= A^{j+k} M_j M_k on cached pairs"
    )
    snqa_A: float = Field(
        description="Smallest A with sum_{j>=k} M_j/((j+1)M_{j+1}) <= A M_k/M_{k+1}, sums cut at j_max"
    )
    snqa_truncation_bound: float = Field(description="Magnitude of the last summed term")
    snqa_truncated: bool = Field(default=True)
    derivation_A: float = Field(description="Smallest A with M_{j+1} <= A^{j+1} M_j")
    short_range: bool = Field(description="Fewer than 9 cached values")
    lower_bounds: bool = Field(
        default=True, description="Constants are suprema over cached indices only"
    )


def seq_value(seq: DCSequence, j: int) -> mpmath.mpf:
    """Return M_j; exact integers are returned as exact mpf values."""
    seq._check_index(j)
    return seq.values[j]


def check_regularity(seq: DCSequence) -> RegularityReport:
    """Check the strong regularity axioms over the cached range."""
    values = seq.values
    n = seq.j_max
    increasing = all(values[j + 1] >= values[j] for j in range(n))
    if seq.generator == "explicit" and not increasing:
        raise InvalidSequenceError("explicit values must be non-decreasing")
    if n < 8:
        logger.warning("sequence caches only %d values; certificates are short-range", n + 1)

    with mpmath.workdps(config.MP_DPS):
        logs = [mpmath.log(v) for v in values]
        slack = mpmath.mpf(10) ** (-(config.MP_DPS // 2))

        log_convex = all(
            2 * logs[j] <= logs[j - 1] + logs[j + 1] + slack for j in range(1, n)
        )

        superadditive = True
        growth = mpmath.mpf(0)
        for j in range(n + 1):
            for k in range(n + 1 - j):
                excess = logs[j + k] - logs[j] - logs[k]
                if excess < -slack:
                    superadditive = False
                if j + k > 0:
                    growth = max(growth, excess / (j + k))

        terms = [values[j] / ((j + 1) * values[j + 1]) for j in range(n)]
        snqa = mpmath.mpf(0)
        tail = mpmath.mpf(0)
        for k in range(n - 1, -1, -1):
            tail += terms[k]
            snqa = max(snqa, tail * values[k + 1] / values[k])

        derivation = max(
            (logs[j + 1] - logs[j]) / (j + 1) for j in range(n)
        )

        report = RegularityReport(
            j_max=n,
            normalized=values[0] == 1,
            increasing=increasing,
            log_convex=log_convex,
            superadditive=superadditive,
            moderate_growth_A=float(mpmath.exp(growth)),
            snqa_A=float(snqa),
            snqa_truncation_bound=float(terms[-1]),
            derivation_A=max(1.0, float(mpmath.exp(derivation))),
            short_range=n < 8,
        )
    if report.log_convex and not report.superadditive:
        # log-convexity with M_0 = 1 forces M_j M_k <= M_{j+k}
        logger.error("log-convex sequence failed the superadditivity check: %r", seq)
    return report


def _log_h(seq: DCSequence, log_t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """log h_M on an array of log t, with the minimizing index."""
    j = np.arange(seq.j_max + 1)
    table = np.outer(log_t, j) + seq.log_values[np.newaxis, :]
    argmin = np.argmin(table, axis=1)
    return table[np.arange(len(log_t)), argmin], argmin


def h_function(seq: DCSequence, t: float) -> mpmath.mpf:
    """h_M(t) = inf_j t^j M_j, the infimum taken over the cached indices."""
    if t < 0:
        raise ValueError(f"h_M is defined for t >= 0, got {t}")
    if t == 0:
        return mpmath.mpf(0)
    with mpmath.workdps(config.MP_DPS):
        tt = mpmath.mpf(t)
        best, best_j = mpmath.mpf(1), 0
        power = mpmath.mpf(1)
        for j, value in enumerate(seq.values):
            candidate = power * value
            if candidate < best:
                best, best_j = candidate, j
            power *= tt
    if best_j == seq.j_max:
        logger.warning(
            "h_M(%g) minimum attained at j_max=%d; value saturated by the cache",
            t,
            seq.j_max,
        )
    return best


class LogGrid(BaseModel):
    """Log-spaced grid of t values."""

    t_min: float = Field(default=1e-4, gt=0)
    t_max: Optional[float] = Field(default=None, gt=0, description="Defaults to 1/M_1")
    n: int = Field(default=10_000, ge=16)

    def points(self, seq: DCSequence) -> np.ndarray:
        t_max = self.t_max if self.t_max is not None else math.exp(-seq.log_values[1])
        return np.geomspace(self.t_min, t_max, self.n)


def legendre_recover(
    seq: DCSequence, j: int, t_grid: Optional[LogGrid] = None
) -> mpmath.mpf:
    """Approximate M_j = sup_{t>0} t^{-j} h_M(t) on a log grid."""
    seq._check_index(j)
    grid = (t_grid or LogGrid()).points(seq)
    log_t = np.log(grid)
    log_h, _ = _log_h(seq, log_t)
    dual = log_h - j * log_t
    best = int(np.argmax(dual))
    if best in (0, len(grid) - 1):
        logger.warning(
            "Legendre supremum for j=%d attained at grid endpoint t=%g; grid too small",
            j,
            grid[best],
        )
    with mpmath.workdps(config.MP_DPS):
        return mpmath.exp(mpmath.mpf(float(dual[best])))


class PowerSequenceResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sequence: DCSequence = Field(exclude=True)
    s: float
    a1: float = Field(description="Empirical A_1 in A_1^{j+1} M_j^s <= M_floor(sj)")
    a2: float = Field(description="Empirical A_2 in M_floor(sj) <= A_2^{j+1} M_j^s")
    checked_up_to: int = Field(description="Largest j used in the sandwich check")
    limited: bool = Field(description="floor(s j_max) exceeds the cache")


def power_sequence(seq: DCSequence, s: float) -> PowerSequenceResult:
    """The power sequence (M_j^s)_j with the empirical sandwich constants."""
    if s < 1:
        raise ValueError(f"power_sequence needs s >= 1, got {s}")
    powered = _raise_to_power(seq, s)
    limited = math.floor(s * seq.j_max) > seq.j_max
    if limited:
        logger.info("power sandwich checked only for j <= j_max/s = %d", int(seq.j_max / s))

    exponents = []
    j = 0
    while math.floor(s * j) <= seq.j_max:
        ratio = seq.log_values[math.floor(s * j)] - s * seq.log_values[j]
        exponents.append(ratio / (j + 1))
        j += 1
    return PowerSequenceResult(
        sequence=powered,
        s=s,
        a1=math.exp(min(exponents)),
        a2=math.exp(max(exponents)),
        checked_up_to=j - 1,
        limited=limited,
    )


class KappaEstimate(BaseModel):
    s: float
    kappa: float = Field(description="Smallest grid kappa with h(t) <= h(kappa t)^s")
    t_min: float
    t_max: float
    n: int


def kappa_estimate(
    seq: DCSequence,
    s: float,
    t_grid: Optional[LogGrid] = None,
    kappa_max: float = 1e3,
    n_kappa: int = 600,
) -> KappaEstimate:
    """Empirical constant kappa_s in h_M(t) <= h_M(kappa_s t)^s."""
    grid = (t_grid or LogGrid(n=2000)).points(seq)
    log_t = np.log(grid)
    log_h, argmin = _log_h(seq, log_t)
    # saturated values of h are not trustworthy
    keep = argmin < seq.j_max
    if not keep.any():
        raise InvalidSequenceError("t grid lies entirely in the saturated range of h_M")
    log_t, log_h = log_t[keep], log_h[keep]

    for kappa in np.geomspace(1.0, kappa_max, n_kappa):
        shifted, _ = _log_h(seq, log_t + math.log(kappa))
        if np.all(log_h <= s * shifted + 1e-12):
            return KappaEstimate(
                s=s,
                kappa=float(kappa),
                t_min=float(math.exp(log_t[0])),
                t_max=float(math.exp(log_t[-1])),
                n=int(len(log_t)),
            )
    raise InvalidSequenceError(f"no kappa <= {kappa_max} satisfies the h_M inequality")
