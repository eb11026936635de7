"""
Division - Truncated Power Series

Formal power series in (x, t_1, ..., t_m) truncated at total degree N.
Coefficients are exact ``Fraction``s or high-precision ``mpmath.mpf``s;
absent monomials are zero.
"""

import logging
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterator, List, Literal, Mapping, Sequence, Tuple, Union

import mpmath

from src import config
from src.poly.parampoly import ParamPoly
from src.schemas import SeriesSpec, TermSpec

logger = logging.getLogger(__name__)

Mode = Literal["exact", "float"]
Coeff = Union[Fraction, mpmath.mpf]
Key = Tuple[int, Tuple[int, ...]]


def coerce(value, mode: Mode) -> Coeff:
    """Convert a number to the coefficient type of the given mode."""
    if mode == "exact":
        if isinstance(value, mpmath.mpf):
            raise TypeError("float coefficient in an exact series")
        return Fraction(value)
    with mpmath.workdps(config.MP_DPS):
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        return mpmath.mpf(value)


class PowerSeries2:
    """Immutable truncated series; keys (k, L) with k + |L| <= N."""

    def __init__(self, m: int, N: int, coeffs: Mapping[Key, object] = (), mode: Mode = "exact"):
        if m not in (1, 2):
            raise ValueError(f"m must be 1 or 2, got {m}")
        if N < 0:
            raise ValueError(f"truncation order must be >= 0, got {N}")
        self.m = m
        self.N = N
        self.mode = mode
        store: Dict[Key, Coeff] = {}
        for (k, L), value in dict(coeffs).items():
            L = tuple(L)
            if len(L) != m:
                raise ValueError(f"monomial {(k, L)} does not have m={m} parameter exponents")
            if k + sum(L) > N:
                continue
            c = coerce(value, mode)
            if c != 0:
                store[(k, L)] = c
        self._coeffs = store

    # Construction

    @classmethod
    def zero(cls, m: int, N: int, mode: Mode = "exact") -> "PowerSeries2":
        return cls(m, N, {}, mode)

    @classmethod
    def from_x_coeffs(cls, values: Sequence, m: int, N: int, mode: Mode = "exact") -> "PowerSeries2":
        """sum_k values[k] x^k."""
        origin = (0,) * m
        return cls(m, N, {(k, origin): v for k, v in enumerate(values)}, mode)

    @classmethod
    def from_poly(cls, P: ParamPoly, N: int, mode: Mode = "exact") -> "PowerSeries2":
        return cls(P.m, N, {(k, L): c for k, L, c in P.terms()}, mode)

    @classmethod
    def from_spec(cls, spec: SeriesSpec) -> "PowerSeries2":
        coeffs: Dict[Key, object] = {}
        with mpmath.workdps(config.MP_DPS):
            for term in spec.terms:
                if spec.mode == "exact":
                    value = Fraction(term.num, term.den) if term.num is not None else Fraction(term.value)
                else:
                    value = coerce(term.value if term.value is not None else Fraction(term.num, term.den), "float")
                key = (term.k, tuple(term.L))
                coeffs[key] = coeffs.get(key, 0) + value
            return cls(spec.m, spec.N, coeffs, spec.mode)

    def to_spec(self) -> SeriesSpec:
        terms = []
        for (k, L), c in self.items():
            if self.mode == "exact":
                terms.append(TermSpec(k=k, L=list(L), num=c.numerator, den=c.denominator))
            else:
                terms.append(TermSpec(k=k, L=list(L), value=mpmath.nstr(c, config.MP_DPS)))
        return SeriesSpec(m=self.m, N=self.N, mode=self.mode, terms=terms)

    # Access

    def __getitem__(self, key: Key) -> Coeff:
        k, L = key
        return self._coeffs.get((k, tuple(L)), coerce(0, self.mode))

    def items(self) -> Iterator[Tuple[Key, Coeff]]:
        """Nonzero terms in (k, L) order."""
        for key in sorted(self._coeffs):
            yield key, self._coeffs[key]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        return f"PowerSeries2(m={self.m}, N={self.N}, mode={self.mode}, terms={len(self)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries2):
            return NotImplemented
        return (self.m, self.N, self.mode) == (other.m, other.N, other.mode) and self._coeffs == other._coeffs

    __hash__ = None

    def max_abs(self) -> Coeff:
        return max((abs(c) for c in self._coeffs.values()), default=coerce(0, self.mode))

    def depends_on_t(self) -> bool:
        return any(any(L) for _, L in self._coeffs)

    def depends_on_x(self) -> bool:
        return any(k for k, _ in self._coeffs)

    def x_stream(self) -> List[Coeff]:
        """Coefficients of x^k at t = 0, k = 0..N."""
        origin = (0,) * self.m
        return [self[(k, origin)] for k in range(self.N + 1)]

    def t_stream(self, k: int = 0) -> List[Coeff]:
        """Coefficients of x^k t_1^l (other parameters at 0), l = 0..N-k."""
        return [self[(k, (l,) + (0,) * (self.m - 1))] for l in range(self.N - k + 1)]

    # Arithmetic

    def _check(self, other: "PowerSeries2") -> None:
        if (self.m, self.mode) != (other.m, other.mode):
            raise ValueError("series differ in parameter dimension or coefficient mode")

    def _combine(self, other: "PowerSeries2", op: Callable[[Coeff, Coeff], Coeff]) -> "PowerSeries2":
        self._check(other)
        zero = coerce(0, self.mode)
        keys = set(self._coeffs) | set(other._coeffs)
        return PowerSeries2(
            self.m,
            min(self.N, other.N),
            {key: op(self._coeffs.get(key, zero), other._coeffs.get(key, zero)) for key in keys},
            self.mode,
        )

    def __add__(self, other: "PowerSeries2") -> "PowerSeries2":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PowerSeries2") -> "PowerSeries2":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "PowerSeries2":
        return self.scale(-1)

    def scale(self, c) -> "PowerSeries2":
        c = coerce(c, self.mode)
        return PowerSeries2(self.m, self.N, {key: c * v for key, v in self._coeffs.items()}, self.mode)

    def __mul__(self, other: "PowerSeries2") -> "PowerSeries2":
        self._check(other)
        N = min(self.N, other.N)
        small, large = sorted((self, other), key=len)
        out: Dict[Key, Coeff] = {}
        for (k1, L1), c1 in small._coeffs.items():
            d1 = k1 + sum(L1)
            for (k2, L2), c2 in large._coeffs.items():
                if d1 + k2 + sum(L2) > N:
                    continue
                key = (k1 + k2, tuple(a + b for a, b in zip(L1, L2)))
                out[key] = out.get(key, 0) + c1 * c2
        return PowerSeries2(self.m, N, out, self.mode)

    def truncate(self, N: int) -> "PowerSeries2":
        return self.with_order(min(N, self.N))

    def with_order(self, N: int) -> "PowerSeries2":
        """Same terms, declared (and truncated) at order N."""
        return PowerSeries2(self.m, N, self._coeffs, self.mode)

    def shift_x(self, j: int) -> "PowerSeries2":
        """Multiply by x^j."""
        return PowerSeries2(self.m, self.N, {(k + j, L): c for (k, L), c in self._coeffs.items()}, self.mode)

    def shift_t(self, l: int = 1) -> "PowerSeries2":
        """Multiply by t_1^l."""
        return PowerSeries2(
            self.m,
            self.N,
            {(k, (L[0] + l,) + L[1:]): c for (k, L), c in self._coeffs.items()},
            self.mode,
        )

    def split(self, d: int) -> Tuple["PowerSeries2", List["PowerSeries2"]]:
        """Taylor split in x: (floor(g / x^d), [coefficient of x^j, j < d])."""
        quotient: Dict[Key, Coeff] = {}
        remainders: List[Dict[Key, Coeff]] = [{} for _ in range(d)]
        for (k, L), c in self._coeffs.items():
            if k >= d:
                quotient[(k - d, L)] = c
            else:
                remainders[k][(0, L)] = c
        return (
            PowerSeries2(self.m, max(self.N - d, 0), quotient, self.mode),
            [PowerSeries2(self.m, max(self.N - j, 0), r, self.mode) for j, r in enumerate(remainders)],
        )

    def translate_x(self, c) -> "PowerSeries2":
        """Substitute x -> x + c * t_1; total degree is preserved."""
        c = coerce(c, self.mode)
        out: Dict[Key, Coeff] = {}
        for (k, L), value in self._coeffs.items():
            for i in range(k + 1):
                key = (i, (L[0] + k - i,) + L[1:])
                out[key] = out.get(key, 0) + value * comb(k, i) * c ** (k - i)
        return PowerSeries2(self.m, self.N, out, self.mode)


def translate_x(series: PowerSeries2, c) -> PowerSeries2:
    return series.translate_x(c)


def combine_remainders(remainders: Sequence[PowerSeries2], N: int) -> PowerSeries2:
    """sum_j r_j(t) x^j as one series truncated at N."""
    first = remainders[0]
    total = PowerSeries2.zero(first.m, N, first.mode)
    for j, r in enumerate(remainders):
        total = total + r.shift_x(j).with_order(N)
    return total
