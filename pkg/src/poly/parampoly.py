"""
Poly - Parametric Weierstrass Polynomials

P(x, t) = x^d + a_1(t) x^(d-1) + ... + a_d(t) with exact rational
coefficients in t = (t_1, ..., t_m), m in {1, 2}. Exact arithmetic goes
through sympy; numeric paths use lambdified coefficient functions.
"""

import logging
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from src import config
from src.errors import DegenerateFiberError, InvalidPolynomialError, RootSolverError
from src.poly import roots as rootfinder
from src.schemas import MonomialSpec, PolySpec

logger = logging.getLogger(__name__)

X = sympy.Symbol("x")
Z = sympy.Symbol("z")
T1 = sympy.Symbol("t")
T2 = (sympy.Symbol("t1"), sympy.Symbol("t2"))

Scalar = Union[int, float, complex, Fraction, sympy.Expr]


def t_symbols(m: int) -> Tuple[sympy.Symbol, ...]:
    return (T1,) if m == 1 else T2


def _vector_function(symbols, exprs) -> Callable[..., np.ndarray]:
    """Lambdify a list of expressions into one broadcasting complex evaluator."""
    compiled = sympy.lambdify(symbols, list(exprs), "numpy")

    def evaluate(*args):
        values = compiled(*args)
        shape = np.broadcast(*[np.asarray(a) for a in args]).shape if args else ()
        return np.array(
            [np.broadcast_to(np.asarray(v, dtype=complex), shape) for v in values]
        )

    return evaluate


class ParamPoly:
    """Immutable Weierstrass polynomial with exact coefficients."""

    def __init__(self, d: int, m: int, coeffs: Sequence[sympy.Expr], name: Optional[str] = None):
        if d < 1:
            raise InvalidPolynomialError(f"degree d must be >= 1, got {d}")
        if m not in (1, 2):
            raise InvalidPolynomialError(f"parameter dimension m must be 1 or 2, got {m}")
        if len(coeffs) != d:
            raise InvalidPolynomialError(f"expected {d} coefficients a_1..a_d, got {len(coeffs)}")
        self.d = d
        self.m = m
        self.name = name
        self.t = t_symbols(m)
        origin = {s: 0 for s in self.t}
        self.coeffs: Tuple[sympy.Expr, ...] = tuple(sympy.expand(sympy.nsimplify(c, rational=True)) for c in coeffs)
        for j, a in enumerate(self.coeffs, start=1):
            if a.free_symbols - set(self.t):
                raise InvalidPolynomialError(f"a_{j} depends on symbols other than t")
            if a.subs(origin) != 0:
                raise InvalidPolynomialError(f"a_{j}(0) must vanish, got {a.subs(origin)}")

    # Construction

    @classmethod
    def from_spec(cls, spec: PolySpec) -> "ParamPoly":
        symbols = t_symbols(spec.m)
        coeffs = []
        for monomials in spec.coeffs:
            a = sympy.Integer(0)
            for mono in monomials:
                term = sympy.Rational(mono.num, mono.den)
                for sym, e in zip(symbols, mono.t_exponents):
                    term *= sym ** e
                a += term
            coeffs.append(a)
        return cls(spec.d, spec.m, coeffs, name=spec.name)

    @classmethod
    def from_expr(cls, text: Union[str, sympy.Expr], m: int = 1, name: Optional[str] = None) -> "ParamPoly":
        """Parse e.g. ``"x**4 - t**2"`` or ``"x**2 - (t1**2 + t2**2)"``."""
        symbols = t_symbols(m)
        local = {"x": X, **{str(s): s for s in symbols}}
        expr = sympy.sympify(text, locals=local) if isinstance(text, str) else text
        poly = sympy.Poly(sympy.expand(expr), X)
        if poly.LC() != 1:
            raise InvalidPolynomialError(f"polynomial is not monic in x: leading coefficient {poly.LC()}")
        d = poly.degree()
        all_coeffs = poly.all_coeffs()
        return cls(d, m, all_coeffs[1:], name=name or str(expr))

    def to_spec(self) -> PolySpec:
        coeffs = []
        for a in self.coeffs:
            monomials = []
            if a != 0:
                for exponents, c in sympy.Poly(a, *self.t).terms():
                    c = sympy.Rational(c)
                    monomials.append(MonomialSpec(t_exponents=list(exponents), num=int(c.p), den=int(c.q)))
            coeffs.append(monomials)
        return PolySpec(name=self.name, d=self.d, m=self.m, coeffs=coeffs)

    # Identity

    @cached_property
    def expr(self) -> sympy.Expr:
        return sympy.expand(X ** self.d + sum(a * X ** (self.d - j) for j, a in enumerate(self.coeffs, start=1)))

    @cached_property
    def key(self) -> str:
        return sympy.srepr(self.expr) + f"|m={self.m}"

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamPoly) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"ParamPoly({self.expr}, m={self.m})"

    @property
    def trivial(self) -> bool:
        """Pure x^d: Gamma = {0} and division is a Taylor split."""
        return all(a == 0 for a in self.coeffs)

    def is_x_power_minus_t_squared(self) -> bool:
        return self.m == 1 and self.expr == sympy.expand(X ** self.d - T1 ** 2)

    def terms(self) -> Iterator[Tuple[int, Tuple[int, ...], Fraction]]:
        """Monomials (k, L, c) of P = sum c x^k t^L, including x^d."""
        for exponents, c in sympy.Poly(self.expr, X, *self.t).terms():
            c = sympy.Rational(c)
            yield exponents[0], tuple(exponents[1:]), Fraction(int(c.p), int(c.q))

    # Numeric evaluators

    @cached_property
    def _x_coeff_fn(self):
        return _vector_function(self.t, (sympy.Integer(1),) + self.coeffs)

    def x_coeffs(self, t: Sequence[complex]) -> np.ndarray:
        """Coefficients [1, a_1(t), ..., a_d(t)] as complex numbers."""
        return self._x_coeff_fn(*t)

    @cached_property
    def _tau_poly(self) -> sympy.Poly:
        return sympy.Poly(self.expr, self.t[-1])

    @cached_property
    def _tau_coeff_fn(self):
        # coefficients of the last parameter, as functions of (x, t_1..t_{m-1})
        return _vector_function((X,) + self.t[:-1], self._tau_poly.all_coeffs())

    def tau_coeffs(self, z: complex, *leading: complex) -> np.ndarray:
        """Coefficients of tau_m -> P(z, leading..., tau_m), highest first."""
        return self._tau_coeff_fn(z, *leading)

    @cached_property
    def _value_fn(self):
        return sympy.lambdify((X,) + self.t, self.expr, "numpy")

    @cached_property
    def _dx_fn(self):
        return sympy.lambdify((X,) + self.t, sympy.diff(self.expr, X), "numpy")

    @cached_property
    def _dt_fns(self):
        return tuple(sympy.lambdify((X,) + self.t, sympy.diff(self.expr, s), "numpy") for s in self.t)

    def value(self, x, t: Sequence) -> complex:
        return self._value_fn(x, *t)

    def dx(self, x, t: Sequence) -> complex:
        return self._dx_fn(x, *t)

    def dt(self, x, t: Sequence) -> Tuple[complex, ...]:
        return tuple(fn(x, *t) for fn in self._dt_fns)


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, sympy.Expr)) and not isinstance(value, bool)


def evaluate(P: ParamPoly, x: Scalar, t: Sequence[Scalar]) -> Union[complex, sympy.Expr]:
    """Horner evaluation in x of the coefficients evaluated at t.

    Exact inputs (int, Fraction, sympy numbers) give an exact sympy result;
    anything else is evaluated in complex floating point.
    """
    if len(t) != P.m:
        raise ValueError(f"expected {P.m} parameter values, got {len(t)}")
    if _is_exact(x) and all(_is_exact(v) for v in t):
        subs = {s: sympy.nsimplify(v) for s, v in zip(P.t, t)}
        xv = sympy.nsimplify(x)
        acc = sympy.Integer(1)
        for a in P.coeffs:
            acc = sympy.expand(acc * xv + a.subs(subs))
        return acc
    coeffs = P.x_coeffs([complex(v) for v in t])
    acc = 0j
    for c in coeffs:
        acc = acc * complex(x) + complex(c)
    return acc


def roots_in_x(P: ParamPoly, t: Sequence[float]) -> rootfinder.RootSet:
    """The d roots of P(., t) with multiplicity."""
    coeffs = P.x_coeffs([complex(v) for v in t])
    try:
        found = rootfinder.solve(coeffs)
    except np.linalg.LinAlgError as exc:
        raise RootSolverError(f"eigenvalue solver failed: {exc}", t=t) from exc
    bound = config.TOL_ROOT * np.max((1.0 + np.abs(found.roots)) ** P.d) if found.roots.size else 0.0
    if not np.all(np.isfinite(found.roots)) or found.residual > max(bound, config.TOL_ROOT):
        raise RootSolverError(
            f"root residual {found.residual:.3e} above tolerance {bound:.3e}", t=t
        )
    return found


def roots_in_tau(P: ParamPoly, z: complex) -> np.ndarray:
    """All complex roots of tau -> P(z, tau) (m = 1)."""
    if P.m != 1:
        raise ValueError("roots_in_tau is defined for m = 1 only")
    coeffs = rootfinder.trim_leading(P.tau_coeffs(complex(z)))
    if coeffs.size == 0:
        raise DegenerateFiberError(f"tau -> P({z}, tau) vanishes identically")
    return rootfinder.solve(coeffs).roots


class CofactorSet:
    """Exact S_0..S_{d-1} with P(x,t) - P(z,t) = (x - z) sum_j S_j(z,t) x^j."""

    def __init__(self, P: ParamPoly, cofactors: List[sympy.Expr]):
        self.P = P
        self.S: Tuple[sympy.Expr, ...] = tuple(cofactors)

    def combination(self) -> sympy.Expr:
        return sum(s * X ** j for j, s in enumerate(self.S))

    def identity_defect(self) -> sympy.Expr:
        lhs = self.P.expr - self.P.expr.subs(X, Z)
        return sympy.expand(lhs - (X - Z) * self.combination())

    def holds_at(self, x: Scalar, z: Scalar, t: Sequence[Scalar]) -> bool:
        """Exact evaluation of both sides at a rational point."""
        subs = {X: sympy.nsimplify(x), Z: sympy.nsimplify(z)}
        subs.update({s: sympy.nsimplify(v) for s, v in zip(self.P.t, t)})
        lhs = (self.P.expr - self.P.expr.subs(X, Z)).subs(subs)
        rhs = ((X - Z) * self.combination()).subs(subs)
        return sympy.simplify(lhs - rhs) == 0


def cofactors(P: ParamPoly) -> CofactorSet:
    """Telescoping cofactors, verified by exact expansion."""
    difference = sympy.Poly(P.expr - P.expr.subs(X, Z), X)
    quotient, remainder = sympy.div(difference, sympy.Poly(X - Z, X))
    if not remainder.is_zero:
        raise InvalidPolynomialError("x - z does not divide P(x,t) - P(z,t)")
    coeffs = quotient.all_coeffs()[::-1]
    coeffs += [sympy.Integer(0)] * (P.d - len(coeffs))
    result = CofactorSet(P, [sympy.expand(c) for c in coeffs])
    if result.identity_defect() != 0:
        raise InvalidPolynomialError("telescoping identity failed after construction")
    return result
