from fractions import Fraction

import numpy as np
import pytest
import sympy
from pydantic import ValidationError

from src.errors import DegenerateFiberError, InvalidPolynomialError
from src.poly.parampoly import T1, X, ParamPoly, cofactors, evaluate, roots_in_tau, roots_in_x
from src.schemas import PolySpec


def test_from_expr_reads_degree_and_coefficients(cusp):
    assert cusp.d == 3 and cusp.m == 1
    assert cusp.coeffs == (0, 0, -T1 ** 2)
    assert cusp.is_x_power_minus_t_squared()


def test_spec_round_trip(cone):
    again = ParamPoly.from_spec(PolySpec.model_validate_json(cone.to_spec().model_dump_json()))
    assert again == cone
    assert hash(again) == hash(cone)


def test_loads_bundled_file(data_dir):
    spec = PolySpec.model_validate_json((data_dir / "polys" / "x2_parabolas_t4.json").read_text())
    P = ParamPoly.from_spec(spec)
    assert sympy.expand(P.expr - (X ** 2 - 2 * T1 * X + T1 ** 2 + T1 ** 4)) == 0


def test_nonvanishing_coefficient_rejected():
    with pytest.raises(InvalidPolynomialError):
        ParamPoly.from_expr("x**2 + 1 + t")


def test_non_monic_rejected():
    with pytest.raises(InvalidPolynomialError):
        ParamPoly.from_expr("2*x**2 - t")


def test_spec_with_constant_term_fails_validation():
    with pytest.raises(ValidationError):
        PolySpec(d=1, m=1, coeffs=[[{"t_exponents": [0], "num": 1}]])


def test_trivial_polynomial():
    assert ParamPoly.from_expr("x**3").trivial


def test_exact_evaluation(cusp):
    value = evaluate(cusp, Fraction(1, 2), [Fraction(1, 3)])
    assert value == sympy.Rational(1, 8) - sympy.Rational(1, 9)


def test_float_evaluation(cusp):
    assert evaluate(cusp, 0.5, [0.25]) == pytest.approx(0.125 - 0.0625)


def test_roots_in_x_of_circle(circle):
    roots = np.sort_complex(roots_in_x(circle, [0.3]).roots)
    np.testing.assert_allclose(roots, [-0.3j, 0.3j], atol=1e-12)


def test_roots_in_x_at_origin_is_multiple(quartic):
    found = roots_in_x(quartic, [0.0])
    assert found.clusters[0].multiplicity == 4


def test_roots_in_tau(cusp):
    z = 0.04
    tau = np.sort(roots_in_tau(cusp, z).real)
    np.testing.assert_allclose(tau, [-(z ** 1.5), z ** 1.5], rtol=1e-10)


def test_roots_in_tau_degenerate():
    with pytest.raises(DegenerateFiberError):
        roots_in_tau(ParamPoly.from_expr("x**2"), 0.0)


@pytest.mark.parametrize("text", ["x**3 - t**2", "x**2 - 2*t*x + t**2 + t**4", "x**4 + t*x**2 - t**3"])
def test_cofactor_identity(text):
    result = cofactors(ParamPoly.from_expr(text))
    assert result.identity_defect() == 0
    assert result.holds_at(Fraction(1, 3), Fraction(-2, 5), [Fraction(3, 7)])
    assert len(result.S) == result.P.d


def test_derivatives(cusp):
    assert cusp.dx(0.5, (0.1,)) == pytest.approx(3 * 0.25)
    assert cusp.dt(0.5, (0.1,))[0] == pytest.approx(-0.2)


@pytest.mark.parametrize("t", [1e-6, 0.05, 0.3])
def test_roots_in_x_satisfy_vieta(t):
    P = ParamPoly.from_expr("x**4 + t*x**2 - t**3")
    roots = roots_in_x(P, [t]).roots
    coeffs = P.x_coeffs([t])
    assert np.sum(roots) == pytest.approx(-coeffs[1], abs=1e-12)
    assert np.prod(roots) == pytest.approx(coeffs[-1], abs=1e-12)


def test_roots_in_tau_agree_with_roots_in_x(cusp):
    z = 0.04 + 0.02j
    for tau in roots_in_tau(cusp, z):
        assert np.min(np.abs(roots_in_x(cusp, [tau]).roots - z)) < 1e-10


@pytest.mark.parametrize("text", ["x**3 - t**2", "x**4 + t*x**2 - t**3", "x**2 - (t1**2 + t2**2)"])
def test_leading_cofactor_is_one(text):
    result = cofactors(ParamPoly.from_expr(text, m=2 if "t1" in text else 1))
    assert result.S[-1] == 1
