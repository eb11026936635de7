"""Parametric Weierstrass polynomials and their roots."""

from src.poly.parampoly import ParamPoly, cofactors, evaluate, roots_in_tau, roots_in_x

__all__ = ["ParamPoly", "cofactors", "evaluate", "roots_in_tau", "roots_in_x"]
