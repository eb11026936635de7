"""Weierdiv - Weierstrass division and root geometry in ultradifferentiable classes"""

__version__ = "0.1.0"
