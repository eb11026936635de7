"""
Geometry - Root Locus

Sampled root locus Gamma, distance-to-Gamma queries, the fiber distance
rho(z) = d(N_z, R^m) and the t-derivatives of 1/P(z, .).

Gamma is represented by samples plus local polish: nearest neighbour in a
KD-tree, then a one- or two-dimensional minimization of |z - mu(t)| over
the parameter near the best sample.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from pydantic import BaseModel, Field
from scipy import optimize
from scipy.spatial import cKDTree

from src import config
from src.errors import (
    CalibrationError,
    DegenerateFiberError,
    DomainTooLargeError,
    NearPoleError,
)
from src.poly import roots as rootfinder
from src.poly.parampoly import X, ParamPoly, roots_in_tau, roots_in_x

logger = logging.getLogger(__name__)

BOX_SLACK = 1e-9
PROBE_POINTS = 64
RADIAL_FLOOR = 1e-8
UNASSIGNED = -1


class Domain(BaseModel):
    """The z-disc D_delta and the parameter box I_eta^m."""

    delta: float = Field(gt=0, description="Radius of the z-disc")
    eta: float = Field(gt=0, description="Half-side of the parameter box")
    admissible: bool = Field(description="Every probed z has a fiber root in the eta-ball")
    trivial: bool = Field(default=False, description="P = x^d; calibration bypassed")


def _in_box(tau: np.ndarray, eta: float) -> np.ndarray:
    return np.abs(tau) <= eta * (1.0 + BOX_SLACK)


def _tau2_roots(P: ParamPoly, z: complex, tau1: np.ndarray) -> np.ndarray:
    """Roots in tau_2 of P(z, tau_1, .) for an array of tau_1, shape (n, deg)."""
    coeffs = np.atleast_2d(P.tau_coeffs(complex(z), tau1).T)
    deg = coeffs.shape[1] - 1
    if deg < 1:
        raise DegenerateFiberError(f"P({z}, tau) does not depend on the last parameter")
    scale = np.max(np.abs(coeffs), axis=1)
    regular = np.abs(coeffs[:, 0]) > 1e-14 * scale
    out = np.full((coeffs.shape[0], deg), np.nan + 0j)
    if regular.any():
        out[regular] = rootfinder.companion_roots_batch(coeffs[regular])
    for i in np.flatnonzero(~regular):
        trimmed = rootfinder.trim_leading(coeffs[i], 1e-14)
        if trimmed.size > 1:
            found = rootfinder.companion_roots(trimmed)
            out[i, : found.size] = found
    return out


def _has_fiber_root(P: ParamPoly, z: complex, eta: float) -> bool:
    if P.m == 1:
        try:
            tau = roots_in_tau(P, z)
        except DegenerateFiberError:
            return True
        return bool(np.any(_in_box(tau, eta)))
    axis = np.linspace(-eta, eta, 9)
    grid = (axis[:, None] + 1j * axis[None, :]).ravel()
    grid = grid[_in_box(grid, eta)]
    tau2 = _tau2_roots(P, z, grid)
    return bool(np.any(_in_box(tau2, eta)))


def calibrate_domain(P: ParamPoly, eta: float) -> Domain:
    """Largest delta in {eta, eta/2, ...} whose probe circles all have fibers."""
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if P.trivial:
        logger.info("P = x^%d is trivial; calibration bypassed", P.d)
        return Domain(delta=eta, eta=eta, admissible=False, trivial=True)

    angles = np.exp(2j * np.pi * np.arange(PROBE_POINTS) / PROBE_POINTS)
    delta = eta
    while delta >= 1e-6 * eta:
        circles = (delta * f * angles for f in (1.0, 0.5, 0.25))
        if all(_has_fiber_root(P, z, eta) for circle in circles for z in circle):
            logger.debug("calibrated delta=%g for eta=%g", delta, eta)
            return Domain(delta=delta, eta=eta, admissible=True)
        delta /= 2
    raise CalibrationError(f"no admissible delta above {1e-6 * eta:g} for eta={eta}")


class GammaGrid(BaseModel):
    n_radial: int
    n_angular: int
    eta: float
    radial_floor: float = RADIAL_FLOOR


class GammaCloud:
    """Sampled root locus with per-point provenance and branch labels."""

    def __init__(
        self,
        P: ParamPoly,
        domain: Domain,
        z: np.ndarray,
        t_source: np.ndarray,
        ray: np.ndarray,
        radial_index: np.ndarray,
        grid: GammaGrid,
        radial_values: np.ndarray,
        branch_id: Optional[np.ndarray] = None,
    ):
        self.P = P
        self.domain = domain
        self.z = np.asarray(z, dtype=complex)
        self.t_source = np.asarray(t_source, dtype=float).reshape(len(self.z), P.m)
        self.ray = np.asarray(ray, dtype=int)
        self.radial_index = np.asarray(radial_index, dtype=int)
        self.grid = grid
        self.radial_values = radial_values
        self.branch_id = (
            np.full(len(self.z), UNASSIGNED, dtype=int) if branch_id is None else np.asarray(branch_id, dtype=int)
        )
        self.tree = cKDTree(np.column_stack([self.z.real, self.z.imag]))

    def __len__(self) -> int:
        return len(self.z)

    def with_branches(self, branch_id: np.ndarray) -> "GammaCloud":
        return GammaCloud(
            self.P,
            self.domain,
            self.z,
            self.t_source,
            self.ray,
            self.radial_index,
            self.grid,
            self.radial_values,
            branch_id,
        )

    def rows(self) -> List[list]:
        """CSV rows: re, im, t_1..t_m, branch_id."""
        return [
            [float(z.real), float(z.imag), *map(float, t), int(b)]
            for z, t, b in zip(self.z, self.t_source, self.branch_id)
        ]

    def header(self) -> List[str]:
        names = ["t"] if self.P.m == 1 else ["t1", "t2"]
        return ["re", "im", *names, "branch_id"]


def _ray_parameters(P: ParamPoly, eta: float, n_radial: int, n_angular: int):
    """(ray, radial_index, t) triples of the sampling grid, origin first."""
    radial = np.geomspace(RADIAL_FLOOR, 1.0, n_radial)
    samples = [(UNASSIGNED, UNASSIGNED, np.zeros(P.m))]
    if P.m == 1:
        for ray, sign in enumerate((1.0, -1.0)):
            for k, g in enumerate(radial):
                samples.append((ray, k, np.array([sign * eta * g])))
    else:
        for ray in range(n_angular):
            phi = 2 * math.pi * ray / n_angular
            direction = np.array([math.cos(phi), math.sin(phi)])
            reach = eta / max(abs(direction[0]), abs(direction[1]))
            for k, g in enumerate(radial):
                samples.append((ray, k, reach * g * direction))
    return radial, samples


def sample_gamma(
    P: ParamPoly,
    dom: Domain,
    n_radial: int = 160,
    n_angular: int = 32,
    threads: Optional[int] = None,
) -> GammaCloud:
    """Roots of P(., t) over a log-spaced radial grid of parameters."""
    threads = config.THREADS if threads is None else threads
    grid = GammaGrid(n_radial=n_radial, n_angular=n_angular, eta=dom.eta)
    radial, samples = _ray_parameters(P, dom.eta, n_radial, n_angular)
    if P.trivial:
        samples = samples[:1]

    def solve(sample):
        return roots_in_x(P, sample[2]).roots

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solved = list(pool.map(solve, samples))
    else:
        solved = [solve(s) for s in samples]

    z, t_source, rays, indices = [], [], [], []
    for (ray, k, t), found in zip(samples, solved):
        for root in found:
            z.append(root)
            t_source.append(t)
            rays.append(ray)
            indices.append(k)
    logger.info("sampled Gamma: %d points from %d parameters", len(z), len(samples))
    return GammaCloud(P, dom, np.array(z), np.array(t_source), np.array(rays), np.array(indices), grid, radial)


def is_hyperbolic(cloud: GammaCloud, tol: float = 1e-9) -> bool:
    """All sampled roots real (Gamma contained in the real axis)."""
    return bool(np.all(np.abs(cloud.z.imag) <= tol * np.abs(cloud.z) + 1e-300))


def _branch_distance(P: ParamPoly, z: complex, t: Sequence[float]) -> float:
    found = rootfinder.companion_roots(P.x_coeffs(list(t)))
    return float(np.min(np.abs(z - found)))


def _polish_m1(cloud: GammaCloud, z: complex, index: int) -> float:
    P, eta, radial = cloud.P, cloud.domain.eta, cloud.radial_values
    ray, k = cloud.ray[index], cloud.radial_index[index]
    best = float(abs(z - cloud.z[index]))

    if ray == UNASSIGNED:
        brackets = [(-1.0, -eta * radial[0], eta * radial[0])]
    else:
        sign = 1.0 if ray == 0 else -1.0
        lo_k, hi_k = k - 1, k + 1
        brackets = []
        for _ in range(4):
            lo = 0.0 if lo_k < 0 else eta * radial[lo_k]
            hi = eta * radial[min(hi_k, len(radial) - 1)]
            brackets.append((sign, lo, hi))
            lo_k, hi_k = lo_k - 2, hi_k + 2

    for sign, lo, hi in brackets:
        scale = 1.0 if ray == UNASSIGNED else sign

        def objective(s, scale=scale):
            return _branch_distance(P, z, [scale * s])

        result = optimize.minimize_scalar(
            objective,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": config.POLISH_TOL * max(abs(hi), 1e-300)},
        )
        best = min(best, float(result.fun))
        width = hi - lo
        if ray == UNASSIGNED or min(result.x - lo, hi - result.x) > 1e-3 * width:
            break
    return best


def _polish_m2(cloud: GammaCloud, z: complex, index: int) -> float:
    P, eta = cloud.P, cloud.domain.eta
    start = cloud.t_source[index]
    best = float(abs(z - cloud.z[index]))
    step = max(0.1 * float(np.linalg.norm(start)), eta * RADIAL_FLOOR)

    def objective(t):
        clipped = np.clip(t, -eta, eta)
        return _branch_distance(P, z, clipped) + float(np.linalg.norm(t - clipped))

    simplex = np.array([start, start + [step, 0.0], start + [0.0, step]])
    result = optimize.minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": config.POLISH_TOL * step, "fatol": 1e-16, "maxiter": 400},
    )
    return min(best, float(result.fun))


def dist_to_gamma(cloud: GammaCloud, z: complex) -> float:
    """d(z, Gamma): nearest sample, then local polish along the root branch."""
    if len(cloud) == 0:
        raise ValueError("empty Gamma cloud")
    z = complex(z)
    nearest, index = cloud.tree.query([z.real, z.imag])
    if nearest == 0.0 or cloud.P.trivial:
        return float(nearest)
    if cloud.P.m == 1:
        return _polish_m1(cloud, z, int(index))
    return _polish_m2(cloud, z, int(index))


class FiberResult(BaseModel):
    """Fiber N_z restricted to the eta-ball and its distance to R^m."""

    z: Tuple[float, float]
    roots_in_box: List[List[Tuple[float, float]]] = Field(
        description="Fiber points tau, one [re, im] pair per coordinate"
    )
    rho: float = Field(ge=0)
    method: Literal["exact_poly", "grid_polish"]
    upper_bound: bool = Field(description="rho is the best value found, not a certified minimum")
    grid_density: Optional[int] = Field(default=None, description="Number of tau_1 seeds")

    def roots(self) -> np.ndarray:
        return np.array([[complex(re, im) for re, im in tau] for tau in self.roots_in_box])


def _pairs(tau: Sequence[complex]) -> List[Tuple[float, float]]:
    return [(float(v.real), float(v.imag)) for v in tau]


def _fiber_m1(P: ParamPoly, dom: Domain, z: complex) -> FiberResult:
    tau = roots_in_tau(P, z)
    tau = tau[_in_box(tau, dom.eta)]
    if tau.size == 0:
        raise DomainTooLargeError(f"no fiber root with |tau| <= {dom.eta} at z={z}", z=z)
    return FiberResult(
        z=(z.real, z.imag),
        roots_in_box=[_pairs([v]) for v in tau],
        rho=float(np.min(np.abs(tau.imag))),
        method="exact_poly",
        upper_bound=False,
    )


def _newton_tau2(P: ParamPoly, z: complex, tau1: complex, tau2: complex) -> Optional[complex]:
    for _ in range(40):
        value = P.value(z, (tau1, tau2))
        slope = P.dt(z, (tau1, tau2))[1]
        if slope == 0:
            return None
        step = value / slope
        tau2 = tau2 - step
        if abs(step) <= config.POLISH_TOL * (abs(tau2) + abs(z)) + 1e-300:
            return complex(tau2)
    return None


def _fiber_m2(P: ParamPoly, dom: Domain, z: complex, n_scales: int = 9, n_angles: int = 12) -> FiberResult:
    eta = dom.eta
    base = _tau2_roots(P, z, np.array([0j]))[0]
    base = base[np.isfinite(base)]
    scale = max(abs(z), float(np.min(np.abs(base))) if base.size else 0.0, 1e-300)

    radii = np.minimum(scale * np.geomspace(1e-2, 1e2, n_scales), eta)
    phases = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    seeds = np.concatenate([[0j], (radii[:, None] * phases[None, :]).ravel()])
    tau2 = _tau2_roots(P, z, seeds)

    tau1 = np.repeat(seeds, tau2.shape[1])
    tau2 = tau2.ravel()
    keep = np.isfinite(tau2) & _in_box(tau1, eta) & _in_box(tau2, eta)
    if not keep.any():
        raise DomainTooLargeError(f"no fiber point in the eta-polydisc at z={z}", z=z)
    tau1, tau2 = tau1[keep], tau2[keep]
    score = tau1.imag ** 2 + tau2.imag ** 2
    order = np.argsort(score, kind="stable")

    best_value = float(score[order[0]])
    best_point = (complex(tau1[order[0]]), complex(tau2[order[0]]))
    for i in order[:2]:
        seed1, seed2 = complex(tau1[i]), complex(tau2[i])

        def objective(u, seed2=seed2):
            t1 = complex(u[0], u[1])
            t2 = _newton_tau2(P, z, t1, seed2)
            if t2 is None or abs(t1) > eta * (1 + BOX_SLACK) or abs(t2) > eta * (1 + BOX_SLACK):
                return 1e300
            return t1.imag ** 2 + t2.imag ** 2

        step = max(abs(seed1), scale) * 0.05
        start = np.array([seed1.real, seed1.imag])
        result = optimize.minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={
                "initial_simplex": np.array([start, start + [step, 0.0], start + [0.0, step]]),
                "xatol": config.POLISH_TOL * scale,
                "fatol": 1e-30,
                "maxiter": 300,
            },
        )
        if result.fun < best_value:
            t1 = complex(result.x[0], result.x[1])
            t2 = _newton_tau2(P, z, t1, seed2)
            if t2 is not None:
                best_value, best_point = float(result.fun), (t1, t2)

    return FiberResult(
        z=(z.real, z.imag),
        roots_in_box=[_pairs(best_point)] + [_pairs((a, b)) for a, b in zip(tau1[order[1:8]], tau2[order[1:8]])],
        rho=math.sqrt(max(best_value, 0.0)),
        method="grid_polish",
        upper_bound=True,
        grid_density=int(seeds.size),
    )


def fiber(P: ParamPoly, dom: Domain, z: complex) -> FiberResult:
    """rho(z) = d(N_z, R^m) over fiber points in the eta-ball."""
    z = complex(z)
    if abs(z) > dom.delta * (1 + BOX_SLACK):
        raise ValueError(f"|z| = {abs(z):g} exceeds delta = {dom.delta:g}")
    if P.m == 1:
        return _fiber_m1(P, dom, z)
    return _fiber_m2(P, dom, z)


def _multi_index(P: ParamPoly, l: Union[int, Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(l, int):
        return (l,) + (0,) * (P.m - 1)
    index = tuple(int(v) for v in l)
    if len(index) != P.m:
        raise ValueError(f"multi-index must have length m={P.m}")
    if P.m == 2 and sum(index) > 4:
        raise ValueError("m = 2 derivatives are supported up to order 4")
    return index


@lru_cache(maxsize=256)
def _inverse_derivative(P: ParamPoly, index: Tuple[int, ...]):
    """Numerator N with D_t^L (1/P) = N / P^(|L|+1), lambdified with P."""
    numerator = sympy.Integer(1)
    power = 1
    for symbol, order in zip(P.t, index):
        dP = sympy.diff(P.expr, symbol)
        for _ in range(order):
            # d/dt (N / P^k) = (N' P - k N P') / P^(k+1)
            numerator = sympy.expand(sympy.diff(numerator, symbol) * P.expr - power * numerator * dP)
            power += 1
    args = (X,) + P.t
    return sympy.lambdify(args, numerator, "numpy"), power


def inv_p_derivative(P: ParamPoly, z: complex, t: Sequence[float], l: Union[int, Sequence[int]]) -> complex:
    """D_t^l (1/P(z, .)) at t, from the exact quotient-rule recurrence."""
    index = _multi_index(P, l)
    value = complex(P.value(complex(z), tuple(t)))
    if abs(value) < config.NEAR_POLE:
        raise NearPoleError(f"|P(z,t)| = {abs(value):.3e} below the near-pole cutoff at z={z}")
    numerator, power = _inverse_derivative(P, index)
    return complex(numerator(complex(z), *t)) / value ** power
