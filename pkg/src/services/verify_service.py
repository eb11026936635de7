"""
Services - Verification Matrix

Runs the worked-example suite over the bundled data files and returns a
deterministic pass/fail table: sequence certificates, sigma recovery,
closed-form fibers, assumption classification, division correctness and
the regularity-loss probes.
"""

import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.division.gevrey import derivative_stream, gevrey_fit
from src.division.series import PowerSeries2
from src.division.wdiv import (
    extremal_series,
    formal_divide,
    linear_solve_divide,
    optimality_probe,
    substitute_check,
    translated_divide,
    x_power_minus_t_squared,
)
from src.errors import InvalidSequenceError, WeierdivError
from src.geometry.lojafit import check_assumptions, estimate_sigma, inverse_growth_fit
from src.geometry.rootgeom import calibrate_domain, dist_to_gamma, fiber, sample_gamma
from src.poly.parampoly import ParamPoly
from src.sequences.dcseq import DCSequence, check_regularity, legendre_recover
from src.services.io_service import load_poly, load_sequence

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parents[2] / "data"
POLY_DIR = DATA_DIR / "polys"
SEQUENCE_DIR = DATA_DIR / "sequences"

DIVISORS = ["x**2 + t**2", "x**2 + t**4", "x**3 - t**2", "x**4 - t**2", "x**2 - 2*t*x + t**2 + t**4"]


class VerifyCheck(BaseModel):
    name: str
    passed: bool
    value: Optional[float] = None
    expected: str
    detail: Optional[str] = None


class VerificationTable(BaseModel):
    """Outcome of the full example matrix."""

    checks: List[VerifyCheck]
    passed: bool
    n_checks: int
    n_failed: int
    seed: int
    eta: float


class VerifyContext(BaseModel):
    seed: int = 0
    eta: float = Field(default=0.5, gt=0)
    threads: int = 1


def random_series(rng: np.random.Generator, m: int, N: int, density: float = 0.6) -> PowerSeries2:
    """Exact series with small random rational coefficients."""
    coeffs = {}
    for total in range(N + 1):
        for k in range(total + 1):
            rest = total - k
            splits = [(rest,)] if m == 1 else [(a, rest - a) for a in range(rest + 1)]
            for L in splits:
                if rng.random() < density:
                    coeffs[(k, L)] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
    return PowerSeries2(m, N, coeffs)


# Individual checks


def check_sequences(ctx: VerifyContext) -> List[VerifyCheck]:
    checks = []
    for alpha in (0.5, 1.0, 2.0):
        seq = DCSequence.gevrey(alpha)
        worst = max(
            abs(float(legendre_recover(seq, j)) / float(seq.values[j]) - 1.0) for j in range(13)
        )
        checks.append(
            VerifyCheck(name=f"seq.legendre.gevrey_{alpha:g}", passed=worst <= 1e-3, value=worst, expected="<= 1e-3")
        )
    for name in ("gevrey_1", "gevrey_log_1_1"):
        report = check_regularity(load_sequence(SEQUENCE_DIR / f"{name}.json"))
        ok = report.log_convex and math.isfinite(report.moderate_growth_A) and report.increasing
        checks.append(
            VerifyCheck(
                name=f"seq.regularity.{name}",
                passed=ok,
                value=report.moderate_growth_A,
                expected="log-convex, finite moderate growth",
            )
        )
    try:
        rejected = not check_regularity(load_sequence(SEQUENCE_DIR / "explicit_nonconvex.json")).log_convex
    except InvalidSequenceError:
        rejected = True
    checks.append(VerifyCheck(name="seq.explicit_nonconvex", passed=rejected, expected="rejected"))
    return checks


def check_sigma(ctx: VerifyContext) -> List[VerifyCheck]:
    cases = [(f"x2_plus_t2p_p{p}", 1.0, 0.05, False) for p in (1, 2, 3)]
    cases += [(f"xd_minus_t2_d{d}", d / 2, 0.05 * d / 2, False) for d in (2, 3, 4, 5)]
    cases += [("x2_minus_t1sq_t2sq", 1.0, 0.1, False)]
    checks = []
    for name, target, tol, _ in cases:
        P = load_poly(POLY_DIR / f"{name}.json")
        dom = calibrate_domain(P, ctx.eta)
        estimate = estimate_sigma(P, dom, threads=ctx.threads, with_inverse_growth=False)
        checks.append(
            VerifyCheck(
                name=f"sigma.{name}",
                passed=abs(estimate.sigma_hat - target) <= tol,
                value=estimate.sigma_hat,
                expected=f"{target:g} +/- {tol:g}",
            )
        )
    return checks


def check_closed_forms(ctx: VerifyContext) -> List[VerifyCheck]:
    rng = np.random.default_rng(ctx.seed)
    checks = []
    for d in (2, 3, 4, 5):
        P = x_power_minus_t_squared(d)
        dom = calibrate_domain(P, ctx.eta)
        radii = dom.delta * rng.uniform(0.01, 1.0, 1000)
        angles = rng.uniform(0.0, 2 * math.pi, 1000)
        worst = 0.0
        for r, theta in zip(radii, angles):
            expected = r ** (d / 2) * abs(math.sin(d * theta / 2))
            got = fiber(P, dom, r * complex(math.cos(theta), math.sin(theta))).rho
            worst = max(worst, abs(got - expected) / max(expected, 1e-300))
        checks.append(VerifyCheck(name=f"fiber.closed_form.d{d}", passed=worst <= 1e-9, value=worst, expected="<= 1e-9"))

        cloud = sample_gamma(P, dom, threads=ctx.threads)
        r = 0.5 * dom.delta
        z = r * complex(math.cos(math.pi / d), math.sin(math.pi / d))
        error = abs(dist_to_gamma(cloud, z) / (r * math.sin(math.pi / d)) - 1.0)
        checks.append(VerifyCheck(name=f"gamma.distance.d{d}", passed=error <= 1e-6, value=error, expected="<= 1e-6"))
    return checks


def check_geometry(ctx: VerifyContext) -> List[VerifyCheck]:
    cases = [
        ("xd_minus_t2_d3", "none"),
        ("xd_minus_t2_d4", "none"),
        ("x2_plus_t2p_p2", "none"),
        ("x2_2t1x_overlap", "overlap_2d"),
        ("x2_parabolas_t4", "tangential_contact"),
    ]
    checks = []
    for name, expected in cases:
        P = load_poly(POLY_DIR / f"{name}.json")
        report = check_assumptions(P, calibrate_domain(P, ctx.eta), threads=ctx.threads)
        worst = max((v for row in report.pairwise_mu for v in row if v is not None), default=None)
        passed = report.failure_reason == expected
        if expected == "tangential_contact":
            passed = passed and worst is not None and abs(worst - 2.0) <= 0.1
        checks.append(
            VerifyCheck(
                name=f"assumptions.{name}",
                passed=passed,
                value=worst,
                expected=expected,
                detail=report.failure_reason,
            )
        )
    return checks


def check_division(ctx: VerifyContext) -> List[VerifyCheck]:
    rng = np.random.default_rng(ctx.seed)
    residual_ok, oracle_ok, count = True, True, 0
    for text in DIVISORS:
        P = ParamPoly.from_expr(text)
        for _ in range(10):
            f = random_series(rng, 1, 24)
            result = formal_divide(f, P, 24)
            residual_ok &= result.residual_max == 0
            small = f.truncate(12)
            iterated, oracle = formal_divide(small, P, 12), linear_solve_divide(small, P, 12)
            oracle_ok &= iterated.q == oracle.q and iterated.r == oracle.r
            count += 1
    checks = [
        VerifyCheck(name="division.residual_zero", passed=residual_ok, value=float(count), expected="exact zero, N=24"),
        VerifyCheck(name="division.oracle", passed=oracle_ok, value=float(count), expected="identical to linear solve, N=12"),
    ]

    f = PowerSeries2.from_x_coeffs([1] * 11, 1, 12)
    check = substitute_check(f, formal_divide(f, x_power_minus_t_squared(3), 12))
    checks.append(VerifyCheck(name="division.substitute_d3", passed=check.passed, value=check.max_defect, expected="0"))

    report = translated_divide(random_series(rng, 1, 12), 12)
    checks.append(VerifyCheck(name="division.translated", passed=report.matches, expected="q, r agree"))
    return checks


def check_regularity_loss(ctx: VerifyContext) -> List[VerifyCheck]:
    seq = DCSequence.gevrey(1.0, j_max=48)
    f = extremal_series(seq, 48)
    result = formal_divide(f, x_power_minus_t_squared(4), 48)
    fit = gevrey_fit(derivative_stream(result.r[0].t_stream()))
    probe = optimality_probe(seq, 4, 10)
    checks = [
        VerifyCheck(
            name="optimality.gevrey_r0_d4",
            passed=abs(fit.alpha_hat - 2.0) <= 0.15,
            value=fit.alpha_hat,
            expected="2 +/- 0.15",
        ),
        VerifyCheck(
            name="optimality.lower_constant_d4",
            passed=bool(probe.positive),
            value=probe.decay_slope,
            expected="lower constant does not decay over k <= 10",
        ),
    ]
    for text, sigma in (("x**2 + t**2", 1.0), ("x**4 - t**2", 2.0)):
        P = ParamPoly.from_expr(text)
        dom = calibrate_domain(P, ctx.eta)
        growth = inverse_growth_fit(P, dom, sample_gamma(P, dom, threads=ctx.threads))
        checks.append(
            VerifyCheck(
                name=f"inverse_growth.{text.replace(' ', '')}",
                passed=growth.slope <= sigma + 0.15,
                value=growth.slope,
                expected=f"<= {sigma + 0.15:g}",
            )
        )
    return checks


CHECKS: List[Callable[[VerifyContext], List[VerifyCheck]]] = [
    check_sequences,
    check_closed_forms,
    check_sigma,
    check_geometry,
    check_division,
    check_regularity_loss,
]


def run_verification(seed: int = 0, eta: float = 0.5, threads: int = 1) -> VerificationTable:
    """Run every check group; errors inside a group become failed checks."""
    ctx = VerifyContext(seed=seed, eta=eta, threads=threads)
    checks: List[VerifyCheck] = []
    for group in CHECKS:
        try:
            checks.extend(group(ctx))
        except WeierdivError as exc:
            logger.error("verification group %s failed: %s", group.__name__, exc)
            checks.append(
                VerifyCheck(name=group.__name__, passed=False, expected="no error", detail=exc.code)
            )
    failed = sum(not c.passed for c in checks)
    return VerificationTable(
        checks=checks,
        passed=failed == 0,
        n_checks=len(checks),
        n_failed=failed,
        seed=seed,
        eta=eta,
    )


def format_table(table: VerificationTable) -> str:
    """Plain-text pass/fail table."""
    width = max((len(c.name) for c in table.checks), default=10)
    lines = [f"{'check':<{width}}  status  value"]
    for c in table.checks:
        value = "" if c.value is None else f"{c.value:.6g}"
        lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  {value}")
    lines.append(f"{table.n_checks - table.n_failed}/{table.n_checks} checks passed")
    return "\n".join(lines) + "\n"
