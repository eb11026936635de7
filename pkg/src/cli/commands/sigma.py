"""
CLI - Sigma Command

Estimates the Lojasiewicz exponent from the lower envelope of
log rho(z) against log d(z, Gamma).
"""

from src.cli.commands.common import require_poly, resolve_domain
from src.cli.outputs import emit_csv, emit_json, emit_svg
from src.cli.svg import scatter
from src.geometry.lojafit import estimate_sigma
from src.schemas import RunConfig


def execute(config: RunConfig) -> int:
    P = require_poly(config)
    dom = resolve_domain(P, config)
    estimate = estimate_sigma(
        P,
        dom,
        n_radii=config.radii,
        n_angles=config.angles,
        bins=config.bins,
        window=config.window,
        threads=config.threads,
    )
    print(emit_json("sigma", config.output, {"poly": str(P.expr), "domain": dom, **estimate.model_dump(mode="json")}), end="")
    emit_csv("sigma", config.output, ["re", "im", "log_d", "log_rho"], estimate.samples)

    points = [(s[2], s[3]) for s in estimate.samples]
    used = [b for b in estimate.bin_stats if b.used]
    line = []
    if used:
        xs = (used[0].x, used[-1].x)
        line = [(x, estimate.intercept_log_c + estimate.sigma_hat * x) for x in xs]
    envelope = [(b.x, b.y) for b in estimate.bin_stats]
    svg = scatter(
        {0: points, 1: envelope},
        f"sigma_hat = {estimate.sigma_hat:.3f} for {P.expr}",
        "log d(z, Gamma)",
        "log rho(z)",
        lines=[line] if line else None,
    )
    emit_svg("sigma", config.output, svg)
    return 0
