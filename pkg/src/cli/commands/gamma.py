"""
CLI - Gamma Command

Samples the root set, labels its branches and checks the geometric
assumptions.
"""

import logging

from src.cli.commands.common import require_poly, resolve_domain
from src.cli.outputs import emit_csv, emit_json, emit_svg
from src.cli.svg import scatter
from src.errors import BranchTrackingError, MisuseError
from src.geometry.lojafit import check_assumptions, decompose_branches
from src.geometry.rootgeom import is_hyperbolic, sample_gamma
from src.schemas import RunConfig

logger = logging.getLogger(__name__)


def execute(config: RunConfig) -> int:
    P = require_poly(config)
    dom = resolve_domain(P, config)
    cloud = sample_gamma(P, dom, n_radial=config.n_radial, n_angular=config.n_angular, threads=config.threads)

    branches = []
    try:
        decomposition = decompose_branches(cloud)
        cloud = decomposition.cloud
        branches = decomposition.branches
    except (BranchTrackingError, MisuseError) as exc:
        logger.warning("branch decomposition failed: %s", exc)

    assumptions = check_assumptions(P, dom, cloud=cloud, threads=config.threads)
    payload = {
        "poly": P.to_spec(),
        "domain": dom,
        "grid": cloud.grid,
        "n_points": len(cloud),
        "hyperbolic": is_hyperbolic(cloud),
        "branches": branches,
        "assumptions": assumptions,
    }
    print(emit_json("gamma", config.output, payload), end="")
    emit_csv("gamma", config.output, cloud.header(), cloud.rows())

    groups = {}
    for z, b in zip(cloud.z, cloud.branch_id):
        groups.setdefault(int(b), []).append((float(z.real), float(z.imag)))
    emit_svg("gamma", config.output, scatter(groups, f"Gamma for {P.expr}"))
    return 0
