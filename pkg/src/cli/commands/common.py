"""
CLI - Shared Command Helpers
"""

import logging

from src.errors import InvalidPolynomialError
from src.geometry.rootgeom import Domain, calibrate_domain
from src.poly.parampoly import ParamPoly
from src.schemas import RunConfig
from src.services.io_service import load_poly

logger = logging.getLogger(__name__)


def require_poly(config: RunConfig) -> ParamPoly:
    if config.poly_path is None:
        raise InvalidPolynomialError("--poly is required for this subcommand", field="poly")
    return load_poly(config.poly_path)


def resolve_domain(P: ParamPoly, config: RunConfig) -> Domain:
    """Calibrated domain, with --delta applied when it does not exceed the calibrated radius."""
    dom = calibrate_domain(P, config.eta)
    if config.delta is None:
        return dom
    if config.delta > dom.delta and not dom.trivial:
        logger.warning("--delta %g exceeds calibrated delta %g; keeping %g", config.delta, dom.delta, dom.delta)
        return dom
    return dom.model_copy(update={"delta": config.delta})
