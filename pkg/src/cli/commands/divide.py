"""
CLI - Divide Command

Formal Weierstrass division of a series (or the extremal series of a
weight sequence) by a polynomial, with the probes that apply to it.
"""

import logging

from src.cli.commands.common import require_poly
from src.cli.outputs import emit_csv, emit_json
from src.division.gevrey import derivative_stream, gevrey_fit
from src.division.wdiv import (
    anisotropy_probe,
    extremal_series,
    formal_divide,
    optimality_probe,
    substitute_check,
    translated_divide,
)
from src.errors import MisuseError, UndefinedFitError
from src.poly.parampoly import ParamPoly
from src.schemas import RunConfig
from src.sequences.dcseq import DCSequence
from src.services.io_service import load_sequence, load_series

logger = logging.getLogger(__name__)

TANGENT_FAMILY = "x**2 - 2*t*x + t**2 + t**4"


def _fit(stream):
    try:
        return gevrey_fit(derivative_stream(stream))
    except UndefinedFitError as exc:
        logger.info("no Gevrey fit: %s", exc)
        return None


def execute(config: RunConfig) -> int:
    P = require_poly(config)
    seq = None
    if config.series_path is not None:
        f = load_series(config.series_path)
    else:
        seq = load_sequence(config.seq_path) if config.seq_path else DCSequence.gevrey(1.0)
        f = extremal_series(seq, config.truncation, P.m)
    N = min(config.truncation, f.N)
    result = formal_divide(f, P, N)

    payload = {
        "summary": result.summary(),
        "q": result.q.to_spec(),
        "r": [rj.to_spec() for rj in result.r],
        "gevrey": {
            "q_x": _fit(result.q.x_stream()),
            "q_t": _fit(result.q.t_stream()),
            "r_t": [_fit(rj.t_stream()) for rj in result.r],
        },
    }

    if P.is_x_power_minus_t_squared() and not f.depends_on_t():
        payload["substitute_check"] = substitute_check(f, result)
        if seq is not None:
            payload["optimality"] = optimality_probe(seq, P.d, min(config.k_max, seq.j_max // max(P.d, 2)))
    try:
        payload["anisotropy"] = anisotropy_probe(P, f, N)
    except MisuseError:
        pass
    if P == ParamPoly.from_expr(TANGENT_FAMILY):
        payload["translation"] = translated_divide(f, N)

    print(emit_json("divide", config.output, payload), end="")
    rows = [[k, *L, str(c)] for (k, L), c in result.q.items()]
    emit_csv("divide", config.output, ["k", *(["t"] if P.m == 1 else ["t1", "t2"]), "q"], rows)
    return 0
