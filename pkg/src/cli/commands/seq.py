"""
CLI - Sequence Command

Regularity certificates, Legendre round trip and power-sequence constants
for one weight sequence.
"""

import logging
import math

from src.cli.outputs import emit_csv, emit_json, emit_svg
from src.cli.svg import scatter
from src.errors import InvalidSequenceError
from src.schemas import RunConfig
from src.sequences.dcseq import DCSequence, check_regularity, kappa_estimate, legendre_recover, power_sequence
from src.services.io_service import load_sequence

logger = logging.getLogger(__name__)

ROUND_TRIP_MAX = 12


def execute(config: RunConfig) -> int:
    seq = load_sequence(config.seq_path) if config.seq_path else DCSequence.gevrey(1.0)
    report = check_regularity(seq)

    rows = []
    for j in range(min(ROUND_TRIP_MAX, seq.j_max) + 1):
        recovered = math.log(float(legendre_recover(seq, j)))
        rows.append([j, float(seq.log_values[j]), recovered, abs(math.expm1(recovered - seq.log_values[j]))])

    payload = {
        "sequence": seq.to_spec(),
        "regularity": report,
        "legendre": {
            "max_rel_error": max(r[3] for r in rows),
            "j_max": rows[-1][0],
        },
    }
    if config.power is not None:
        result = power_sequence(seq, config.power)
        payload["power"] = result
        try:
            payload["kappa"] = kappa_estimate(seq, config.power)
        except InvalidSequenceError as exc:
            logger.warning("kappa estimate unavailable: %s", exc)
            payload["kappa"] = None

    print(emit_json("seq", config.output, payload), end="")
    emit_csv("seq", config.output, ["j", "log_m", "log_m_recovered", "rel_error"], rows)
    points = [(float(j), float(v)) for j, v in enumerate(seq.log_values)]
    emit_svg("seq", config.output, scatter({0: points}, "log M_j", "j", "log M_j", lines=[points]))
    return 0
