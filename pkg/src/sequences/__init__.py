"""Weight sequences and their associated functions."""

from src.sequences.dcseq import (
    DCSequence,
    LogGrid,
    RegularityReport,
    check_regularity,
    h_function,
    kappa_estimate,
    legendre_recover,
    power_sequence,
    seq_value,
)

__all__ = [
    "DCSequence",
    "LogGrid",
    "RegularityReport",
    "check_regularity",
    "h_function",
    "kappa_estimate",
    "legendre_recover",
    "power_sequence",
    "seq_value",
]
