"""Services package."""

from src.services.io_service import (
    dumps,
    list_json,
    load_poly,
    load_sequence,
    load_series,
    write_csv,
    write_json,
    write_text,
)
from src.services.verify_service import (
    VerificationTable,
    VerifyCheck,
    format_table,
    run_verification,
)

__all__ = [
    "dumps",
    "list_json",
    "load_poly",
    "load_sequence",
    "load_series",
    "write_csv",
    "write_json",
    "write_text",
    "VerificationTable",
    "VerifyCheck",
    "format_table",
    "run_verification",
]
