"""
Weierdiv - Configuration Module

Centralized configuration management for the toolkit.
Loads environment variables and validates numeric settings.
"""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Execution
THREADS = os.getenv("WEIERDIV_THREADS", "1")
SEED = os.getenv("WEIERDIV_SEED", "0")
LOG_LEVEL = os.getenv("WEIERDIV_LOG_LEVEL", "WARNING").upper()

# Numerical tolerances
TOL_ROOT = os.getenv("WEIERDIV_TOL_ROOT", "1e-12")
CLUSTER_RADIUS = os.getenv("WEIERDIV_CLUSTER_RADIUS", "1e-6")
NEAR_POLE = os.getenv("WEIERDIV_NEAR_POLE", "1e-14")
POLISH_TOL = os.getenv("WEIERDIV_POLISH_TOL", "1e-10")

# Sequences
J_MAX = os.getenv("WEIERDIV_J_MAX", "48")
MP_DPS = os.getenv("WEIERDIV_MP_DPS", "40")

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _parse(name, raw, kind, errors, minimum=None):
    try:
        value = kind(raw)
    except (TypeError, ValueError):
        errors.append(f"{name}={raw!r} is not a valid {kind.__name__}")
        return None
    if minimum is not None and value < minimum:
        errors.append(f"{name}={raw!r} must be >= {minimum}")
        return None
    return value


# Validate required settings
def validate_config():
    """Validate that all settings parse, and convert them in place."""
    global THREADS, SEED, TOL_ROOT, CLUSTER_RADIUS, NEAR_POLE, POLISH_TOL
    global J_MAX, MP_DPS
    errors = []

    THREADS = _parse("WEIERDIV_THREADS", THREADS, int, errors, minimum=1)
    SEED = _parse("WEIERDIV_SEED", SEED, int, errors)
    TOL_ROOT = _parse("WEIERDIV_TOL_ROOT", TOL_ROOT, float, errors, minimum=0.0)
    CLUSTER_RADIUS = _parse(
        "WEIERDIV_CLUSTER_RADIUS", CLUSTER_RADIUS, float, errors, minimum=0.0
    )
    NEAR_POLE = _parse("WEIERDIV_NEAR_POLE", NEAR_POLE, float, errors, minimum=0.0)
    POLISH_TOL = _parse("WEIERDIV_POLISH_TOL", POLISH_TOL, float, errors, minimum=0.0)
    J_MAX = _parse("WEIERDIV_J_MAX", J_MAX, int, errors, minimum=8)
    MP_DPS = _parse("WEIERDIV_MP_DPS", MP_DPS, int, errors, minimum=20)

    if LOG_LEVEL not in _LOG_LEVELS:
        errors.append(f"WEIERDIV_LOG_LEVEL={LOG_LEVEL!r} is not a logging level")

    if errors:
        error_msg = "Configuration errors:\n" + "\n".join(f"  - {e}" for e in errors)
        raise ValueError(error_msg)


# Validate on import
validate_config()
