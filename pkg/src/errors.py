"""
Weierdiv - Errors

Exception hierarchy shared by all modules. Every error carries a stable
``code`` that the CLI writes into its machine-readable error JSON.
"""

from typing import Optional


class WeierdivError(Exception):
    """Base class for all toolkit errors."""

    code = "weierdiv_error"

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": str(self)}


class SequenceRangeError(WeierdivError, IndexError):
    code = "sequence_range"


class InvalidSequenceError(WeierdivError, ValueError):
    code = "invalid_sequence"


class RootSolverError(WeierdivError):
    code = "root_solver"

    def __init__(self, message: str, t=None):
        super().__init__(message)
        self.t = t

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["t"] = None if self.t is None else [float(v) for v in self.t]
        return data


class DegenerateFiberError(WeierdivError):
    code = "degenerate_fiber"


class CalibrationError(WeierdivError):
    code = "calibration_failure"


class DomainTooLargeError(WeierdivError):
    code = "domain_too_large"

    def __init__(self, message: str, z: Optional[complex] = None):
        super().__init__(message)
        self.z = z

    def to_dict(self) -> dict:
        data = super().to_dict()
        if self.z is not None:
            data["z"] = [self.z.real, self.z.imag]
        return data


class NearPoleError(WeierdivError):
    code = "near_pole"


class InsufficientSamplingError(WeierdivError):
    code = "insufficient_sampling"


class BranchTrackingError(WeierdivError):
    code = "branch_tracking"

    def __init__(self, message: str, radius: Optional[float] = None):
        super().__init__(message)
        self.radius = radius

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["radius"] = self.radius
        return data


class OverlapError(WeierdivError):
    code = "branch_overlap"


class ConvergenceError(WeierdivError):
    code = "nonconvergence"


class UndefinedFitError(WeierdivError):
    code = "undefined_fit"


class MisuseError(WeierdivError):
    code = "misuse"


class InvalidPolynomialError(WeierdivError, ValueError):
    code = "invalid_polynomial"

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["field"] = self.field
        return data
