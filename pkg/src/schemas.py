"""
Weierdiv - JSON Schemas

Pydantic models for every file format read or written by the toolkit:
sequences, Weierstrass polynomials, truncated power series and the CLI
run configuration.
"""

from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class SequenceSpec(BaseModel):
    """Generator description of a Denjoy-Carleman weight sequence."""

    generator: Literal["gevrey", "gevrey_log", "explicit", "power"] = Field(
        description="gevrey: (j!)^alpha; gevrey_log: (j!)^alpha (ln(j+e))^(beta j); explicit: listed values; power: (base_j)^s"
    )
    alpha: Optional[float] = Field(
        default=None, gt=0, description="Gevrey index, required for gevrey and gevrey_log"
    )
    beta: Optional[float] = Field(
        default=None, description="Logarithmic exponent, required for gevrey_log"
    )
    values: Optional[List[float]] = Field(
        default=None, description="Explicit values M_0..M_n for the explicit generator"
    )
    j_max: Optional[int] = Field(
        default=None, ge=1, description="Largest cached index (ignored for explicit)"
    )
    base: Optional["SequenceSpec"] = Field(
        default=None, description="Base sequence of a power sequence"
    )
    s: Optional[float] = Field(
        default=None, ge=1, description="Exponent of a power sequence"
    )

    @model_validator(mode="after")
    def _check_generator_fields(self):
        if self.generator in ("gevrey", "gevrey_log") and self.alpha is None:
            raise ValueError(f"alpha is required for generator {self.generator!r}")
        if self.generator == "gevrey_log" and self.beta is None:
            raise ValueError("beta is required for generator 'gevrey_log'")
        if self.generator == "explicit" and not self.values:
            raise ValueError("values is required for generator 'explicit'")
        if self.generator == "power" and (self.base is None or self.s is None):
            raise ValueError("base and s are required for generator 'power'")
        return self


SequenceSpec.model_rebuild()


class MonomialSpec(BaseModel):
    """One rational monomial num/den * t_1^e_1 ... t_m^e_m."""

    t_exponents: List[int] = Field(description="Exponents e_1..e_m of t")
    num: int = Field(description="Numerator of the rational coefficient")
    den: int = Field(default=1, description="Positive denominator of the coefficient")

    @field_validator("t_exponents")
    @classmethod
    def _non_negative(cls, value):
        if any(e < 0 for e in value):
            raise ValueError("t_exponents must be non-negative")
        return value

    @field_validator("den")
    @classmethod
    def _positive_den(cls, value):
        if value <= 0:
            raise ValueError("den must be positive")
        return value


class PolySpec(BaseModel):
    """Weierstrass polynomial x^d + a_1(t) x^(d-1) + ... + a_d(t)."""

    name: Optional[str] = Field(default=None, description="Human readable label")
    d: int = Field(ge=1, description="Degree in x")
    m: Literal[1, 2] = Field(description="Parameter dimension")
    coeffs: List[List[MonomialSpec]] = Field(
        description="coeffs[j-1] lists the monomials of a_j(t)"
    )

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.coeffs) != self.d:
            raise ValueError(f"coeffs must list exactly d={self.d} coefficients")
        for j, monomials in enumerate(self.coeffs, start=1):
            for mono in monomials:
                if len(mono.t_exponents) != self.m:
                    raise ValueError(
                        f"coeffs[{j - 1}]: t_exponents must have length m={self.m}"
                    )
                if sum(mono.t_exponents) == 0 and mono.num != 0:
                    raise ValueError(
                        f"coeffs[{j - 1}]: a_{j}(0) must vanish (constant term found)"
                    )
        return self


class TermSpec(BaseModel):
    """One coefficient c * x^k t^L of a truncated power series."""

    k: int = Field(ge=0, description="Exponent of x")
    L: List[int] = Field(description="Exponents of t_1..t_m")
    num: Optional[int] = Field(default=None, description="Numerator (exact mode)")
    den: int = Field(default=1, description="Denominator (exact mode)")
    value: Optional[str] = Field(
        default=None, description="Decimal string of the coefficient (float mode)"
    )

    @model_validator(mode="after")
    def _check_value(self):
        if self.num is None and self.value is None:
            raise ValueError("either num/den or value must be given")
        if self.den <= 0:
            raise ValueError("den must be positive")
        return self


class SeriesSpec(BaseModel):
    """Truncated formal power series in (x, t)."""

    m: Literal[1, 2] = Field(description="Parameter dimension")
    N: int = Field(ge=0, description="Truncation order in total degree")
    mode: Literal["exact", "float"] = Field(default="exact")
    terms: List[TermSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_terms(self):
        for i, term in enumerate(self.terms):
            if len(term.L) != self.m:
                raise ValueError(f"terms[{i}]: L must have length m={self.m}")
        return self


Subcommand = Literal["seq", "gamma", "sigma", "divide", "verify", "report"]


class OutputSpec(BaseModel):
    json_path: Optional[Path] = Field(default=None, description="JSON report path")
    csv_path: Optional[Path] = Field(default=None, description="CSV samples path")
    svg_path: Optional[Path] = Field(default=None, description="SVG plot path")


class RunConfig(BaseModel):
    """Fully resolved configuration of one CLI invocation."""

    subcommand: Subcommand
    poly_path: Optional[Path] = None
    seq_path: Optional[Path] = None
    series_path: Optional[Path] = None
    report_dir: Optional[Path] = None
    eta: float = Field(default=0.5, gt=0)
    delta: Optional[float] = Field(default=None, gt=0)
    radii: int = Field(default=24, ge=2)
    angles: int = Field(default=96, ge=4)
    bins: int = Field(default=32, ge=6)
    window: int = Field(default=12, ge=2)
    n_radial: int = Field(default=160, ge=8)
    n_angular: int = Field(default=32, ge=4)
    truncation: int = Field(default=24, ge=1)
    power: Optional[float] = Field(default=None, ge=1)
    k_max: int = Field(default=10, ge=0)
    output: OutputSpec = Field(default_factory=OutputSpec)
    rng_seed: int = 0
    threads: int = Field(default=1, ge=1)
