"""Deformation parameter and quadrature settings."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError, ResonanceWarning

B_MIN = 0.1
B_MAX = 0.95
RESONANCE_DENOMINATOR = 64
RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class ModularParameter:
    """The parameter ``b`` of the modular double, with ``0 < b < 1``.

    ``b`` is the representative of the pair ``{b, 1/b}``.  ``swapped``
    selects ``1/b`` as the working base (used for the dual half of the
    modular double); ``Q`` is the same for both.
    """

    b: float
    swapped: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.b, (int, float)) and math.isfinite(self.b)):
            raise ParameterError(f"b must be a finite real, got {self.b!r}")
        if not 0.0 < self.b < 1.0:
            raise ParameterError(f"b must satisfy 0 < b < 1, got {self.b}")

    @classmethod
    def validated(cls, b: float) -> "ModularParameter":
        """Build with the working-range checks used by the CLI and suites."""
        if not B_MIN <= b <= B_MAX:
            raise ParameterError(f"b={b} outside the supported range [{B_MIN}, {B_MAX}]")
        frac = Fraction(b * b).limit_denominator(RESONANCE_DENOMINATOR)
        if abs(float(frac) - b * b) < RESONANCE_TOL:
            warnings.warn(
                f"b**2 = {b * b!r} is within {RESONANCE_TOL} of {frac}; "
                "pole lattices of b and 1/b overlap",
                ResonanceWarning,
                stacklevel=2,
            )
        return cls(float(b))

    @property
    def base(self) -> float:
        return 1.0 / self.b if self.swapped else self.b

    @property
    def Q(self) -> float:
        return self.b + 1.0 / self.b

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * self.base**2)

    @property
    def q_dual(self) -> complex:
        return cmath.exp(1j * math.pi / self.base**2)

    def dual(self) -> "ModularParameter":
        return ModularParameter(self.b, not self.swapped)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre settings for the contour integral.

    Each real segment is as long as the decay bound requires (its
    exponential tail below a tenth of ``target_abs_error``).  ``truncation``
    is the reference length: ``panel_count`` panels cover a segment of that
    length, and longer or shorter segments get proportionally more or fewer.
    """

    truncation: float = 40.0
    indent_radius: float | None = None
    panel_count: int = 64
    target_abs_error: float = 1e-10

    def __post_init__(self) -> None:
        if not self.truncation > 0:
            raise ParameterError("truncation must be positive")
        if self.indent_radius is not None and not 0 < self.indent_radius < self.truncation:
            raise ParameterError("indent_radius must lie in (0, truncation)")
        if int(self.panel_count) != self.panel_count or self.panel_count < 1:
            raise ParameterError("panel_count must be a positive integer")
        if not self.target_abs_error > 0:
            raise ParameterError("target_abs_error must be positive")

    def radius_for(self, param: ModularParameter) -> float:
        if self.indent_radius is not None:
            return self.indent_radius
        return min(param.b, 1.0 / param.b) / 2.0

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(
            self.truncation, self.indent_radius, 2 * self.panel_count, self.target_abs_error
        )

    @classmethod
    def parse(cls, text: str) -> "QuadratureSpec":
        """Parse ``"T,r,panels,eps"``; ``r`` may be ``auto``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ParameterError("quadrature spec must be T,r,panels,eps")
        try:
            radius = None if parts[1] in ("", "auto") else float(parts[1])
            return cls(float(parts[0]), radius, int(parts[2]), float(parts[3]))
        except ValueError as exc:
            raise ParameterError(f"bad quadrature spec {text!r}: {exc}") from exc
