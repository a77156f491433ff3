"""Exception types shared across the package."""


class ModularDoubleError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ModularDoubleError, ValueError):
    """Invalid deformation parameter or quadrature settings."""


class ResonanceWarning(UserWarning):
    """b**2 is numerically close to a rational with a small denominator."""


class MarginViolation(ModularDoubleError, ValueError):
    """Point too close to the boundary of the integral-representation strip."""


class NonConvergence(ModularDoubleError, ArithmeticError):
    """Quadrature error estimate stayed above target after refinement."""


class PoleEvaluation(ModularDoubleError, ArithmeticError):
    """A strict value was requested at a pole of G_b."""


class UnresolvablePole(ModularDoubleError, ArithmeticError):
    """q-beta ratio with a singular argument that cannot be cancelled."""


class DimensionMismatch(ModularDoubleError, ValueError):
    """Monomials or elements live over different variable/parameter counts."""


class NotDivisible(ModularDoubleError, ArithmeticError):
    """No exact quotient exists in the phase-coefficient ring."""
