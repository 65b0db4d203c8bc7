"""Exception types raised across the package."""


class SpectralError(Exception):
    """Base class for every error raised by periodic_xy."""


class ParameterError(SpectralError, ValueError):
    pass


class DimensionMismatch(SpectralError, ValueError):
    pass


class ShapeMismatch(SpectralError, ValueError):
    pass


class NonHermitianInput(SpectralError, ValueError):
    pass


class NoConvergence(SpectralError, RuntimeError):
    pass


class SingularShift(SpectralError, ZeroDivisionError):
    pass


class DegenerateParameters(SpectralError, ValueError):
    """Input sits on a coincidence the closed forms cannot resolve."""


class MatchFailure(SpectralError, RuntimeError):
    pass


class OverflowRisk(SpectralError, OverflowError):
    pass


class NonOrthogonalBasis(SpectralError, ValueError):
    pass
