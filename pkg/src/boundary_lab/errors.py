"""Exception hierarchy for boundary_lab."""


class BoundaryLabError(Exception):
    """Base class for every error raised by this package."""


class NonNegativeRealPart(BoundaryLabError, ValueError):
    pass


class RightHalfPlaneInput(BoundaryLabError, ValueError):
    pass


class ZeroValue(BoundaryLabError, ValueError):
    pass


class JumpTooLarge(BoundaryLabError, ValueError):
    """Consecutive samples are too far apart in argument to unwrap."""


class InvalidRatio(BoundaryLabError, ValueError):
    pass


class EmptySet(BoundaryLabError, ValueError):
    pass


class SetCoversBase(BoundaryLabError, RuntimeError):
    pass


class QuadratureBudgetExceeded(BoundaryLabError, RuntimeError):
    pass


class NoExplicitLog(BoundaryLabError, TypeError):
    """The representation is not zero-free by construction."""


class WindowTooLarge(BoundaryLabError, ValueError):
    pass


class IndexOutOfRange(BoundaryLabError, IndexError):
    pass


class SlitCollision(BoundaryLabError, ValueError):
    pass


class DegenerateRaster(BoundaryLabError, RuntimeError):
    pass


class PreconditionError(BoundaryLabError, ValueError):
    pass


class ConfigError(BoundaryLabError, ValueError):
    pass
