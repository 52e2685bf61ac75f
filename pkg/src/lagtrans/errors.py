"""Exception types raised by the library.

Every error carries its class name through to CLI reports, so the names
here are part of the public surface.
"""


class LagrangianError(ValueError):
    """Base class for all library errors."""


class DimensionMismatch(LagrangianError):
    pass


class EpsilonMismatch(LagrangianError):
    pass


class SpaceMismatch(LagrangianError):
    pass


class SymmetryViolation(LagrangianError):
    pass


class Degenerate(LagrangianError):
    pass


class WrongDimension(LagrangianError):
    pass


class NotIsotropic(LagrangianError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotTransversal(LagrangianError):
    pass


class NotTransversalToLstar(LagrangianError):
    pass


class NotTransversalTriple(LagrangianError):
    pass


class NotInvertible(LagrangianError):
    pass


class NonStandardSpace(LagrangianError):
    pass


class SamplingTooCoarse(LagrangianError):
    pass


class ContinuityViolation(SamplingTooCoarse):
    """Consecutive samples of a path or loop are too far apart."""


class NotClosed(LagrangianError):
    pass


class EndpointMismatch(LagrangianError):
    pass
