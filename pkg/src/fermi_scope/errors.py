"""Exception types raised by fermi_scope."""


class FermiScopeError(Exception):
    """Base class for all library errors."""


class DimensionError(FermiScopeError, ValueError):
    """Array shapes are inconsistent or out of the supported range."""


class NotPositiveDefinite(FermiScopeError, ValueError):
    """A matrix required to be symmetric positive definite is not."""


class NumericalPairingError(FermiScopeError, ArithmeticError):
    """Eigenvalues expected to come in equal pairs could not be paired."""


class EmptyWavefunction(FermiScopeError, ValueError):
    """A sampled wavefunction vanishes identically."""


class GridError(FermiScopeError, ValueError):
    """A sampling grid violates a size or spacing requirement."""
