"""Exception types shared across the package."""


class SteerwitError(Exception):
    """Base class for all package errors."""


class DimensionError(SteerwitError, ValueError):
    """A matrix had the wrong shape for the requested operation."""


class ParameterError(SteerwitError, ValueError):
    """A scalar parameter fell outside its allowed range."""


class ContractViolation(SteerwitError, ValueError):
    """An input broke a numerical precondition (Hermiticity, PSD, trace)."""


class NotPSDError(ContractViolation):
    """A matrix expected to be positive semidefinite had a negative eigenvalue."""


class DegenerateDataError(SteerwitError, ValueError):
    """Tomography counts carry no information for some measurement group."""
