"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class GeodeError(Exception):
    """Base class for all errors raised by this package."""


class ResourceLimitError(GeodeError):
    """A computation would exceed the configured term budget."""


class InconsistencyError(GeodeError):
    """An exact identity that must hold did not (signals an arithmetic bug)."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnverifiedSystemError(GeodeError):
    """A recurrence or system is used without a valid verification record."""


class OracleFallbackError(GeodeError):
    """Every reduction direction is blocked and the oracle is too expensive."""


class NonIntegralStepError(InconsistencyError):
    """A forward recurrence step produced a non-integer value."""


class InsufficientDataError(GeodeError):
    """Not enough data rows for the requested ansatz."""

    def __init__(self, message, rows_available=0, rows_needed=0):
        super().__init__(message)
        self.rows_available = rows_available
        self.rows_needed = rows_needed


class ReconstructionError(GeodeError):
    """Rational reconstruction did not stabilise within the prime budget."""
