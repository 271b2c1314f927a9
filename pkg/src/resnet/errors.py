"""Exception types shared across the package."""


class ResnetError(Exception):
    """Base class for all library errors."""


class ValidationError(ResnetError):
    """Malformed input: bad conductances, unknown vertices, disconnected graphs."""


class NotAResistanceMetric(ResnetError):
    """Matrix admits no electrical network: negative conductance or failed round trip."""

    def __init__(self, message, witness_conductance=None):
        super().__init__(message)
        self.witness_conductance = witness_conductance


class CapacityError(ResnetError):
    """Exact enumeration budget exceeded (point counts, correspondence search)."""


class RejectionBudgetError(CapacityError):
    """Conditioned sampling exhausted its rejection budget; retrying with a new
    seed or a larger budget may succeed."""

    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts
