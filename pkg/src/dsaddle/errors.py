"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """A mathematical hypothesis of the requested operation does not hold.

    Raised when the inputs are well formed but fail a condition the result
    would silently depend on (definiteness, nullity, an admissible interval).
    Distinguished from ValueError so callers can tell malformed arguments
    apart from violated hypotheses.
    """


class GenerationError(RuntimeError):
    """The instance generator exhausted its retry budget without hitting
    every requested target."""
