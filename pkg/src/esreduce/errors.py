"""Exception types shared across the package."""


class ESReduceError(Exception):
    pass


class ParseError(ESReduceError):
    """Input file is not well-formed."""


class ValidationError(ESReduceError, ValueError):
    """Input parsed but violates an instance invariant."""


class HypothesisViolation(ESReduceError, ValueError):
    """A numerical precondition of a theorem does not hold."""


class OutOfRange(ESReduceError, ValueError):
    pass


class CapExceeded(ESReduceError):
    """Requested computation exceeds the configured dimension cap."""
