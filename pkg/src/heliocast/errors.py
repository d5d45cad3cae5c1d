"""Exception types shared across the package."""


class HeliocastError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(HeliocastError):
    """An input file does not match its declared schema."""


class ConvergenceError(HeliocastError):
    """An iterative fit failed to reach its stopping tolerance."""


class LookaheadError(HeliocastError):
    """A forecast computation tried to read data from after its issue time."""
