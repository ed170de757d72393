"""Exception hierarchy shared by all modules.

Grouped so the CLI can map failures to exit codes: usage problems,
bad input data, and numerical breakdowns are distinguishable.
"""


class SphereletsError(Exception):
    """Base class for all library errors."""


class ParameterError(SphereletsError, ValueError):
    """An argument is out of its documented range (k, sigma, eps, ...)."""


class DimensionError(SphereletsError, ValueError):
    """Array shapes are inconsistent with each other or with the model."""


class InsufficientDataError(SphereletsError, ValueError):
    """Too few samples to determine the requested fit."""


class DegenerateSplitError(SphereletsError, ValueError):
    """A cell cannot be split (zero scatter or an empty side)."""


class SingularProjectionError(SphereletsError, ArithmeticError):
    """The point projects onto the sphere center; nearest point undefined."""


class DivergenceError(SphereletsError, ArithmeticError):
    """Iterative optimization failed to recover after repeated step halving."""


class ParseError(SphereletsError, ValueError):
    """A file could not be parsed; message carries row/field context."""


class VersionError(ParseError):
    """A model file declares an unsupported format version."""
