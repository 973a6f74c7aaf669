"""Shared exception types.

Error categories map to CLI exit codes: usage problems are raised as
InvalidArgumentError (exit 2), file format problems as FormatError (exit 3),
and numeric breakdowns as NumericError (exit 4).
"""


class NoiseWarpError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(NoiseWarpError, ValueError):
    """A precondition on an operation's arguments was violated."""


class FormatError(NoiseWarpError):
    """A serialized artifact (.flo file, noise container) is malformed."""


class DegenerateInputError(NoiseWarpError):
    """Input is statistically degenerate (e.g. zero-variance field)."""


class NumericError(NoiseWarpError):
    """A numeric invariant broke down at runtime (NaN/Inf, underflow)."""
