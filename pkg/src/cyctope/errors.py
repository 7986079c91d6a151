"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep them distinct from plain
verification failures (which are reported, never raised).
"""


class CyctopeError(Exception):
    """Base class for all toolkit errors."""


class InputError(CyctopeError, ValueError):
    """Malformed input: unknown ids, bad parameters, violated preconditions."""


class TruncationError(CyctopeError):
    """A homology degree was requested that the truncated complex cannot support."""


class ResourceError(CyctopeError):
    """A configured size cap would be exceeded."""


class NoWitnessError(CyctopeError):
    """Back-and-forth found an empty cut and stage raising is disabled."""


class InternalError(CyctopeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
