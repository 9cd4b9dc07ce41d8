"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should
raise the most specific one that applies.
"""


class GirthforgeError(Exception):
    """Base class for all package-specific errors."""


class ParseError(GirthforgeError, ValueError):
    """A file or string could not be parsed (CLI exit code 2)."""


class PreconditionError(GirthforgeError, ValueError):
    """An operation was called with inputs outside its contract (CLI exit code 3)."""


class CertificationError(GirthforgeError, RuntimeError):
    """A design run finished without producing a certified result (CLI exit code 4)."""
