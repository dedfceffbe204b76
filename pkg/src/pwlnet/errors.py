"""Exception types shared across the package.

The split matters for the CLI and the HTTP service: input problems
(parse/dimension/domain) map to exit code 1 / HTTP 422, broken internal
invariants map to exit code 2 / HTTP 500.
"""


class PwlnetError(Exception):
    """Base class for all package errors."""


class ParseError(PwlnetError, ValueError):
    """Malformed document, numeral, or point literal."""


class DimensionError(PwlnetError, ValueError):
    """Arity or dimension mismatch between values that must agree."""


class DomainError(PwlnetError, ValueError):
    """Value outside its required domain (e.g. input not in the unit cube)."""


class EmptyRegionError(PwlnetError, ValueError):
    """An operation that requires a nonempty region was given an empty one."""


class LatticeError(PwlnetError, ValueError):
    """The lattice property does not hold where it is required."""


class InternalCheckError(PwlnetError, RuntimeError):
    """A self-check failed; indicates a bug, not bad input."""
