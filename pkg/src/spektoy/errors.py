"""Exception types shared across the package."""


class SpektoyError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(SpektoyError, ValueError):
    """Vectors/operators with incompatible (d, n) were combined."""


class RestrictionViolation(SpektoyError, ValueError):
    """A state or measurement breaks the joint-knowledge restriction
    (non-isotropic known-variable subspace)."""


class GuardExceeded(SpektoyError, RuntimeError):
    """An enumeration would exceed its hard size guard.

    Guards are hard errors, never silent truncation: exhaustiveness of the
    enumerations is load-bearing for the certificates built on top of them.
    """


class InvalidGenerators(SpektoyError, ValueError):
    """Stabilizer-style generator set is anticommuting, dependent, or has
    inconsistent signs."""


class CircuitParseError(SpektoyError, ValueError):
    """Malformed circuit text or state specification."""


class AuditError(SpektoyError, ValueError):
    """A circuit references elements outside the allowed (host) sets."""
