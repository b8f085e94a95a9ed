"""Exception taxonomy shared by all frobdist modules.

The CLI maps these onto process exit codes: curve/model problems exit 2,
numeric failures exit 3, size guards exit 4.
"""


class FrobdistError(Exception):
    """Base class for all package errors."""


# -- input / model validation -------------------------------------------------

class NotPrime(FrobdistError):
    """Characteristic is not a prime number."""


class SizeExceeded(FrobdistError):
    """A cardinality or enumeration guard was exceeded."""


class FieldMismatch(FrobdistError):
    """Operands belong to different fields."""


class DivisionByZero(FrobdistError):
    """Multiplicative inverse of zero requested."""


class EvenCharacteristic(FrobdistError):
    """Operation requires odd characteristic."""


class SingularCurve(FrobdistError):
    """Curve model fails the smoothness test."""


class BadDegree(FrobdistError):
    """Polynomial degree outside the supported model."""


class BadCharacteristic(FrobdistError):
    """Supplied prime does not divide the field size."""


class ZeroParameter(FrobdistError):
    """Parameter must be a nonzero residue."""


class DegreeOutOfRange(FrobdistError):
    """Irreducibility test supports degrees 1 through 4 only."""


# -- arithmetic consistency ---------------------------------------------------

class WeilViolation(FrobdistError):
    """A trace or root modulus breaks the square-root bound."""


class NonIntegerCoefficient(FrobdistError):
    """Newton-identity division did not come out exact."""


# -- numeric failures ---------------------------------------------------------

class NoConvergence(FrobdistError):
    """Iterative root finder hit its iteration cap."""


class PrecisionInsufficient(FrobdistError):
    """Working precision cannot support the requested computation."""


class ToleranceBelowPrecision(FrobdistError):
    """Requested tolerance is tighter than the available angle precision."""


class ToleranceUnachievable(FrobdistError):
    """Quadrature error estimate exceeds the requested tolerance."""


# -- guards -------------------------------------------------------------------

class GuardExceeded(FrobdistError):
    """A sequence-length guard was exceeded."""
