"""Exception hierarchy shared by all modules.

Validation problems (bad input, violated preconditions) derive from
``ValidationError``; size guards derive from ``BoundError``.  The CLI maps
the two families to distinct exit codes.
"""


class PolytopeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PolytopeError):
    """Input or precondition failure."""


class BoundError(PolytopeError):
    """A requested computation exceeds a configured size bound."""


class NonCubic(ValidationError):
    pass


class NonSpherical(ValidationError):
    pass


class MultiEdge(ValidationError):
    pass


class Asymmetric(ValidationError):
    pass


class InvalidInput(ValidationError):
    pass


class DegenerateResult(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class InvalidTarget(ValidationError):
    pass


class ConstraintViolated(ValidationError):
    pass


class NotSameFace(ValidationError):
    pass


class NotDisjoint(ValidationError):
    pass


class NotRestricted(ValidationError):
    pass


class NotFlag(ValidationError):
    pass


class IsSimplex(ValidationError):
    pass


class InvalidPair(ValidationError):
    pass


class InvalidOmega(ValidationError):
    pass


class MixedTables(ValidationError):
    pass


class OutOfFamily(ValidationError):
    pass


class BoundTooLarge(BoundError):
    pass
