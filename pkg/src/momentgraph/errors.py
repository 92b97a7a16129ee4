"""Exception taxonomy shared by the whole package.

Three families matter to callers: schema problems (bad input files),
validation failures (an axiom or precondition does not hold, with a
report attached), and mathematical errors (a computation is impossible,
e.g. an exact division has a remainder).  The CLI maps them to exit
codes 3, 1 and 2 respectively.
"""

from __future__ import annotations


class MomentGraphError(Exception):
    pass


class SchemaError(MomentGraphError):
    """Malformed or inconsistent input data."""


class ValidationFailure(MomentGraphError):
    """A precondition or axiom check failed; carries the offending report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PreconditionFailed(ValidationFailure):
    pass


class NotMember(ValidationFailure):
    """A vertex tuple violates the edge-divisibility condition."""


class IncompatibleRelation(ValidationFailure):
    pass


class NotSpecialMatching(ValidationFailure):
    pass


class HypothesisViolated(ValidationFailure):
    """The twisted-pullback hypothesis fails on some edge."""


class InvalidMonodromy(ValidationFailure):
    pass


class MathError(MomentGraphError):
    pass


class ZeroVector(MathError):
    pass


class RankMismatch(MathError):
    pass


class NotUnimodular(MathError):
    pass


class NotDivisible(MathError):
    """Exact division failed; ``remainder`` holds the nonzero rest."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class NotFiniteType(MathError):
    pass


class AmbiguousSign(MathError):
    """A fiber label and its negative occur at the same vertex."""


class NotInSpan(MathError):
    pass


class NotTriangular(MathError):
    pass
