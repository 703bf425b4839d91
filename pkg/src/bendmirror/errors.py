"""Exception hierarchy shared by every module.

Each exception carries a short machine-readable ``code`` and the exit status
the command-line front end should use when it escapes a command.
"""

from __future__ import annotations


class BendMirrorError(Exception):
    """Base class for all library errors."""

    code = "Error"
    exit_status = 3

    def __init__(self, message: str = "") -> None:
        super().__init__(message or self.code)
        self.message = message or self.code

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


class ValidationError(BendMirrorError):
    """Bad user input; reported with exit status 2."""

    code = "ValidationError"
    exit_status = 2


class ComputationError(BendMirrorError):
    """A well-formed request whose computation failed; exit status 3."""

    code = "ComputationError"
    exit_status = 3


# exactalg
class DivisionNotExact(ComputationError):
    code = "DivisionNotExact"


class VariableMismatch(ComputationError):
    code = "VariableMismatch"


class NotLaurent(ComputationError):
    code = "NotLaurent"


class UnknownVariable(ValidationError):
    code = "UnknownVariable"


class PoleAtZero(ComputationError):
    code = "PoleAtZero"


class ExponentOverflow(ComputationError):
    code = "ExponentOverflow"


# polygoncomb
class DiagonalNotInTriangulation(ValidationError):
    code = "DiagonalNotInTriangulation"


class InvalidTriangulation(ValidationError):
    code = "InvalidTriangulation"


class BoundExceeded(ValidationError):
    code = "BoundExceeded"


# polytopes
class InvalidLengthTuple(ValidationError):
    code = "InvalidLengthTuple"


class InfeasibleSystem(ComputationError):
    code = "InfeasibleSystem"


class NoCommonLevelPoint(ComputationError):
    code = "NoCommonLevelPoint"


# potentials / diskclasses
class OddN(ValidationError):
    code = "OddN"


class NonIntegralBoundary(ComputationError):
    code = "NonIntegralBoundary"


class UnsupportedTuple(ValidationError):
    code = "UnsupportedTuple"


# crit
class NoConvergence(ComputationError):
    code = "NoConvergence"


class EmptyResult(ComputationError):
    code = "EmptyResult"


# polygonsim
class TriangleInequalityViolated(ValidationError):
    code = "TriangleInequalityViolated"


class DegenerateAtBoundary(ComputationError):
    code = "DegenerateAtBoundary"


class DegenerateAxis(ComputationError):
    code = "DegenerateAxis"


class NotInPolytope(ValidationError):
    code = "NotInPolytope"
