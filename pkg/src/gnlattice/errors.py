"""Exception types raised across the package."""

from __future__ import annotations


class LatticeError(Exception):
    """Base class for every error raised by gnlattice."""


class DisjointnessViolation(LatticeError):
    pass


class UnknownLabel(LatticeError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class GroundMismatch(LatticeError):
    pass


class SingularMatrix(LatticeError):
    pass


class RankDeficient(LatticeError):
    pass


class BadParameter(LatticeError, ValueError):
    pass


class PreconditionFailed(LatticeError):
    """A documented precondition does not hold.

    ``condition`` names the failing containment or property so callers
    (and the command line) can report it verbatim.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class TooLargeForExhaustiveCheck(LatticeError):
    pass


class LatticeMismatch(LatticeError):
    pass


class NotInRestriction(LatticeError):
    pass


class NoPreimage(LatticeError):
    pass


class NotInProjectionLattice(NoPreimage):
    pass


class NotInLinkedLattice(LatticeError):
    pass


class PortConditionViolated(PreconditionFailed):
    pass


class NotRegular(LatticeError):
    pass


class UnboundName(LatticeError):
    pass


class LinkageSyntaxError(LatticeError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")
