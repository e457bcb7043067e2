"""Exception hierarchy for spectral-domains."""

from __future__ import annotations

from typing import Any

__all__ = [
    "BottomInput",
    "CarrierMismatch",
    "DimensionMismatch",
    "DivergenceBound",
    "DomainError",
    "EmptyMeet",
    "EmptyOpen",
    "EnumerationCapExceeded",
    "InconsistentJoin",
    "InputError",
    "IvpError",
    "MalformedInterval",
    "NoConvergence",
    "NotWayBelow",
    "ParseError",
    "PointOutsideCarrier",
    "SpectralDomainsError",
]


class SpectralDomainsError(Exception):
    """Base exception for all spectral-domains errors."""


class DomainError(SpectralDomainsError):
    """Base for order-theoretic misuse (mismatched shapes, missing joins, ...)."""


class DimensionMismatch(DomainError):
    """Boxes, step functions or fields of different dimensions were combined."""


class CarrierMismatch(DomainError):
    """Opens or step functions over different carriers were combined."""


class PointOutsideCarrier(DomainError):
    """A point was queried outside the carrier interval."""


class InconsistentJoin(DomainError):
    """A set of boxes has no upper bound, so its join does not exist."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class EmptyMeet(DomainError):
    """The meet of the empty set was requested."""


class EmptyOpen(DomainError):
    """An operation needed a non-empty open and got the empty set."""


class NotWayBelow(DomainError):
    """An interpolation precondition f ≺ g failed."""

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


class EnumerationCapExceeded(DomainError):
    """An exponential enumeration would exceed its configured cap."""

    def __init__(self, message: str, cap: int) -> None:
        super().__init__(message)
        self.cap = cap


class InputError(SpectralDomainsError, ValueError):
    """Malformed user input: files, schemas, raw intervals."""


class MalformedInterval(InputError):
    """A raw half-open piece has lower >= upper."""


class ParseError(InputError):
    """A vector-field expression could not be parsed."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BottomInput(DomainError):
    """Interval arithmetic was asked to evaluate on the bottom box."""


class IvpError(SpectralDomainsError):
    """Base for validated solver failures."""


class DivergenceBound(IvpError):
    """No a-priori bound was certified within the iteration or magnitude limits."""

    def __init__(self, message: str, piece: int | None = None) -> None:
        super().__init__(message)
        self.piece = piece


class NoConvergence(IvpError):
    """Fixpoint iteration hit its cap before two iterates coincided."""

    def __init__(self, message: str, iterations: int) -> None:
        super().__init__(message)
        self.iterations = iterations
