"""The viable base Ω₀: finite unions of rational half-open intervals on a carrier.

A carrier is a closed rational interval ``[lo, hi]`` with the subspace
rational upper limit topology, whose basic opens are ``(a, b]``. Opens that
contain the left end ``lo`` are written with the ``AT_LEFT_END`` lower bound;
the singleton ``{lo}`` is open in this subspace.

Every operation works by cutting the carrier into elementary cells at all
piece endpoints and rebuilding the canonical form from per-cell membership,
so union, intersection and canonicalization share one sweep.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import (
    CarrierMismatch,
    InputError,
    MalformedInterval,
    PointOutsideCarrier,
)
from spectral_domains.interval_domain import to_rational

__all__ = [
    "AT_LEFT_END",
    "Carrier",
    "HalfOpenPiece",
    "OpenSet",
    "canonicalize",
    "cells",
    "cells_with_membership",
    "contains_point",
    "elementary_cells",
    "from_cell_membership",
    "intersect",
    "intersect_all",
    "is_subset",
    "union",
    "union_all",
]

# Lower bound sentinel for pieces that contain the carrier's left end.
AT_LEFT_END = None


@dataclass(frozen=True, slots=True)
class Carrier:
    """The space X = [lo, hi]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = to_rational(self.lo), to_rational(self.hi)
        if not lo < hi:
            msg = f"Carrier needs lo < hi, got [{lo}, {hi}]"
            raise InputError(msg)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def of(cls, lo: object, hi: object) -> Carrier:
        return cls(to_rational(lo), to_rational(hi))

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True, slots=True)
class HalfOpenPiece:
    """``(lower, upper]``, or ``[carrier.lo, upper]`` when ``lower is AT_LEFT_END``."""

    lower: Fraction | None
    upper: Fraction

    @property
    def at_left_end(self) -> bool:
        return self.lower is None

    @property
    def representative(self) -> Fraction:
        """A point of the piece; the closed right end always belongs to it."""
        return self.upper

    def contains(self, x: Fraction, carrier: Carrier) -> bool:
        if self.lower is None:
            return carrier.lo <= x <= self.upper
        return self.lower < x <= self.upper

    def __str__(self) -> str:
        if self.lower is None:
            return f"[lo,{self.upper}]"
        return f"({self.lower},{self.upper}]"


@dataclass(frozen=True, slots=True)
class OpenSet:
    """Canonical member of Ω₀: sorted, disjoint, non-adjacent pieces.

    Structural equality coincides with point-set equality. Build values with
    :func:`canonicalize` or the ``empty``/``full``/``interval`` constructors.
    """

    carrier: Carrier
    pieces: tuple[HalfOpenPiece, ...] = ()

    def __post_init__(self) -> None:
        c = self.carrier
        previous: HalfOpenPiece | None = None
        for piece in self.pieces:
            if piece.lower is None:
                if previous is not None or not c.lo <= piece.upper <= c.hi:
                    msg = f"Piece {piece} is not canonical over {c}"
                    raise InputError(msg)
            elif not (c.lo <= piece.lower < piece.upper <= c.hi):
                msg = f"Piece {piece} is not canonical over {c}"
                raise InputError(msg)
            if previous is not None and not (
                piece.lower is not None and previous.upper < piece.lower
            ):
                msg = f"Pieces {previous} and {piece} overlap or touch"
                raise InputError(msg)
            previous = piece

    @classmethod
    def empty(cls, carrier: Carrier) -> OpenSet:
        return cls(carrier, ())

    @classmethod
    def full(cls, carrier: Carrier) -> OpenSet:
        return cls(carrier, (HalfOpenPiece(AT_LEFT_END, carrier.hi),))

    @classmethod
    def interval(cls, carrier: Carrier, lower: object, upper: object) -> OpenSet:
        """The open ``(lower, upper]`` clipped to the carrier."""
        return canonicalize([HalfOpenPiece(to_rational(lower), to_rational(upper))], carrier)

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def is_full(self) -> bool:
        return self == OpenSet.full(self.carrier)

    def endpoints(self) -> set[Fraction]:
        points: set[Fraction] = set()
        for piece in self.pieces:
            if piece.lower is not None:
                points.add(piece.lower)
            points.add(piece.upper)
        return points

    def __contains__(self, x: object) -> bool:
        return contains_point(self, to_rational(x))

    def __str__(self) -> str:
        if not self.pieces:
            return "∅"
        return " ∪ ".join(str(p) for p in self.pieces)


# ---------------------------------------------------------------------------
# Cell sweep
# ---------------------------------------------------------------------------


def _same_carrier(us: Sequence[OpenSet], carrier: Carrier | None = None) -> Carrier:
    carriers = {u.carrier for u in us}
    if carrier is not None:
        carriers.add(carrier)
    if len(carriers) > 1:
        msg = f"Opens over different carriers combined: {sorted(str(c) for c in carriers)}"
        raise CarrierMismatch(msg)
    if not carriers:
        msg = "A carrier is required when no opens are given"
        raise InputError(msg)
    return next(iter(carriers))


def elementary_cells(carrier: Carrier, breakpoints: Iterable[Fraction]) -> list[HalfOpenPiece]:
    """The singleton {lo} followed by (a, b] between consecutive sorted breakpoints."""
    points = sorted({carrier.lo, carrier.hi, *breakpoints})
    result = [HalfOpenPiece(AT_LEFT_END, carrier.lo)]
    result.extend(HalfOpenPiece(a, b) for a, b in zip(points, points[1:], strict=False))
    return result


def from_cell_membership(
    carrier: Carrier, cell_list: Sequence[HalfOpenPiece], flags: Sequence[bool]
) -> OpenSet:
    """Merge runs of member cells into the canonical piece list."""
    pieces: list[HalfOpenPiece] = []
    run_lower: Fraction | None = None
    run_upper: Fraction | None = None
    in_run = False
    for cell, member in zip(cell_list, flags, strict=True):
        if member:
            if not in_run:
                run_lower, in_run = cell.lower, True
            run_upper = cell.upper
        elif in_run:
            assert run_upper is not None  # noqa: S101
            pieces.append(HalfOpenPiece(run_lower, run_upper))
            in_run = False
    if in_run:
        assert run_upper is not None  # noqa: S101
        pieces.append(HalfOpenPiece(run_lower, run_upper))
    return OpenSet(carrier, tuple(pieces))


def contains_point(u: OpenSet, x: Fraction) -> bool:
    """Exact membership of ``x`` in ``u``.

    Raises:
        PointOutsideCarrier: if ``x`` is not in the carrier.
    """
    if not u.carrier.contains(x):
        msg = f"Point {x} lies outside the carrier {u.carrier}"
        raise PointOutsideCarrier(msg)
    return any(piece.contains(x, u.carrier) for piece in u.pieces)


def cells(us: Sequence[OpenSet], carrier: Carrier | None = None) -> list[HalfOpenPiece]:
    """Ordered partition of the carrier on which every open in ``us`` is constant.

    The first cell is always the singleton ``{lo}``; the rest are ``(a, b]``
    between consecutive breakpoints. ``carrier`` is required when ``us`` is empty.
    """
    c = _same_carrier(us, carrier)
    breakpoints: set[Fraction] = set()
    for u in us:
        breakpoints |= u.endpoints()
    return elementary_cells(c, breakpoints)


def cells_with_membership(
    us: Sequence[OpenSet], carrier: Carrier | None = None
) -> list[tuple[HalfOpenPiece, tuple[bool, ...]]]:
    """Each cell paired with its membership vector across ``us``."""
    c = _same_carrier(us, carrier)
    return [
        (cell, tuple(contains_point(u, cell.representative) for u in us))
        for cell in cells(us, c)
    ]


def canonicalize(raw: Iterable[HalfOpenPiece], carrier: Carrier) -> OpenSet:
    """Clip raw pieces to the carrier and fuse overlapping or adjacent ones.

    A raw ``(q, u]`` with ``q < carrier.lo`` becomes a left-end piece; pieces
    entirely outside the carrier vanish.

    Raises:
        MalformedInterval: if a raw piece has ``lower >= upper``, or a left-end
            piece ends before the carrier starts.
    """
    clipped: list[HalfOpenPiece] = []
    for piece in raw:
        upper = to_rational(piece.upper)
        if piece.lower is None:
            if upper < carrier.lo:
                msg = f"Left-end piece ends at {upper}, before the carrier {carrier}"
                raise MalformedInterval(msg)
            clipped.append(HalfOpenPiece(AT_LEFT_END, min(upper, carrier.hi)))
            continue
        lower = to_rational(piece.lower)
        if lower >= upper:
            msg = f"Malformed half-open interval ({lower}, {upper}]"
            raise MalformedInterval(msg)
        if upper < carrier.lo or lower >= carrier.hi:
            continue
        clipped_upper = min(upper, carrier.hi)
        if lower < carrier.lo:
            clipped.append(HalfOpenPiece(AT_LEFT_END, clipped_upper))
        else:
            clipped.append(HalfOpenPiece(lower, clipped_upper))

    breakpoints: set[Fraction] = set()
    for piece in clipped:
        if piece.lower is not None:
            breakpoints.add(piece.lower)
        breakpoints.add(piece.upper)
    cell_list = elementary_cells(carrier, breakpoints)
    flags = [
        any(piece.contains(cell.representative, carrier) for piece in clipped)
        for cell in cell_list
    ]
    return from_cell_membership(carrier, cell_list, flags)


def union(u: OpenSet, v: OpenSet) -> OpenSet:
    """Set union; Ω₀ is closed under it."""
    c = _same_carrier((u, v))
    cell_list = cells((u, v))
    flags = [contains_point(u, cl.representative) or contains_point(v, cl.representative)
             for cl in cell_list]
    return from_cell_membership(c, cell_list, flags)


def intersect(u: OpenSet, v: OpenSet) -> OpenSet:
    """Set intersection; Ω₀ is closed under it."""
    c = _same_carrier((u, v))
    cell_list = cells((u, v))
    flags = [contains_point(u, cl.representative) and contains_point(v, cl.representative)
             for cl in cell_list]
    return from_cell_membership(c, cell_list, flags)


def union_all(us: Iterable[OpenSet], carrier: Carrier) -> OpenSet:
    result = OpenSet.empty(carrier)
    for u in us:
        result = union(result, u)
    return result


def intersect_all(us: Iterable[OpenSet], carrier: Carrier) -> OpenSet:
    result = OpenSet.full(carrier)
    for u in us:
        result = intersect(result, u)
    return result


def is_subset(u: OpenSet, v: OpenSet) -> bool:
    """Point-set inclusion u ⊆ v."""
    _same_carrier((u, v))
    return all(
        contains_point(v, cl.representative)
        for cl in cells((u, v))
        if contains_point(u, cl.representative)
    )
