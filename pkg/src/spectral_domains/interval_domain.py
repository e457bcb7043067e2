"""Exact rational arithmetic and the interval domain IR^n with bottom.

Boxes are closed rational boxes ordered by reverse inclusion; the bottom
element stands for the whole of R^n. Every operation here is exact and
decidable, so nothing in the package ever rounds.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import (
    DimensionMismatch,
    EmptyMeet,
    InconsistentJoin,
    InputError,
)

__all__ = [
    "INFINITE",
    "Box",
    "Rational",
    "box_contains_point",
    "box_hull",
    "box_inflate",
    "box_intersection",
    "box_join",
    "box_leq",
    "box_meet",
    "box_midpoint",
    "box_way_below",
    "box_width",
    "to_rational",
]

Rational = Fraction

# Width of the bottom box.
INFINITE = math.inf

type Bounds = tuple[tuple[Fraction, Fraction], ...]


def to_rational(value: object) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ``Fraction``, ``int`` and strings such as ``"3/4"``, ``"-2"`` or
    ``"0.125"``. Floats and booleans are rejected: a float already carries a
    rounding error, and the whole package is exact.

    Raises:
        InputError: if the value is not an exact rational.
    """
    if isinstance(value, bool) or isinstance(value, float):
        msg = f"Expected an exact rational, got {type(value).__name__} {value!r}"
        raise InputError(msg)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            msg = f"Not a rational literal: {value!r}"
            raise InputError(msg) from exc
    msg = f"Expected an exact rational, got {type(value).__name__}"
    raise InputError(msg)


@dataclass(frozen=True, slots=True)
class Box:
    """An element of IR^n with bottom: ``bounds is None`` denotes bottom (R^n)."""

    dim: int
    bounds: Bounds | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            msg = f"Box dimension must be >= 1, got {self.dim}"
            raise InputError(msg)
        if self.bounds is None:
            return
        if len(self.bounds) != self.dim:
            msg = f"Box declares dim {self.dim} but has {len(self.bounds)} sides"
            raise DimensionMismatch(msg)
        coerced = tuple((to_rational(lo), to_rational(hi)) for lo, hi in self.bounds)
        for i, (lo, hi) in enumerate(coerced):
            if lo > hi:
                msg = f"Box side {i} is empty: [{lo}, {hi}]"
                raise InputError(msg)
        object.__setattr__(self, "bounds", coerced)

    @classmethod
    def bottom(cls, dim: int) -> Box:
        return cls(dim, None)

    @classmethod
    def of(cls, *sides: tuple[object, object]) -> Box:
        """Build a non-bottom box from ``(lo, hi)`` pairs, e.g. ``Box.of((0, 2), ("1/2", 1))``."""
        return cls(len(sides), tuple((to_rational(lo), to_rational(hi)) for lo, hi in sides))

    @classmethod
    def point(cls, *coords: object) -> Box:
        """The degenerate box at a single point."""
        return cls.of(*((c, c) for c in coords))

    @property
    def is_bottom(self) -> bool:
        return self.bounds is None

    @property
    def is_degenerate(self) -> bool:
        return self.bounds is not None and all(lo == hi for lo, hi in self.bounds)

    def side(self, i: int) -> tuple[Fraction, Fraction]:
        if self.bounds is None:
            msg = "The bottom box has no sides"
            raise InputError(msg)
        return self.bounds[i]

    def __str__(self) -> str:
        if self.bounds is None:
            return "⊥"
        return "×".join(f"[{lo},{hi}]" for lo, hi in self.bounds)


def _check_dims(boxes: Sequence[Box]) -> int | None:
    dims = {b.dim for b in boxes}
    if len(dims) > 1:
        msg = f"Boxes of different dimensions combined: {sorted(dims)}"
        raise DimensionMismatch(msg)
    return next(iter(dims), None)


def box_leq(x: Box, y: Box) -> bool:
    """x ⊑ y: x is bottom, or y's box is contained in x's box."""
    _check_dims((x, y))
    if x.bounds is None:
        return True
    if y.bounds is None:
        return False
    return all(
        xlo <= ylo and yhi <= xhi
        for (xlo, xhi), (ylo, yhi) in zip(x.bounds, y.bounds, strict=True)
    )


def box_way_below(x: Box, y: Box) -> bool:
    """x ≪ y: x is bottom, or y lies strictly inside x on every side."""
    _check_dims((x, y))
    if x.bounds is None:
        return True
    if y.bounds is None:
        return False
    return all(
        xlo < ylo and yhi < xhi
        for (xlo, xhi), (ylo, yhi) in zip(x.bounds, y.bounds, strict=True)
    )


def box_join(xs: Iterable[Box], *, dim: int | None = None) -> Box:
    """Least upper bound: componentwise intersection of the non-bottom members.

    The empty join is bottom; ``dim`` supplies its dimension when ``xs`` is empty
    (defaults to 1).

    Raises:
        InconsistentJoin: if the members have no common upper bound (their
            boxes do not intersect). ``witness`` is the first empty side index.
        DimensionMismatch: if members differ in dimension.
    """
    boxes = list(xs)
    n = _check_dims(boxes)
    if n is None:
        n = dim or 1
    elif dim is not None and dim != n:
        msg = f"Join requested in dimension {dim} over boxes of dimension {n}"
        raise DimensionMismatch(msg)
    proper = [b.bounds for b in boxes if b.bounds is not None]
    if not proper:
        return Box.bottom(n)
    sides: list[tuple[Fraction, Fraction]] = []
    for i in range(n):
        lo = max(bounds[i][0] for bounds in proper)
        hi = min(bounds[i][1] for bounds in proper)
        if lo > hi:
            msg = f"Boxes have no join: side {i} would be [{lo}, {hi}]"
            raise InconsistentJoin(msg, witness=i)
        sides.append((lo, hi))
    return Box(n, tuple(sides))


def box_meet(xs: Iterable[Box]) -> Box:
    """Greatest lower bound of a non-empty set: bottom if any member is, else the hull.

    Raises:
        EmptyMeet: on empty input.
    """
    boxes = list(xs)
    if not boxes:
        msg = "The meet of the empty set does not exist in IR^n"
        raise EmptyMeet(msg)
    n = _check_dims(boxes)
    assert n is not None  # noqa: S101
    proper = [b.bounds for b in boxes if b.bounds is not None]
    if len(proper) < len(boxes):
        return Box.bottom(n)
    sides = tuple(
        (min(bounds[i][0] for bounds in proper), max(bounds[i][1] for bounds in proper))
        for i in range(n)
    )
    return Box(n, sides)


def box_width(x: Box) -> Fraction | float:
    """Largest side length; ``INFINITE`` for bottom."""
    if x.bounds is None:
        return INFINITE
    return max(hi - lo for lo, hi in x.bounds)


def box_hull(x: Box, y: Box) -> Box:
    """Smallest box containing both (the binary meet)."""
    return box_meet((x, y))


def box_intersection(x: Box, y: Box) -> Box:
    """Set intersection of two boxes (the binary join)."""
    return box_join((x, y))


def box_inflate(x: Box, r: Fraction) -> Box:
    """Widen every side of a non-bottom box by ``r`` on both ends."""
    if x.bounds is None:
        return x
    return Box(x.dim, tuple((lo - r, hi + r) for lo, hi in x.bounds))


def box_midpoint(x: Box, y: Box) -> Box:
    """Box whose endpoints lie halfway between those of ``x`` and ``y``.

    When x ≪ y (both non-bottom) the result m satisfies x ≪ m ≪ y.
    """
    _check_dims((x, y))
    if x.bounds is None or y.bounds is None:
        msg = "Midpoint boxes need two non-bottom boxes"
        raise InputError(msg)
    return Box(
        x.dim,
        tuple(
            ((xlo + ylo) / 2, (xhi + yhi) / 2)
            for (xlo, xhi), (ylo, yhi) in zip(x.bounds, y.bounds, strict=True)
        ),
    )


def box_contains_point(x: Box, coords: Sequence[Fraction]) -> bool:
    """True iff the point lies in the box (bottom contains everything)."""
    if len(coords) != x.dim:
        msg = f"Point of dimension {len(coords)} tested against box of dimension {x.dim}"
        raise DimensionMismatch(msg)
    if x.bounds is None:
        return True
    return all(lo <= c <= hi for (lo, hi), c in zip(x.bounds, coords, strict=True))
