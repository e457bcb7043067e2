"""Step functions: finite consistent joins of single-step functions ``b·χ_W``.

One :class:`StepFn` value stands for both the step function on the carrier X
and the induced one on the spectral compactification; the map between the
two is the identity on this representation. The two readings are compared
by running independent procedures for the order and for the way-below
relation and checking that they agree.

Every procedure here reduces to finitely many cells: a step function is
constant on each cell of the joint decomposition of its opens.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import (
    CarrierMismatch,
    DimensionMismatch,
    EnumerationCapExceeded,
    InconsistentJoin,
    InputError,
    NotWayBelow,
    PointOutsideCarrier,
)
from spectral_domains.interval_domain import (
    Box,
    box_inflate,
    box_join,
    box_leq,
    box_meet,
    box_midpoint,
    box_way_below,
)
from spectral_domains.lattice_duality import (
    DEFAULT_LATTICE_CAP,
    generate_lattice,
    prime_filters,
)
from spectral_domains.open_ring import (
    Carrier,
    HalfOpenPiece,
    OpenSet,
    cells,
    contains_point,
    elementary_cells,
    from_cell_membership,
    intersect_all,
    is_subset,
    union,
)

__all__ = [
    "DEFAULT_SUBSET_CAP",
    "Component",
    "PreimageStrategy",
    "StepFn",
    "WayBelowStrategy",
    "basis_approximation",
    "evaluate",
    "find_order_violation",
    "find_way_below_violation",
    "interpolate",
    "joint_cells",
    "make_stepfn",
    "order_cells",
    "order_primefilters",
    "preimage_way_above",
    "values_on",
    "way_below",
]

logger = logging.getLogger(__name__)

DEFAULT_SUBSET_CAP = 20


class PreimageStrategy(enum.Enum):
    """How :func:`preimage_way_above` computes ``{x | b ≪ g(x)}``."""

    FORMULA = "formula"  # union over consistent index subsets
    CELLS = "cells"  # pointwise test on joint cells


class WayBelowStrategy(enum.Enum):
    """Which preimage route :func:`way_below` takes."""

    SPECTRAL = "spectral"
    ABS_BASIS = "absbasis"


_PREIMAGE_FOR = {
    WayBelowStrategy.SPECTRAL: PreimageStrategy.FORMULA,
    WayBelowStrategy.ABS_BASIS: PreimageStrategy.CELLS,
}


@dataclass(frozen=True, slots=True)
class Component:
    """A single-step function ``box·χ_region``."""

    region: OpenSet
    box: Box

    def __str__(self) -> str:
        return f"{self.box}·χ{{{self.region}}}"


@dataclass(frozen=True, slots=True)
class StepFn:
    """``⋁ b_i·χ_{W_i}`` over a carrier, with values in IR^dim.

    Construction checks that every component shares the carrier and the
    dimension, and that on every cell the active boxes have a join.

    Raises:
        InconsistentJoin: with the offending cell as ``witness``.
        CarrierMismatch: if a component's open lives on another carrier.
        DimensionMismatch: if a component's box has another dimension.
    """

    carrier: Carrier
    dim: int
    components: tuple[Component, ...] = ()

    def __post_init__(self) -> None:
        for i, comp in enumerate(self.components):
            if comp.region.carrier != self.carrier:
                msg = f"Component {i} lives on {comp.region.carrier}, expected {self.carrier}"
                raise CarrierMismatch(msg)
            if comp.box.dim != self.dim:
                msg = f"Component {i} has dimension {comp.box.dim}, expected {self.dim}"
                raise DimensionMismatch(msg)
        for cell in cells(self.regions, self.carrier):
            x = cell.representative
            active = [c.box for c in self.components if contains_point(c.region, x)]
            try:
                box_join(active, dim=self.dim)
            except InconsistentJoin as exc:
                msg = f"Components have no join on cell {cell}"
                raise InconsistentJoin(msg, witness=cell) from exc

    @classmethod
    def bottom(cls, carrier: Carrier, dim: int) -> StepFn:
        """The constant-bottom step function (no components)."""
        return cls(carrier, dim, ())

    @property
    def regions(self) -> list[OpenSet]:
        return [c.region for c in self.components]

    @property
    def boxes(self) -> list[Box]:
        return [c.box for c in self.components]

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        if not self.components:
            return "⊥"
        return " ⊔ ".join(str(c) for c in self.components)


def make_stepfn(
    components: Iterable[Component | tuple[OpenSet, Box]], carrier: Carrier, dim: int
) -> StepFn:
    """Build a checked :class:`StepFn` from ``(open, box)`` pairs."""
    comps = tuple(c if isinstance(c, Component) else Component(*c) for c in components)
    return StepFn(carrier, dim, comps)


def _check_compatible(f: StepFn, g: StepFn) -> None:
    if f.carrier != g.carrier:
        msg = f"Step functions over different carriers: {f.carrier} and {g.carrier}"
        raise CarrierMismatch(msg)
    if f.dim != g.dim:
        msg = f"Step functions of different dimensions: {f.dim} and {g.dim}"
        raise DimensionMismatch(msg)


def joint_cells(*fs: StepFn) -> list[HalfOpenPiece]:
    """Cells of the common refinement of every open of every argument."""
    carrier = fs[0].carrier
    return cells([w for f in fs for w in f.regions], carrier)


def evaluate(f: StepFn, x: Fraction) -> Box:
    """The value ``f(x)``: join of the boxes whose open contains ``x``.

    Raises:
        PointOutsideCarrier: if ``x`` is outside the carrier.
    """
    if not f.carrier.contains(x):
        msg = f"Point {x} lies outside the carrier {f.carrier}"
        raise PointOutsideCarrier(msg)
    active = [c.box for c in f.components if contains_point(c.region, x)]
    return box_join(active, dim=f.dim)


def values_on(f: StepFn, w: OpenSet) -> list[Box]:
    """The finitely many values of ``f`` on the open ``w``, one per joint cell inside it."""
    return [
        evaluate(f, cell.representative)
        for cell in cells([*f.regions, w], f.carrier)
        if contains_point(w, cell.representative)
    ]


# ---------------------------------------------------------------------------
# Order
# ---------------------------------------------------------------------------


def find_order_violation(f: StepFn, g: StepFn) -> HalfOpenPiece | None:
    """First joint cell on which ``f ⊑ g`` fails, or ``None``."""
    _check_compatible(f, g)
    for cell in joint_cells(f, g):
        x = cell.representative
        if not box_leq(evaluate(f, x), evaluate(g, x)):
            return cell
    return None


def order_cells(f: StepFn, g: StepFn) -> bool:
    """Pointwise ``f ⊑ g`` on X, decided on the joint cells."""
    return find_order_violation(f, g) is None


def order_primefilters(f: StepFn, g: StepFn, *, cap: int = DEFAULT_LATTICE_CAP) -> bool:
    """``f ⊑ g`` as step functions on the points of the generated finite sublattice.

    For every prime filter F of the sublattice generated by the opens of both
    functions, the join of f's boxes on opens in F must lie below the join of
    g's boxes on opens in F.

    Raises:
        EnumerationCapExceeded: if the sublattice exceeds ``cap`` elements.
    """
    _check_compatible(f, g)
    lattice = generate_lattice([*f.regions, *g.regions], f.carrier, cap=cap)
    f_index = [lattice.index_of(w) for w in f.regions]
    g_index = [lattice.index_of(w) for w in g.regions]
    for point in prime_filters(lattice):
        lhs = box_join((b for b, i in zip(f.boxes, f_index, strict=True) if i in point), dim=f.dim)
        rhs = box_join((b for b, i in zip(g.boxes, g_index, strict=True) if i in point), dim=g.dim)
        if not box_leq(lhs, rhs):
            return False
    return True


# ---------------------------------------------------------------------------
# Way-below
# ---------------------------------------------------------------------------


def _preimage_formula(g: StepFn, b: Box, cap: int) -> OpenSet:
    if len(g) > cap:
        msg = f"Formula preimage refuses {len(g)} > {cap} components"
        raise EnumerationCapExceeded(msg, cap)
    if b.is_bottom:
        return OpenSet.full(g.carrier)
    result = OpenSet.empty(g.carrier)
    tried = 0
    for r in range(1, len(g) + 1):
        for subset in itertools.combinations(g.components, r):
            tried += 1
            common = intersect_all((c.region for c in subset), g.carrier)
            if common.is_empty or is_subset(common, result):
                continue
            try:
                joined = box_join((c.box for c in subset), dim=g.dim)
            except InconsistentJoin:
                continue
            if box_way_below(b, joined):
                result = union(result, common)
    logger.debug("Formula preimage: %d subsets over %d components", tried, len(g))
    return result


def _preimage_cells(g: StepFn, b: Box) -> OpenSet:
    cell_list = joint_cells(g)
    flags = [box_way_below(b, evaluate(g, cell.representative)) for cell in cell_list]
    return from_cell_membership(g.carrier, cell_list, flags)


def preimage_way_above(
    g: StepFn,
    b: Box,
    *,
    strategy: PreimageStrategy = PreimageStrategy.FORMULA,
    cap: int = DEFAULT_SUBSET_CAP,
) -> OpenSet:
    """The open ``{x ∈ X | b ≪ g(x)}`` of Ω₀.

    ``FORMULA`` unions ``⋂_{j∈S} W_j`` over index subsets S whose boxes have a
    join way above ``b`` (exponential in the number of components, refused
    beyond ``cap``). ``CELLS`` tests ``b ≪ g`` on each joint cell.

    Raises:
        DimensionMismatch: if ``b`` and ``g`` differ in dimension.
        EnumerationCapExceeded: for ``FORMULA`` on more than ``cap`` components.
    """
    if b.dim != g.dim:
        msg = f"Box of dimension {b.dim} against step function of dimension {g.dim}"
        raise DimensionMismatch(msg)
    if strategy is PreimageStrategy.FORMULA:
        return _preimage_formula(g, b, cap)
    return _preimage_cells(g, b)


def find_way_below_violation(
    f: StepFn,
    g: StepFn,
    *,
    strategy: WayBelowStrategy = WayBelowStrategy.SPECTRAL,
    cap: int = DEFAULT_SUBSET_CAP,
) -> int | None:
    """Index of the first component ``(W_i, b_i)`` of ``f`` with ``W_i ⊄ g⁻¹(↟b_i)``."""
    _check_compatible(f, g)
    preimage_strategy = _PREIMAGE_FOR[strategy]
    for i, comp in enumerate(f.components):
        above = preimage_way_above(g, comp.box, strategy=preimage_strategy, cap=cap)
        if not is_subset(comp.region, above):
            return i
    return None


def way_below(
    f: StepFn,
    g: StepFn,
    *,
    strategy: WayBelowStrategy = WayBelowStrategy.SPECTRAL,
    cap: int = DEFAULT_SUBSET_CAP,
) -> bool:
    """``f ≺ g``: every component's open lies inside g's preimage of ``↟b_i``."""
    return find_way_below_violation(f, g, strategy=strategy, cap=cap) is None


def _interpolant(b: Box, v: Box) -> Box:
    if b.is_bottom:
        return v if v.is_bottom else box_inflate(v, Fraction(1))
    return box_midpoint(b, v)


def interpolate(
    family: Sequence[StepFn], g: StepFn, *, cap: int = DEFAULT_SUBSET_CAP
) -> StepFn:
    """A step function y with ``f ≺ y ≺ g`` for every f in ``family``.

    On each joint cell inside a component's open, the component's box b and
    the value v of g there give the halfway box between b and v (or v
    widened by 1 when b is bottom). Components with equal boxes are merged.

    Raises:
        NotWayBelow: if some f in ``family`` is not ≺ g; ``index`` is its position.
    """
    for idx, f in enumerate(family):
        if find_way_below_violation(f, g, cap=cap) is not None:
            msg = f"Step function {idx} of the family is not way below the target"
            raise NotWayBelow(msg, index=idx)
    cell_list = joint_cells(g, *family)
    merged: dict[Box, OpenSet] = {}
    for f in family:
        for comp in f.components:
            for cell in cell_list:
                x = cell.representative
                if not contains_point(comp.region, x):
                    continue
                box = _interpolant(comp.box, evaluate(g, x))
                piece = OpenSet(g.carrier, (cell,))
                merged[box] = union(merged[box], piece) if box in merged else piece
    return make_stepfn(merged.items(), g.carrier, g.dim)


# ---------------------------------------------------------------------------
# Approximation by grid basis elements
# ---------------------------------------------------------------------------


def _grid_below(q: Fraction, denominator: int) -> Fraction:
    """Largest multiple of 1/denominator strictly below ``q``."""
    return Fraction(math.ceil(q * denominator) - 1, denominator)


def _grid_above(q: Fraction, denominator: int) -> Fraction:
    """Smallest multiple of 1/denominator strictly above ``q``."""
    return Fraction(math.floor(q * denominator) + 1, denominator)


def basis_approximation(g: StepFn, grid_denominator: int) -> StepFn:
    """Join of every grid basis element ``b·χ_W`` with ``W ⊆ g⁻¹(↟b)``.

    ``W`` ranges over the grid cells of the carrier at spacing
    1/grid_denominator and ``b`` over boxes with grid endpoints. On a grid
    cell the valid boxes are exactly those strictly containing the hull of
    g's values there, so their join is the tightest such grid box.

    Raises:
        InputError: if ``grid_denominator`` is not positive.
    """
    if grid_denominator < 1:
        msg = f"Grid denominator must be positive, got {grid_denominator}"
        raise InputError(msg)
    c = g.carrier
    grid = {
        Fraction(k, grid_denominator)
        for k in range(
            math.floor(c.lo * grid_denominator), math.ceil(c.hi * grid_denominator) + 1
        )
        if c.lo < Fraction(k, grid_denominator) < c.hi
    }
    merged: dict[Box, OpenSet] = {}
    for cell in elementary_cells(c, grid):
        w = OpenSet(c, (cell,))
        hull = box_meet(values_on(g, w))
        if hull.bounds is None:
            continue
        box = Box(
            g.dim,
            tuple(
                (_grid_below(lo, grid_denominator), _grid_above(hi, grid_denominator))
                for lo, hi in hull.bounds
            ),
        )
        merged[box] = union(merged[box], w) if box in merged else w
    return make_stepfn(merged.items(), c, g.dim)
