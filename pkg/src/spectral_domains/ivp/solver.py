"""Validated Euler enclosures for y′ = F(y), y(t0) = y0 on [t0, T].

An enclosure is piecewise constant on ``(q_j, q_{j+1}]`` with separate node
boxes at the partition points, which makes it a step function on the carrier
``[t0, T]``. One application of Φ sweeps the partition left to right:

* ``B_j`` is an a-priori bound: every trajectory from ``node[j]`` stays in it
  for a whole step;
* the refined box is ``B_j``, or its meet (the hull) with the current piece
  value, which is ``B_j`` again once the piece lies inside it;
* ``piece[j] = node[j] + [0, Δ]·F(refined)`` and
  ``node[j+1] = node[j] + Δ·F(refined)``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from spectral_domains.exceptions import (
    DimensionMismatch,
    DivergenceBound,
    InputError,
    NoConvergence,
)
from spectral_domains.interval_domain import (
    INFINITE,
    Box,
    box_hull,
    box_inflate,
    box_leq,
    box_meet,
    box_width,
)
from spectral_domains.ivp.expr import (
    FieldExpr,
    eval_field,
    format_field,
    interval_add,
    interval_scale,
    max_var_index,
)
from spectral_domains.ivp.parser import parse_field
from spectral_domains.open_ring import AT_LEFT_END, Carrier, HalfOpenPiece, OpenSet
from spectral_domains.step_functions import StepFn, evaluate, make_stepfn

__all__ = [
    "DEFAULT_APRIORI",
    "AprioriParams",
    "Enclosure",
    "IvpProblem",
    "apriori_bound",
    "convergence_levels",
    "csv_header",
    "enclosure_contains",
    "enclosure_rows",
    "enclosure_to_stepfn",
    "enclosure_value",
    "enclosure_width",
    "initial_enclosure",
    "phi_apply",
    "solve_fixpoint",
    "uniform_partition",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class AprioriParams:
    """Knobs of the a-priori bound search."""

    max_iterations: int = 60
    inflation: Fraction = Fraction(1, 10)  # relative to the current width
    epsilon: Fraction = Fraction(1, 1024)  # absolute, per side
    magnitude_limit: Fraction = Fraction(10**12)


DEFAULT_APRIORI = AprioriParams()


@dataclass(frozen=True, slots=True)
class IvpProblem:
    """y′ = field(y), y(t0) = y0 on [t0, t_end]."""

    n: int
    t0: Fraction
    t_end: Fraction
    y0: Box
    field: tuple[FieldExpr, ...]

    def __post_init__(self) -> None:
        if not self.t0 < self.t_end:
            msg = f"Time interval needs t0 < T, got [{self.t0}, {self.t_end}]"
            raise InputError(msg)
        if self.y0.is_bottom:
            msg = "The initial value must be a proper box"
            raise InputError(msg)
        if self.y0.dim != self.n or len(self.field) != self.n:
            msg = (
                f"Problem of dimension {self.n} has y0 of dimension {self.y0.dim} "
                f"and {len(self.field)} field expressions"
            )
            raise DimensionMismatch(msg)
        if any(max_var_index(e) >= self.n for e in self.field):
            msg = f"Field refers to a variable beyond y{self.n}"
            raise DimensionMismatch(msg)

    @classmethod
    def parse(
        cls, n: int, t0: Fraction, t_end: Fraction, y0: Box, field_text: str
    ) -> IvpProblem:
        return cls(n, t0, t_end, y0, tuple(parse_field(field_text, n)))

    @property
    def carrier(self) -> Carrier:
        return Carrier(self.t0, self.t_end)

    @property
    def field_text(self) -> str:
        return format_field(self.field)


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Node boxes at ``q_0 < … < q_k`` and piece boxes on ``(q_j, q_{j+1}]``."""

    partition: tuple[Fraction, ...]
    piece_boxes: tuple[Box, ...]
    node_boxes: tuple[Box, ...]

    def __post_init__(self) -> None:
        k = len(self.partition) - 1
        if k < 1 or len(self.piece_boxes) != k or len(self.node_boxes) != k + 1:
            msg = (
                f"Enclosure over {len(self.partition)} partition points has "
                f"{len(self.piece_boxes)} pieces and {len(self.node_boxes)} nodes"
            )
            raise InputError(msg)
        if any(a >= b for a, b in zip(self.partition, self.partition[1:], strict=False)):
            msg = "Partition points must be strictly increasing"
            raise InputError(msg)

    @property
    def k(self) -> int:
        return len(self.piece_boxes)

    @property
    def dim(self) -> int:
        return self.node_boxes[0].dim


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def _step_hull(node: Box, delta: Fraction, slope: Box) -> Box:
    """``node + [0, Δ]·slope``."""
    assert node.bounds is not None and slope.bounds is not None  # noqa: S101
    factor = (Fraction(0), delta)
    return Box(
        node.dim,
        tuple(
            interval_add(side, interval_scale(factor, s))
            for side, s in zip(node.bounds, slope.bounds, strict=True)
        ),
    )


def _step_end(node: Box, delta: Fraction, slope: Box) -> Box:
    """``node + Δ·slope``."""
    assert node.bounds is not None and slope.bounds is not None  # noqa: S101
    factor = (delta, delta)
    return Box(
        node.dim,
        tuple(
            interval_add(side, interval_scale(factor, s))
            for side, s in zip(node.bounds, slope.bounds, strict=True)
        ),
    )


def _magnitude(x: Box) -> Fraction:
    assert x.bounds is not None  # noqa: S101
    return max(max(abs(lo), abs(hi)) for lo, hi in x.bounds)


def apriori_bound(
    field: Sequence[FieldExpr],
    y: Box,
    delta: Fraction,
    params: AprioriParams = DEFAULT_APRIORI,
) -> Box:
    """A box B with ``y + [0, Δ]·F(B) ⊆ B``.

    Starts from ``B = y`` and, while the containment fails, replaces B by the
    hull of B and the candidate, widened by ``inflation`` times its width plus
    ``epsilon`` on every side.

    Raises:
        DivergenceBound: after ``max_iterations`` failed rounds, or once an
            endpoint exceeds ``magnitude_limit`` in absolute value.
        InputError: if ``delta`` is not positive.
    """
    if delta <= 0:
        msg = f"Step size must be positive, got {delta}"
        raise InputError(msg)
    bound = y
    for iteration in range(1, params.max_iterations + 1):
        candidate = _step_hull(y, delta, eval_field(field, bound))
        if box_leq(bound, candidate):
            logger.debug("A-priori bound after %d iteration(s): %s", iteration, bound)
            return bound
        if _magnitude(candidate) > params.magnitude_limit:
            msg = f"A-priori bound exceeds magnitude {params.magnitude_limit} for step {delta}"
            raise DivergenceBound(msg)
        hull = box_hull(bound, candidate)
        bound = box_inflate(hull, params.inflation * box_width(hull) + params.epsilon)
    msg = f"No a-priori bound within {params.max_iterations} iterations for step {delta}"
    raise DivergenceBound(msg)


def uniform_partition(t0: Fraction, t_end: Fraction, k: int) -> tuple[Fraction, ...]:
    if k < 1:
        msg = f"Piece count must be at least 1, got {k}"
        raise InputError(msg)
    return tuple(t0 + j * (t_end - t0) / k for j in range(k + 1))


def initial_enclosure(problem: IvpProblem, k: int) -> Enclosure:
    """``node[0] = y0``; every other node and every piece is bottom."""
    bottom = Box.bottom(problem.n)
    return Enclosure(
        partition=uniform_partition(problem.t0, problem.t_end, k),
        piece_boxes=(bottom,) * k,
        node_boxes=(problem.y0, *(bottom,) * k),
    )


# ---------------------------------------------------------------------------
# Φ and its fixpoint
# ---------------------------------------------------------------------------


def phi_apply(
    problem: IvpProblem, enclosure: Enclosure, params: AprioriParams = DEFAULT_APRIORI
) -> Enclosure:
    """One left-to-right sweep of Φ over the partition of ``enclosure``.

    Raises:
        DivergenceBound: with ``piece`` set to the offending partition index.
    """
    nodes = [problem.y0]
    pieces: list[Box] = []
    q = enclosure.partition
    bottom = Box.bottom(problem.n)
    for j in range(enclosure.k):
        node = nodes[j]
        if node.is_bottom:
            pieces.append(bottom)
            nodes.append(bottom)
            continue
        delta = q[j + 1] - q[j]
        try:
            bound = apriori_bound(problem.field, node, delta, params)
        except DivergenceBound as exc:
            raise DivergenceBound(f"{exc} (piece {j})", piece=j) from exc
        current = enclosure.piece_boxes[j]
        refined = bound if current.is_bottom else box_meet((bound, current))
        slope = eval_field(problem.field, refined)
        pieces.append(_step_hull(node, delta, slope))
        nodes.append(_step_end(node, delta, slope))
    return replace(enclosure, piece_boxes=tuple(pieces), node_boxes=tuple(nodes))


def solve_fixpoint(
    problem: IvpProblem, k: int, params: AprioriParams = DEFAULT_APRIORI
) -> tuple[Enclosure, int]:
    """Iterate Φ from :func:`initial_enclosure` until two iterates coincide.

    Returns the fixpoint and the number of Φ applications.

    Raises:
        NoConvergence: if ``k + 2`` applications do not reach a fixpoint.
        DivergenceBound: propagated from the a-priori bound search.
    """
    current = initial_enclosure(problem, k)
    cap = k + 2
    for iteration in range(1, cap + 1):
        following = phi_apply(problem, current, params)
        if following == current:
            logger.info("Fixpoint reached after %d iteration(s) with %d pieces", iteration, k)
            return current, iteration
        current = following
    msg = f"No fixpoint after {cap} iterations with {k} pieces"
    raise NoConvergence(msg, iterations=cap)


# ---------------------------------------------------------------------------
# Reading enclosures
# ---------------------------------------------------------------------------


def enclosure_width(enclosure: Enclosure) -> Fraction | float:
    """Largest piece width; ``INFINITE`` while some piece is still bottom."""
    widths = [box_width(b) for b in enclosure.piece_boxes]
    return INFINITE if INFINITE in widths else max(widths)


def enclosure_to_stepfn(enclosure: Enclosure) -> StepFn:
    """``{t0} ↦ node[0]`` plus ``(q_j, q_{j+1}] ↦ piece[j]`` as a step function."""
    q = enclosure.partition
    carrier = Carrier(q[0], q[-1])
    components: list[tuple[OpenSet, Box]] = [
        (OpenSet(carrier, (HalfOpenPiece(AT_LEFT_END, q[0]),)), enclosure.node_boxes[0])
    ]
    components.extend(
        (OpenSet(carrier, (HalfOpenPiece(q[j], q[j + 1]),)), box)
        for j, box in enumerate(enclosure.piece_boxes)
    )
    return make_stepfn(components, carrier, enclosure.dim)


def enclosure_value(enclosure: Enclosure, t: Fraction) -> Box:
    """``E(t)``.

    Raises:
        PointOutsideCarrier: if ``t`` is outside ``[t0, T]``.
    """
    return evaluate(enclosure_to_stepfn(enclosure), t)


def enclosure_contains(enclosure: Enclosure, t: Fraction, v: Box) -> bool:
    """Whether ``v`` (typically a point or a tight oracle box) lies inside ``E(t)``."""
    return box_leq(enclosure_value(enclosure, t), v)


def enclosure_rows(enclosure: Enclosure) -> list[list[str]]:
    """CSV rows ``q_lo, q_hi, lo_1, hi_1, …, node`` with nodes and pieces interleaved."""
    rows: list[list[str]] = []

    def sides(box: Box) -> list[str]:
        if box.bounds is None:
            return ["-inf", "inf"] * box.dim
        return [str(v) for side in box.bounds for v in side]

    q = enclosure.partition
    for j in range(enclosure.k + 1):
        rows.append([str(q[j]), str(q[j]), *sides(enclosure.node_boxes[j]), "1"])
        if j < enclosure.k:
            rows.append([str(q[j]), str(q[j + 1]), *sides(enclosure.piece_boxes[j]), "0"])
    return rows


def csv_header(dim: int) -> list[str]:
    return ["q_lo", "q_hi", *(f"{e}{i + 1}" for i in range(dim) for e in ("lo", "hi")), "node"]


def convergence_levels(
    problem: IvpProblem,
    levels: int,
    *,
    start: int = 4,
    params: AprioriParams = DEFAULT_APRIORI,
) -> list[tuple[int, Fraction | float, Fraction | float | None]]:
    """``(k, width, width / previous width)`` for ``k = start, 2·start, …``."""
    table: list[tuple[int, Fraction | float, Fraction | float | None]] = []
    previous: Fraction | float | None = None
    for level in range(levels):
        k = start * 2**level
        enclosure, _ = solve_fixpoint(problem, k, params)
        width = enclosure_width(enclosure)
        ratio = width / previous if previous else None
        table.append((k, width, ratio))
        previous = width
    return table
