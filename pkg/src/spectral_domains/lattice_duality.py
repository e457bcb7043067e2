"""Finite bounded distributive lattices, their prime filters and the hull-kernel space.

This is the desk-scale side of Stone duality: a finite distributive lattice
``L`` has a finite set of points ``pt(L)`` (prime filters), each element ``u``
names the open ``{p | u ∈ p}``, and the open-set lattice of ``pt(L)`` is
isomorphic to ``L`` again.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from spectral_domains.exceptions import EnumerationCapExceeded, InputError
from spectral_domains.open_ring import (
    Carrier,
    OpenSet,
    cells,
    cells_with_membership,
    contains_point,
    from_cell_membership,
    is_subset,
)

__all__ = [
    "DEFAULT_EXHAUSTIVE_CAP",
    "DEFAULT_LATTICE_CAP",
    "FinDistLattice",
    "HullKernelSpace",
    "PrimeFilter",
    "PrimeFilterStrategy",
    "RoundtripReport",
    "generate_lattice",
    "hull_kernel_space",
    "is_prime_filter",
    "lattice_from_leq",
    "point_trace",
    "prime_filters",
    "roundtrip_iso_check",
    "roundtrip_report",
    "venn_cell_count",
]

logger = logging.getLogger(__name__)

DEFAULT_LATTICE_CAP = 4096
DEFAULT_EXHAUSTIVE_CAP = 24

type Table = tuple[tuple[int, ...], ...]


class PrimeFilterStrategy(enum.Enum):
    """How :func:`prime_filters` finds the points of a lattice."""

    EXHAUSTIVE = "exhaustive"
    JOIN_IRREDUCIBLE = "join_irreducible"


@dataclass(frozen=True)
class FinDistLattice:
    """A finite bounded distributive lattice with explicit order and operation tables.

    Elements are indices ``0..size-1``; ``names`` and the optional OpenSet
    ``labels`` describe them.
    """

    names: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    meet_table: Table
    join_table: Table
    bottom: int
    top: int
    labels: tuple[OpenSet | None, ...] = ()
    _label_index: dict[OpenSet, int] = field(
        default_factory=dict, init=False, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if self.labels and len(self.labels) != len(self.names):
            msg = f"{len(self.labels)} labels given for {len(self.names)} elements"
            raise InputError(msg)
        index = {label: i for i, label in enumerate(self.labels) if label is not None}
        object.__setattr__(self, "_label_index", index)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def is_labeled(self) -> bool:
        return bool(self.labels) and all(label is not None for label in self.labels)

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def index_of(self, label: OpenSet) -> int:
        """Element labeled by ``label``.

        Raises:
            KeyError: if no element carries that label.
        """
        return self._label_index[label]

    def up(self, a: int) -> frozenset[int]:
        """The principal filter ↑a."""
        return frozenset(b for b in range(self.size) if self.leq[a][b])


@dataclass(frozen=True)
class PrimeFilter:
    """A point of a finite lattice: a proper prime filter, as a set of element indices."""

    members: frozenset[int]

    @property
    def sort_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __contains__(self, element: object) -> bool:
        return element in self.members


@dataclass(frozen=True)
class HullKernelSpace:
    """``pt(L)``; ``opens[u]`` holds the indices of the points containing ``u``."""

    points: tuple[PrimeFilter, ...]
    opens: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class RoundtripReport:
    """Outcome of comparing ``L`` with the open-set lattice of ``pt(L)``.

    ``witness`` is a pair of element indices breaking injectivity or order
    reflection, or ``None`` when the round trip is an isomorphism.
    """

    iso: bool
    points: int
    opens: int
    witness: tuple[int, int] | None = None


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _bound(candidates: list[int], leq: Sequence[Sequence[bool]], *, greatest: bool) -> int | None:
    for c in candidates:
        if all((leq[d][c] if greatest else leq[c][d]) for d in candidates):
            return c
    return None


def _check_labels(
    names: Sequence[str], rel: Sequence[Sequence[bool]], labels: Sequence[OpenSet | None]
) -> None:
    if len(labels) != len(names):
        msg = f"{len(labels)} labels given for {len(names)} elements"
        raise InputError(msg)
    labeled = [(i, u) for i, u in enumerate(labels) if u is not None]
    for (a, u), (b, v) in itertools.product(labeled, repeat=2):
        if rel[a][b] != is_subset(u, v):
            relation = "≤" if rel[a][b] else "≰"
            msg = f"Labels disagree with leq at {names[a]!r} {relation} {names[b]!r}"
            raise InputError(msg)


def lattice_from_leq(
    names: Sequence[str],
    leq: Sequence[Sequence[bool]],
    labels: Sequence[OpenSet | None] | None = None,
) -> FinDistLattice:
    """Build a lattice from a bare order relation, deriving meets and joins.

    Raises:
        InputError: if ``leq`` is not a partial order, lacks meets, joins or
            bounds, or the lattice is not distributive. Labels must order
            the same way: ``a ≤ b`` exactly when ``label[a] ⊆ label[b]``.
    """
    n = len(names)
    if n == 0:
        msg = "A lattice needs at least one element"
        raise InputError(msg)
    if len(leq) != n or any(len(row) != n for row in leq):
        msg = f"leq must be a {n}x{n} matrix"
        raise InputError(msg)
    rel = tuple(tuple(bool(v) for v in row) for row in leq)
    for a in range(n):
        if not rel[a][a]:
            msg = f"leq is not reflexive at {names[a]!r}"
            raise InputError(msg)
    for a, b in itertools.product(range(n), repeat=2):
        if a != b and rel[a][b] and rel[b][a]:
            msg = f"leq is not antisymmetric: {names[a]!r} and {names[b]!r}"
            raise InputError(msg)
    for a, b, c in itertools.product(range(n), repeat=3):
        if rel[a][b] and rel[b][c] and not rel[a][c]:
            msg = f"leq is not transitive: {names[a]!r} ≤ {names[b]!r} ≤ {names[c]!r}"
            raise InputError(msg)
    if labels:
        _check_labels(names, rel, labels)

    meet_rows: list[tuple[int, ...]] = []
    join_rows: list[tuple[int, ...]] = []
    for a in range(n):
        meet_row: list[int] = []
        join_row: list[int] = []
        for b in range(n):
            lower = [c for c in range(n) if rel[c][a] and rel[c][b]]
            upper = [c for c in range(n) if rel[a][c] and rel[b][c]]
            glb = _bound(lower, rel, greatest=True)
            lub = _bound(upper, rel, greatest=False)
            if glb is None or lub is None:
                msg = f"{names[a]!r} and {names[b]!r} have no meet or no join"
                raise InputError(msg)
            meet_row.append(glb)
            join_row.append(lub)
        meet_rows.append(tuple(meet_row))
        join_rows.append(tuple(join_row))

    everything = list(range(n))
    bottom = _bound(everything, rel, greatest=False)
    top = _bound(everything, rel, greatest=True)
    if bottom is None or top is None:
        msg = "The order has no bottom or no top"
        raise InputError(msg)

    for x, y, z in itertools.product(range(n), repeat=3):
        if meet_rows[x][join_rows[y][z]] != join_rows[meet_rows[x][y]][meet_rows[x][z]]:
            msg = f"Not distributive at ({names[x]!r}, {names[y]!r}, {names[z]!r})"
            raise InputError(msg)

    return FinDistLattice(
        names=tuple(names),
        leq=rel,
        meet_table=tuple(meet_rows),
        join_table=tuple(join_rows),
        bottom=bottom,
        top=top,
        labels=tuple(labels) if labels else (),
    )


def generate_lattice(
    generators: Sequence[OpenSet],
    carrier: Carrier,
    *,
    cap: int = DEFAULT_LATTICE_CAP,
) -> FinDistLattice:
    """Smallest sublattice of Ω₀ containing the generators, ∅ and X.

    Opens are encoded as bitmasks over the common cells of the generators, so
    the closure under union and intersection is integer arithmetic. Elements
    are ordered by (number of cells, mask); bottom comes first, top last.

    Raises:
        EnumerationCapExceeded: if the closure grows beyond ``cap`` elements.
        CarrierMismatch: if the generators do not share ``carrier``.
    """
    cell_list = cells(generators, carrier)
    full_mask = (1 << len(cell_list)) - 1

    def to_mask(u: OpenSet) -> int:
        return sum(
            1 << k for k, cell in enumerate(cell_list) if contains_point(u, cell.representative)
        )

    seen: set[int] = {0, full_mask}
    pending = [to_mask(g) for g in generators]
    while pending:
        mask = pending.pop()
        if mask in seen:
            continue
        seen.add(mask)
        if len(seen) > cap:
            msg = f"Sublattice closure exceeds {cap} elements"
            raise EnumerationCapExceeded(msg, cap)
        for other in list(seen):
            for combined in (mask | other, mask & other):
                if combined not in seen:
                    pending.append(combined)

    ordered = sorted(seen, key=lambda m: (m.bit_count(), m))
    index = {m: i for i, m in enumerate(ordered)}
    labels = tuple(
        from_cell_membership(
            carrier, cell_list, [bool(m >> k & 1) for k in range(len(cell_list))]
        )
        for m in ordered
    )
    logger.debug(
        "Generated sublattice: %d generators, %d cells, %d elements",
        len(generators),
        len(cell_list),
        len(ordered),
    )
    return FinDistLattice(
        names=tuple(str(label) for label in labels),
        leq=tuple(tuple(a & ~b == 0 for b in ordered) for a in ordered),
        meet_table=tuple(tuple(index[a & b] for b in ordered) for a in ordered),
        join_table=tuple(tuple(index[a | b] for b in ordered) for a in ordered),
        bottom=0,
        top=len(ordered) - 1,
        labels=labels,
    )


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


def is_prime_filter(lattice: FinDistLattice, members: frozenset[int]) -> bool:
    """Brute-force check of every prime-filter axiom by quantifying over all pairs."""
    n = lattice.size
    if not members or lattice.bottom in members:
        return False
    for a in members:
        if any(lattice.le(a, b) and b not in members for b in range(n)):
            return False
    for a, b in itertools.product(members, repeat=2):
        if lattice.meet(a, b) not in members:
            return False
    for a, b in itertools.product(range(n), repeat=2):
        if lattice.join(a, b) in members and a not in members and b not in members:
            return False
    return True


def _join_irreducibles(lattice: FinDistLattice) -> list[int]:
    """Elements that are not bottom and not the join of the elements strictly below them."""
    result = []
    for j in range(lattice.size):
        if j == lattice.bottom:
            continue
        below = lattice.bottom
        for c in range(lattice.size):
            if c != j and lattice.le(c, j):
                below = lattice.join(below, c)
        if below != j:
            result.append(j)
    return result


def prime_filters(
    lattice: FinDistLattice,
    *,
    strategy: PrimeFilterStrategy = PrimeFilterStrategy.JOIN_IRREDUCIBLE,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> list[PrimeFilter]:
    """All prime filters of ``lattice``, sorted by their member sets.

    ``EXHAUSTIVE`` tests every subset of the elements against
    :func:`is_prime_filter` and refuses lattices larger than ``cap``.
    ``JOIN_IRREDUCIBLE`` uses that in a finite distributive lattice the prime
    filters are exactly the ↑j for join-irreducible j; ``cap`` does not apply.

    Raises:
        EnumerationCapExceeded: for ``EXHAUSTIVE`` on more than ``cap`` elements.
    """
    if strategy is PrimeFilterStrategy.EXHAUSTIVE:
        if lattice.size > cap:
            msg = f"Exhaustive prime-filter search refuses {lattice.size} > {cap} elements"
            raise EnumerationCapExceeded(msg, cap)
        found = []
        others = [i for i in range(lattice.size) if i not in (lattice.bottom, lattice.top)]
        # top is in every filter, bottom in none
        for r in range(len(others) + 1):
            for subset in itertools.combinations(others, r):
                members = frozenset((*subset, lattice.top))
                if is_prime_filter(lattice, members):
                    found.append(PrimeFilter(members))
    else:
        found = [PrimeFilter(lattice.up(j)) for j in _join_irreducibles(lattice)]
    found.sort(key=lambda p: p.sort_key)
    logger.debug("Found %d prime filters (%s)", len(found), strategy.value)
    return found


def hull_kernel_space(
    lattice: FinDistLattice,
    *,
    strategy: PrimeFilterStrategy = PrimeFilterStrategy.JOIN_IRREDUCIBLE,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> HullKernelSpace:
    """The point space ``pt(L)`` with one hull-kernel open per lattice element."""
    points = tuple(prime_filters(lattice, strategy=strategy, cap=cap))
    opens = tuple(
        frozenset(k for k, p in enumerate(points) if u in p.members) for u in range(lattice.size)
    )
    return HullKernelSpace(points=points, opens=opens)


def roundtrip_report(
    lattice: FinDistLattice,
    *,
    strategy: PrimeFilterStrategy = PrimeFilterStrategy.JOIN_IRREDUCIBLE,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> RoundtripReport:
    """Check that ``u ↦ opens[u]`` is an order isomorphism onto its image."""
    space = hull_kernel_space(lattice, strategy=strategy, cap=cap)
    witness: tuple[int, int] | None = None
    for a, b in itertools.product(range(lattice.size), repeat=2):
        if lattice.le(a, b) != (space.opens[a] <= space.opens[b]):
            witness = (a, b)
            break
    # Order reflection in both directions already forces injectivity.
    return RoundtripReport(
        iso=witness is None,
        points=len(space.points),
        opens=len(set(space.opens)),
        witness=witness,
    )


def roundtrip_iso_check(
    lattice: FinDistLattice,
    *,
    strategy: PrimeFilterStrategy = PrimeFilterStrategy.JOIN_IRREDUCIBLE,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> bool:
    """True iff the open-set lattice of ``pt(L)`` is isomorphic to ``L``."""
    return roundtrip_report(lattice, strategy=strategy, cap=cap).iso


def point_trace(lattice: FinDistLattice, x: Fraction) -> PrimeFilter:
    """``{u ∈ L | x ∈ label(u)}``: the point of a labeled lattice seen by ``x``."""
    if not lattice.is_labeled:
        msg = "Point traces need a lattice whose elements are all labeled by opens"
        raise InputError(msg)
    return PrimeFilter(
        frozenset(i for i, label in enumerate(lattice.labels) if contains_point(label, x))
    )


def venn_cell_count(generators: Sequence[OpenSet], carrier: Carrier) -> int:
    """Number of distinct membership patterns the generators show across the carrier."""
    return len({flags for _, flags in cells_with_membership(generators, carrier)})
