"""Seeded random instances and the randomized law suites.

Every suite draws from its own ``random.Random(seed)`` so a suite name, a
count and a seed determine its output exactly. The suites back both the
``galois fuzz`` command and the counted tests.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from spectral_domains.exceptions import (
    EnumerationCapExceeded,
    InconsistentJoin,
    InputError,
)
from spectral_domains.galois import adjunction_check, restrict
from spectral_domains.interval_domain import Box, box_inflate
from spectral_domains.lattice_duality import (
    generate_lattice,
    prime_filters,
    roundtrip_iso_check,
    venn_cell_count,
)
from spectral_domains.open_ring import (
    AT_LEFT_END,
    Carrier,
    HalfOpenPiece,
    OpenSet,
    canonicalize,
    contains_point,
    intersect,
    is_subset,
    union,
)
from spectral_domains.settings import Settings
from spectral_domains.spectral_points import (
    down,
    ideal_join,
    ideal_meet,
    ideal_way_below,
    iota_mem,
)
from spectral_domains.step_functions import (
    PreimageStrategy,
    StepFn,
    WayBelowStrategy,
    interpolate,
    make_stepfn,
    order_cells,
    order_primefilters,
    preimage_way_above,
    way_below,
)

__all__ = [
    "DEFAULT_CARRIER",
    "SUITES",
    "SuiteReport",
    "extend_above",
    "random_box",
    "random_open",
    "random_pair",
    "random_stepfn",
    "run_suite",
    "shrink_below",
]

logger = logging.getLogger(__name__)

DEFAULT_CARRIER = Carrier(Fraction(0), Fraction(3))
OPEN_GRID = 2  # endpoints of random opens are multiples of 1/2
BOX_DENOMINATORS = range(1, 9)
INFLATIONS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _grid_point(rng: random.Random, lo: Fraction, hi: Fraction, denominator: int) -> Fraction:
    k = rng.randint(int(lo * denominator), int(hi * denominator))
    return Fraction(k, denominator)


def random_open(
    rng: random.Random, carrier: Carrier = DEFAULT_CARRIER, max_pieces: int = 2
) -> OpenSet:
    """A random open with up to ``max_pieces`` raw pieces on the half-unit grid."""
    raw: list[HalfOpenPiece] = []
    for _ in range(rng.randint(0, max_pieces)):
        a = _grid_point(rng, carrier.lo, carrier.hi, OPEN_GRID)
        b = _grid_point(rng, carrier.lo, carrier.hi, OPEN_GRID)
        if a == b:
            continue
        lo, hi = min(a, b), max(a, b)
        at_left_end = lo == carrier.lo and rng.random() < 0.5
        raw.append(HalfOpenPiece(AT_LEFT_END if at_left_end else lo, hi))
    return canonicalize(raw, carrier)


def random_box(rng: random.Random, dim: int, *, bottom_probability: float = 0.1) -> Box:
    """A random box with endpoints in [-2, 2] and denominators up to 8, sometimes bottom."""
    if rng.random() < bottom_probability:
        return Box.bottom(dim)
    sides = []
    for _ in range(dim):
        den = rng.choice(BOX_DENOMINATORS)
        a = _grid_point(rng, Fraction(-2), Fraction(2), den)
        b = _grid_point(rng, Fraction(-2), Fraction(2), den)
        sides.append((min(a, b), max(a, b)))
    return Box(dim, tuple(sides))


def random_stepfn(
    rng: random.Random,
    carrier: Carrier = DEFAULT_CARRIER,
    dim: int | None = None,
    max_components: int = 5,
) -> StepFn:
    """A consistent step function: components that would break consistency are dropped."""
    n = dim if dim is not None else rng.choice((1, 2))
    f = StepFn.bottom(carrier, n)
    for _ in range(rng.randint(0, max_components)):
        f = _try_extend(f, random_open(rng, carrier), random_box(rng, n))
    return f


def _try_extend(f: StepFn, region: OpenSet, box: Box) -> StepFn:
    try:
        return make_stepfn((*f.components, (region, box)), f.carrier, f.dim)
    except InconsistentJoin:
        return f


def extend_above(rng: random.Random, f: StepFn, extra: int = 2) -> StepFn:
    """``f`` plus up to ``extra`` consistent components, hence ``f ⊑`` the result."""
    g = f
    for _ in range(rng.randint(0, extra)):
        g = _try_extend(g, random_open(rng, f.carrier), random_box(rng, f.dim))
    return g


def shrink_below(rng: random.Random, g: StepFn) -> StepFn:
    """A step function ≺ g: each component's open is cut down and its box widened."""
    components = []
    for comp in g.components:
        region = intersect(comp.region, random_open(rng, g.carrier, max_pieces=3))
        if rng.random() < 0.3:
            region = comp.region
        box = comp.box if comp.box.is_bottom else box_inflate(comp.box, rng.choice(INFLATIONS))
        components.append((region, box))
    return make_stepfn(components, g.carrier, g.dim)


def random_pair(
    rng: random.Random, carrier: Carrier = DEFAULT_CARRIER
) -> tuple[StepFn, StepFn]:
    """Independent, extended or shrunk pairs in equal proportion."""
    f = random_stepfn(rng, carrier)
    match rng.randrange(3):
        case 0:
            return f, random_stepfn(rng, carrier, f.dim)
        case 1:
            return f, extend_above(rng, f)
        case _:
            return shrink_below(rng, f), f


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteReport:
    """Outcome of one law suite; ``failures`` holds human-readable witnesses."""

    name: str
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, witness: str) -> None:
        logger.warning("%s suite: law violated: %s", self.name, witness)
        self.failures.append(witness)


def galois_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """Adjunction agreement plus the section-retraction identity."""
    report = SuiteReport("galois")
    for _ in range(n):
        f, g = random_pair(rng)
        if rng.random() < 0.5:
            f, g = g, f
        verdict = adjunction_check(f, g)
        report.checked += 1
        if not verdict.agree:
            report.fail(f"f={f}; g={g}; lhs={verdict.lhs}; rhs={verdict.rhs}")
        back = restrict(f)
        if not (order_cells(back, f) and order_cells(f, back)):
            report.fail(f"restriction changed f={f}")
    return report


def waybelow_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """Spectral and abstract-basis way-below agree; both preimage strategies agree."""
    report = SuiteReport("waybelow")
    cap = settings.cap_subsets
    for _ in range(n):
        f, g = random_pair(rng)
        spectral = way_below(f, g, strategy=WayBelowStrategy.SPECTRAL, cap=cap)
        abs_basis = way_below(f, g, strategy=WayBelowStrategy.ABS_BASIS, cap=cap)
        report.checked += 1
        if spectral != abs_basis:
            report.fail(f"f={f}; g={g}; spectral={spectral}; absbasis={abs_basis}")
        b = random_box(rng, g.dim)
        formula = preimage_way_above(g, b, strategy=PreimageStrategy.FORMULA, cap=cap)
        cells = preimage_way_above(g, b, strategy=PreimageStrategy.CELLS)
        if formula != cells:
            report.fail(f"g={g}; b={b}; formula={formula}; cells={cells}")
    return report


def basis_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """≺ is transitive on chained triples and interpolation lands strictly in between."""
    report = SuiteReport("basis")
    cap = settings.cap_subsets
    for _ in range(n):
        g = random_stepfn(rng)
        f = shrink_below(rng, g)
        h = shrink_below(rng, f)
        report.checked += 1
        chained = way_below(h, f, cap=cap) and way_below(f, g, cap=cap)
        if chained and not way_below(h, g, cap=cap):
            report.fail(f"transitivity: h={h}; f={f}; g={g}")
        family = [shrink_below(rng, g) for _ in range(rng.randint(0, 3))]
        y = interpolate(family, g, cap=cap)
        if not way_below(y, g, cap=cap) or not all(way_below(a, y, cap=cap) for a in family):
            report.fail(f"interpolation: g={g}; y={y}")
    return report


def order_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """Pointwise order on cells agrees with the order on prime filters."""
    report = SuiteReport("order")
    for _ in range(n):
        f, g = random_pair(rng)
        try:
            by_filters = order_primefilters(f, g, cap=settings.cap_lattice)
        except EnumerationCapExceeded:
            report.skipped += 1
            continue
        by_cells = order_cells(f, g)
        report.checked += 1
        if by_cells != by_filters:
            report.fail(f"f={f}; g={g}; cells={by_cells}; primefilters={by_filters}")
    return report


def duality_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """Finite round-trip is an isomorphism and points match the Venn cells."""
    report = SuiteReport("duality")
    carrier = DEFAULT_CARRIER
    for _ in range(n):
        generators = [random_open(rng, carrier) for _ in range(rng.randint(1, 4))]
        try:
            lattice = generate_lattice(generators, carrier, cap=settings.cap_lattice)
        except EnumerationCapExceeded:
            report.skipped += 1
            continue
        report.checked += 1
        if not roundtrip_iso_check(lattice):
            report.fail(f"round-trip failed for generators {[str(u) for u in generators]}")
        points = len(prime_filters(lattice))
        venn = venn_cell_count(generators, carrier)
        if points != venn:
            names = [str(u) for u in generators]
            report.fail(f"{points} prime filters but {venn} Venn cells for {names}")
    return report


def ideals_suite(rng: random.Random, n: int, settings: Settings) -> SuiteReport:
    """Joins and meets of principal ideals, and ≪ as inclusion, checked pointwise."""
    report = SuiteReport("ideals")
    carrier = DEFAULT_CARRIER
    sample_points = [Fraction(k, 4) for k in range(int(carrier.lo * 4), int(carrier.hi * 4) + 1)]
    for _ in range(n):
        w1, w2 = random_open(rng, carrier), random_open(rng, carrier)
        i, j = down(w1), down(w2)
        report.checked += 1
        joined, met = ideal_join(i, j), ideal_meet(i, j)
        if joined != down(union(w1, w2)) or met != down(intersect(w1, w2)):
            report.fail(f"join/meet of ↓({w1}) and ↓({w2})")
        for x in sample_points:
            in1, in2 = contains_point(w1, x), contains_point(w2, x)
            if iota_mem(x, joined) != (in1 or in2) or iota_mem(x, met) != (in1 and in2):
                report.fail(f"membership of {x} for ↓({w1}), ↓({w2})")
                break
        if ideal_way_below(i, j) != is_subset(w1, w2):
            report.fail(f"way-below of ↓({w1}) and ↓({w2})")
    return report


SUITES: dict[str, Callable[[random.Random, int, Settings], SuiteReport]] = {
    "galois": galois_suite,
    "waybelow": waybelow_suite,
    "basis": basis_suite,
    "order": order_suite,
    "duality": duality_suite,
    "ideals": ideals_suite,
}


def run_suite(name: str, n: int, *, seed: int, settings: Settings) -> list[SuiteReport]:
    """Run one suite (or every suite for ``"all"``), each from a fresh seeded generator."""
    names = list(SUITES) if name == "all" else [name]
    reports = []
    for suite_name in names:
        try:
            suite = SUITES[suite_name]
        except KeyError:
            msg = f"Unknown suite {suite_name!r}; choose from {sorted(SUITES)} or 'all'"
            raise InputError(msg) from None
        report = suite(random.Random(seed), n, settings)
        logger.info(
            "%s suite: %d checked, %d skipped, %d failures",
            report.name,
            report.checked,
            report.skipped,
            len(report.failures),
        )
        reports.append(report)
    return reports
