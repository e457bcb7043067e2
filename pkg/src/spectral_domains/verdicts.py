"""JSON-ready verdict payloads shared by the CLI and the MCP tools.

Each function takes domain values, runs one check and returns a plain dict.
A failed verdict carries a ``witness`` entry; passing verdicts have none.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any

from spectral_domains.galois import adjunction_check, find_envelope_violation, restrict
from spectral_domains.interval_domain import Box
from spectral_domains.ivp.oracles import Oracle, solution_box
from spectral_domains.ivp.solver import (
    AprioriParams,
    IvpProblem,
    convergence_levels,
    csv_header,
    enclosure_contains,
    enclosure_rows,
    solve_fixpoint,
)
from spectral_domains.lattice_duality import (
    FinDistLattice,
    PrimeFilterStrategy,
    prime_filters,
    roundtrip_report,
)
from spectral_domains.models import BoxModel, OpenSetModel
from spectral_domains.settings import Settings
from spectral_domains.step_functions import (
    PreimageStrategy,
    StepFn,
    WayBelowStrategy,
    evaluate,
    find_order_violation,
    find_way_below_violation,
    order_primefilters,
    preimage_way_above,
)

__all__ = [
    "ORDER_STRATEGIES",
    "apriori_params",
    "convergence_payload",
    "eval_payload",
    "galois_payload",
    "oracle_payload",
    "order_payload",
    "preimage_payload",
    "prime_filters_payload",
    "roundtrip_payload",
    "solve_rows",
    "way_below_payload",
]

ORDER_STRATEGIES = ("cells", "primefilters")


def apriori_params(settings: Settings) -> AprioriParams:
    return AprioriParams(
        max_iterations=settings.apriori_max_iterations,
        inflation=settings.apriori_inflation,
        epsilon=settings.apriori_epsilon,
        magnitude_limit=settings.apriori_magnitude_limit,
    )


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


def roundtrip_payload(
    lattice: FinDistLattice, strategy: PrimeFilterStrategy, cap: int
) -> dict[str, Any]:
    report = roundtrip_report(lattice, strategy=strategy, cap=cap)
    payload: dict[str, Any] = {"iso": report.iso, "points": report.points, "opens": report.opens}
    if report.witness is not None:
        a, b = report.witness
        payload["witness"] = [lattice.names[a], lattice.names[b]]
    return payload


def prime_filters_payload(
    lattice: FinDistLattice, strategy: PrimeFilterStrategy, cap: int
) -> dict[str, Any]:
    points = prime_filters(lattice, strategy=strategy, cap=cap)
    return {
        "count": len(points),
        "prime_filters": [sorted(lattice.names[u] for u in p.members) for p in points],
    }


# ---------------------------------------------------------------------------
# step functions
# ---------------------------------------------------------------------------


def eval_payload(f: StepFn, at: Fraction) -> dict[str, Any]:
    return {"at": str(at), "value": BoxModel.from_domain(evaluate(f, at)).dump()}


def order_payload(f: StepFn, g: StepFn, strategy: str, cap: int) -> dict[str, Any]:
    """Order check; ``strategy`` is ``cells`` (with a cell witness) or ``primefilters``."""
    payload: dict[str, Any] = {"strategy": strategy}
    if strategy == "cells":
        cell = find_order_violation(f, g)
        payload["verdict"] = cell is None
        if cell is not None:
            payload["witness"] = {"cell": str(cell)}
    elif strategy == "primefilters":
        payload["verdict"] = order_primefilters(f, g, cap=cap)
    else:
        msg = f"Unknown order strategy {strategy!r}; expected one of {ORDER_STRATEGIES}"
        raise ValueError(msg)
    return payload


def way_below_payload(
    f: StepFn, g: StepFn, strategy: WayBelowStrategy, cap: int
) -> dict[str, Any]:
    index = find_way_below_violation(f, g, strategy=strategy, cap=cap)
    payload: dict[str, Any] = {"strategy": strategy.value, "verdict": index is None}
    if index is not None:
        payload["witness"] = {"component": index}
    return payload


def preimage_payload(g: StepFn, b: Box, strategy: PreimageStrategy, cap: int) -> dict[str, Any]:
    u = preimage_way_above(g, b, strategy=strategy, cap=cap)
    return {"strategy": strategy.value, "open": OpenSetModel.from_domain(u).dump()}


# ---------------------------------------------------------------------------
# galois
# ---------------------------------------------------------------------------


def galois_payload(f: StepFn, g: StepFn) -> dict[str, Any]:
    verdict = adjunction_check(f, g)
    payload: dict[str, Any] = {"lhs": verdict.lhs, "rhs": verdict.rhs, "agree": verdict.agree}
    witness: dict[str, Any] = {}
    if not verdict.lhs:
        witness["cell"] = str(find_order_violation(restrict(g), f))
    if not verdict.rhs:
        witness["component"] = find_envelope_violation(g, f)
    if witness:
        payload["witness"] = witness
    return payload


# ---------------------------------------------------------------------------
# ivp
# ---------------------------------------------------------------------------


def solve_rows(
    problem: IvpProblem, pieces: int, params: AprioriParams
) -> tuple[list[list[str]], int]:
    """Header plus enclosure rows, and the number of iterations the fixpoint took."""
    enclosure, iterations = solve_fixpoint(problem, pieces, params)
    return [csv_header(problem.n), *enclosure_rows(enclosure)], iterations


def convergence_payload(
    problem: IvpProblem, levels: int, start: int, params: AprioriParams
) -> list[dict[str, str | int | None]]:
    return [
        {"k": k, "width": str(width), "ratio": None if ratio is None else str(ratio)}
        for k, width, ratio in convergence_levels(problem, levels, start=start, params=params)
    ]


def oracle_payload(
    problem: IvpProblem,
    pieces: int,
    oracle: Oracle,
    samples: int,
    seed: int,
    params: AprioriParams,
) -> dict[str, Any]:
    """Solve, then test ``E(t)`` against the exact flow at every node and at seeded times."""
    solution_box(problem, oracle, problem.t0)  # fail fast on a mismatched problem
    enclosure, _ = solve_fixpoint(problem, pieces, params)
    rng = random.Random(seed)
    span = problem.t_end - problem.t0
    times = [
        *enclosure.partition,
        *(problem.t0 + span * Fraction(rng.randint(0, 1000), 1000) for _ in range(samples)),
    ]
    payload: dict[str, Any] = {"oracle": oracle.value, "pieces": pieces, "checked": len(times)}
    miss = next(
        (
            t
            for t in times
            if not enclosure_contains(enclosure, t, solution_box(problem, oracle, t))
        ),
        None,
    )
    payload["verdict"] = miss is None
    if miss is not None:
        payload["witness"] = {"t": str(miss)}
    return payload
