"""Shared test fixtures."""

from __future__ import annotations

import pytest

from spectral_domains.interval_domain import Box
from spectral_domains.lattice_duality import FinDistLattice, lattice_from_leq
from spectral_domains.open_ring import Carrier, OpenSet
from spectral_domains.step_functions import StepFn, make_stepfn


@pytest.fixture
def carrier() -> Carrier:
    """X = [0, 3]."""
    return Carrier.of(0, 3)


@pytest.fixture
def worked_g(carrier: Carrier) -> StepFn:
    """[0,2]·χ(0,2] ⊔ [1,3]·χ(1,3]; on {0}, (0,1], (1,2], (2,3] it is ⊥, [0,2], [1,2], [1,3]."""
    return make_stepfn(
        [
            (OpenSet.interval(carrier, 0, 2), Box.of((0, 2))),
            (OpenSet.interval(carrier, 1, 3), Box.of((1, 3))),
        ],
        carrier,
        1,
    )


@pytest.fixture
def two_chain() -> FinDistLattice:
    return lattice_from_leq(["bot", "top"], [[True, True], [False, True]])


@pytest.fixture
def five_lattice() -> FinDistLattice:
    """∅ < a, b < a∪b < X with a ∧ b = ∅, i.e. the opens ∅, (0,1], (1,2], (0,2], [0,3]."""
    le = {
        "bot": {"bot", "a", "b", "ab", "top"},
        "a": {"a", "ab", "top"},
        "b": {"b", "ab", "top"},
        "ab": {"ab", "top"},
        "top": {"top"},
    }
    names = list(le)
    return lattice_from_leq(names, [[b in le[a] for b in names] for a in names])

