"""Finite elements of Idl(Ω₀): principal ideals ↓W and the embedding ι.

Only principal ideals exist as values. Every general ideal is a directed
union of them, and every order decision in this package factors through
principal ones, where ↓W ⊑ ↓W′ and ↓W ≪ ↓W′ both reduce to W ⊆ W′.
Points of the spectral compactification other than ι(x) are only visible
as prime filters of finite sublattices (see ``lattice_duality``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import InputError, PointOutsideCarrier
from spectral_domains.lattice_duality import FinDistLattice, HullKernelSpace
from spectral_domains.open_ring import (
    Carrier,
    OpenSet,
    contains_point,
    intersect,
    is_subset,
    union,
)

__all__ = [
    "PrincipalIdeal",
    "down",
    "hull_kernel_open",
    "ideal_join",
    "ideal_leq",
    "ideal_meet",
    "ideal_way_below",
    "iota_mem",
    "separating_open",
]


@dataclass(frozen=True, slots=True)
class PrincipalIdeal:
    """↓gen = {U ∈ Ω₀ | U ⊆ gen}; equal iff the generators are equal."""

    gen: OpenSet

    @property
    def carrier(self) -> Carrier:
        return self.gen.carrier

    def __str__(self) -> str:
        return f"↓({self.gen})"


def down(u: OpenSet) -> PrincipalIdeal:
    return PrincipalIdeal(u)


def ideal_leq(i: PrincipalIdeal, j: PrincipalIdeal) -> bool:
    """↓W ⊑ ↓W′ iff W ⊆ W′."""
    return is_subset(i.gen, j.gen)


def ideal_way_below(i: PrincipalIdeal, j: PrincipalIdeal) -> bool:
    """↓W ≪ ↓W′ iff W ⊆ W′: principal ideals are the compact elements of Idl(Ω₀)."""
    return is_subset(i.gen, j.gen)


def ideal_join(i: PrincipalIdeal, j: PrincipalIdeal) -> PrincipalIdeal:
    """↓W ∨ ↓W′ = ↓(W ∪ W′)."""
    return PrincipalIdeal(union(i.gen, j.gen))


def ideal_meet(i: PrincipalIdeal, j: PrincipalIdeal) -> PrincipalIdeal:
    """↓W ∧ ↓W′ = ↓W ∩ ↓W′ = ↓(W ∩ W′)."""
    return PrincipalIdeal(intersect(i.gen, j.gen))


def iota_mem(x: Fraction, i: PrincipalIdeal) -> bool:
    """Whether ↓W belongs to the completely prime filter ι(x), i.e. whether x ∈ W.

    Raises:
        PointOutsideCarrier: if ``x`` is outside the carrier.
    """
    return contains_point(i.gen, x)


def separating_open(x: Fraction, y: Fraction, carrier: Carrier) -> OpenSet:
    """An open of Ω₀ containing exactly one of two distinct carrier points.

    For ``x < y`` this is ``(x, y]``, which holds ``y`` and misses ``x``; so ι
    is injective.
    """
    for p in (x, y):
        if not carrier.contains(p):
            msg = f"Point {p} lies outside the carrier {carrier}"
            raise PointOutsideCarrier(msg)
    if x == y:
        msg = f"Cannot separate {x} from itself"
        raise InputError(msg)
    lo, hi = min(x, y), max(x, y)
    return OpenSet.interval(carrier, lo, hi)


def hull_kernel_open(
    i: PrincipalIdeal, lattice: FinDistLattice, space: HullKernelSpace
) -> frozenset[int]:
    """O_{↓W} restricted to ``pt(L)`` for a labeled sublattice ``L`` that contains W.

    Raises:
        KeyError: if W is not an element of ``lattice``.
    """
    return space.opens[lattice.index_of(i.gen)]
