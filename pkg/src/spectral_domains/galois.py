"""The Galois connection between step functions on X and on its compactification.

``restrict`` is the left adjoint ``g ↦ g ∘ ι``. The right adjoint ``f_*`` is
never tabulated: ``g ⊑ f_*`` is decided per component of g through the
infimum of f over the component's open (:func:`meet_over_open`), and
:func:`adjunction_check` computes both sides of ``g* ⊑ f ⟺ g ⊑ f_*``
independently so that any disagreement shows up as a verdict.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from spectral_domains.exceptions import (
    CarrierMismatch,
    DimensionMismatch,
    EmptyOpen,
    InputError,
)
from spectral_domains.interval_domain import Box, box_join, box_leq, box_meet
from spectral_domains.lattice_duality import FinDistLattice, PrimeFilter
from spectral_domains.open_ring import OpenSet
from spectral_domains.step_functions import (
    StepFn,
    find_order_violation,
    make_stepfn,
    values_on,
)

__all__ = [
    "AdjunctionVerdict",
    "adjunction_check",
    "envelope_at_filter",
    "envelope_leq",
    "find_envelope_violation",
    "meet_over_open",
    "restrict",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class AdjunctionVerdict:
    lhs: bool  # g* ⊑ f
    rhs: bool  # g ⊑ f_*
    agree: bool


def restrict(g: StepFn) -> StepFn:
    """``g* = g ∘ ι``; since ``ι⁻¹(O_{↓W}) = W`` this returns the same components."""
    return make_stepfn(g.components, g.carrier, g.dim)


def meet_over_open(f: StepFn, w: OpenSet) -> Box:
    """``⋀ f(W)``: the hull of the values of f on the joint cells inside ``w``.

    Raises:
        EmptyOpen: if ``w`` is empty.
        CarrierMismatch: if ``w`` lives on another carrier.
    """
    if w.carrier != f.carrier:
        msg = f"Open over {w.carrier} against step function over {f.carrier}"
        raise CarrierMismatch(msg)
    if w.is_empty:
        msg = "The infimum over the empty open is not taken"
        raise EmptyOpen(msg)
    return box_meet(values_on(f, w))


def find_envelope_violation(g: StepFn, f: StepFn) -> int | None:
    """Index of the first component ``(W′, b′)`` of g with ``b′ ⋢ ⋀ f(W′)``."""
    if g.carrier != f.carrier:
        msg = f"Step functions over different carriers: {g.carrier} and {f.carrier}"
        raise CarrierMismatch(msg)
    if g.dim != f.dim:
        msg = f"Step functions of different dimensions: {g.dim} and {f.dim}"
        raise DimensionMismatch(msg)
    for i, comp in enumerate(g.components):
        if comp.region.is_empty:
            continue
        if not box_leq(comp.box, meet_over_open(f, comp.region)):
            return i
    return None


def envelope_leq(g: StepFn, f: StepFn) -> bool:
    """Decide ``g ⊑ f_*`` component by component."""
    return find_envelope_violation(g, f) is None


def adjunction_check(f: StepFn, g: StepFn) -> AdjunctionVerdict:
    """Both sides of ``g* ⊑ f ⟺ g ⊑ f_*``, each from its own procedure."""
    lhs = find_order_violation(restrict(g), f) is None
    rhs = envelope_leq(g, f)
    if lhs != rhs:
        logger.warning("Adjunction sides disagree: g* ⊑ f is %s, g ⊑ f_* is %s", lhs, rhs)
    return AdjunctionVerdict(lhs=lhs, rhs=rhs, agree=lhs == rhs)


def envelope_at_filter(f: StepFn, lattice: FinDistLattice, point: PrimeFilter) -> Box:
    """``f_*`` at a point of a finite labeled sublattice: join of ``⋀ f(W)`` over W in the point.

    Raises:
        InputError: if the lattice is not labeled by opens.
    """
    if not lattice.is_labeled:
        msg = "Envelope values need a lattice whose elements are labeled by opens"
        raise InputError(msg)
    meets = [
        meet_over_open(f, lattice.labels[u])
        for u in sorted(point.members)
        if not lattice.labels[u].is_empty
    ]
    return box_join(meets, dim=f.dim)
