"""Galois connection tool: galois_check."""

from __future__ import annotations

from typing import Any

from spectral_domains.models import StepFnModel
from spectral_domains.server import mcp
from spectral_domains.tools._errors import handle_domain_errors
from spectral_domains.verdicts import galois_payload

__all__: list[str] = []


@mcp.tool(tags={"galois"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def galois_check(f: StepFnModel, g: StepFnModel) -> dict[str, Any]:
    """Evaluate both sides of ``restrict(g) ⊑ f  ⟺  g ⊑ envelope(f)``.

    Returns ``lhs``, ``rhs`` and ``agree``. A failing side adds a witness:
    a ``cell`` for the left side, a component index of g for the right.
    """
    return galois_payload(f.to_domain(), g.to_domain())
