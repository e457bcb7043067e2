"""Lattice duality tools: duality_roundtrip, duality_prime_filters."""

from __future__ import annotations

from typing import Any, Literal

from fastmcp.dependencies import Depends

from spectral_domains.lattice_duality import PrimeFilterStrategy
from spectral_domains.models import LatticeModel
from spectral_domains.server import mcp
from spectral_domains.settings import Settings
from spectral_domains.tools._deps import get_settings
from spectral_domains.tools._errors import handle_domain_errors
from spectral_domains.verdicts import prime_filters_payload, roundtrip_payload

__all__: list[str] = []

StrategyName = Literal["exhaustive", "join_irreducible"]


@mcp.tool(tags={"duality"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def duality_roundtrip(
    lattice: LatticeModel,
    strategy: StrategyName = "join_irreducible",
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Check that a finite distributive lattice is recovered from its prime-filter space.

    Returns ``iso`` (bool), the number of ``points`` and ``opens``, and on
    failure a ``witness`` pair of element names that the round trip merges.
    """
    return roundtrip_payload(
        lattice.to_domain(), PrimeFilterStrategy(strategy), settings.cap_exhaustive
    )


@mcp.tool(tags={"duality"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def duality_prime_filters(
    lattice: LatticeModel,
    strategy: StrategyName = "join_irreducible",
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """List the prime filters of a finite distributive lattice by element name."""
    return prime_filters_payload(
        lattice.to_domain(), PrimeFilterStrategy(strategy), settings.cap_exhaustive
    )
