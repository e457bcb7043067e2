"""Step-function tools: stepfn_eval, stepfn_order, stepfn_way_below, stepfn_preimage."""

from __future__ import annotations

from typing import Any, Literal

from fastmcp.dependencies import Depends

from spectral_domains.interval_domain import to_rational
from spectral_domains.models import BoxModel, StepFnModel
from spectral_domains.server import mcp
from spectral_domains.settings import Settings
from spectral_domains.step_functions import PreimageStrategy, WayBelowStrategy
from spectral_domains.tools._deps import get_settings
from spectral_domains.tools._errors import handle_domain_errors
from spectral_domains.verdicts import (
    eval_payload,
    order_payload,
    preimage_payload,
    way_below_payload,
)

__all__: list[str] = []


@mcp.tool(tags={"stepfn"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def stepfn_eval(f: StepFnModel, at: str) -> dict[str, Any]:
    """Evaluate a step function at a rational point such as ``"3/2"``.

    The value is the join of the boxes of all components whose open region
    contains the point, or ``{"bottom": true}`` when none does.
    """
    return eval_payload(f.to_domain(), to_rational(at))


@mcp.tool(tags={"stepfn"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def stepfn_order(
    f: StepFnModel,
    g: StepFnModel,
    strategy: Literal["cells", "primefilters"] = "cells",
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Decide ``f ⊑ g`` pointwise; the ``cells`` strategy reports a failing cell."""
    return order_payload(f.to_domain(), g.to_domain(), strategy, settings.cap_lattice)


@mcp.tool(tags={"stepfn"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def stepfn_way_below(
    f: StepFnModel,
    g: StepFnModel,
    strategy: Literal["spectral", "absbasis"] = "spectral",
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Decide ``f ≪ g``; on failure the witness is the index of the offending component of f."""
    return way_below_payload(
        f.to_domain(), g.to_domain(), WayBelowStrategy(strategy), settings.cap_subsets
    )


@mcp.tool(tags={"stepfn"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def stepfn_preimage(
    g: StepFnModel,
    box: BoxModel,
    strategy: Literal["formula", "cells"] = "formula",
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Compute the open set of points where ``box`` is way below ``g``."""
    g_fn = g.to_domain()
    return preimage_payload(
        g_fn, box.to_domain(g_fn.dim), PreimageStrategy(strategy), settings.cap_subsets
    )
