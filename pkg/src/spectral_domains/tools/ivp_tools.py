"""Validated IVP tools: ivp_solve, ivp_convergence."""

from __future__ import annotations

import logging
from typing import Any

from fastmcp.dependencies import Depends
from fastmcp.server.context import Context

from spectral_domains.models import IvpProblemModel
from spectral_domains.server import mcp
from spectral_domains.settings import Settings
from spectral_domains.tools._deps import get_settings
from spectral_domains.tools._errors import handle_domain_errors
from spectral_domains.verdicts import apriori_params, convergence_payload, solve_rows

__all__: list[str] = []

logger = logging.getLogger(__name__)


@mcp.tool(tags={"ivp"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def ivp_solve(
    ctx: Context,
    problem: IvpProblemModel,
    pieces: int = 16,
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Enclose the solution of ``y' = v(y), y(t0) ∈ y0`` on a uniform partition of [t0, T].

    ``field`` is one expression per component separated by ``;`` over the
    variables ``y1 … yn`` with ``+ - *`` and rational constants. Returns
    the fixpoint ``iterations`` and ``rows`` keyed like the CLI's CSV header;
    ``node`` is ``"1"`` for the enclosure at a partition node and ``"0"``
    for the enclosure over a piece.
    """
    rows, iterations = solve_rows(problem.to_domain(), pieces, apriori_params(settings))
    header, *body = rows
    await ctx.info(f"Fixpoint reached after {iterations} iterations on {pieces} pieces")
    return {"iterations": iterations, "rows": [dict(zip(header, r, strict=True)) for r in body]}


@mcp.tool(tags={"ivp"}, annotations={"readOnlyHint": True})
@handle_domain_errors
async def ivp_convergence(
    problem: IvpProblemModel,
    levels: int = 5,
    start: int = 4,
    settings: Settings = Depends(get_settings),
) -> dict[str, Any]:
    """Enclosure width at ``start, 2·start, …`` pieces with successive width ratios."""
    table = convergence_payload(problem.to_domain(), levels, start, apriori_params(settings))
    logger.debug("Convergence table: %s", table)
    return {"levels": table}
