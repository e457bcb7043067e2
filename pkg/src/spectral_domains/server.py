"""FastMCP server instance with lifespan and tool registration."""

from __future__ import annotations

import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager
from typing import Any

from fastmcp import FastMCP
from fastmcp.server.middleware.error_handling import ErrorHandlingMiddleware

from spectral_domains.settings import Settings

logger = logging.getLogger(__name__)


@asynccontextmanager
async def app_lifespan(server: FastMCP) -> AsyncIterator[dict[str, Any]]:
    """Load settings once per server run."""
    settings = Settings()
    logger.info(
        "spectral-domains tools ready (cap_lattice=%d, cap_subsets=%d)",
        settings.cap_lattice,
        settings.cap_subsets,
    )
    yield {"settings": settings}


mcp = FastMCP(
    "spectral-domains",
    instructions=(
        "Exact checks on rational step functions, finite distributive lattices "
        "and validated IVP enclosures. Values use the JSON formats of the "
        "spectral-domains CLI; rationals are strings such as '3/4'. "
        "Every tool is read-only and returns a verdict plus a witness on failure."
    ),
    lifespan=app_lifespan,
    middleware=[
        ErrorHandlingMiddleware(
            logger=logger,
            include_traceback=False,
            transform_errors=True,
        ),
    ],
)


# ---------------------------------------------------------------------------
# Import tool modules to trigger @mcp.tool registration. These must come
# AFTER mcp is defined to avoid circular imports.
# ---------------------------------------------------------------------------
import spectral_domains.tools.duality_tools as _dual  # noqa: E402
import spectral_domains.tools.galois_tools as _gal  # noqa: E402
import spectral_domains.tools.ivp_tools as _ivp  # noqa: E402
import spectral_domains.tools.stepfn_tools as _step  # noqa: E402

__all__ = [  # keep side-effect imports from being flagged as unused
    "mcp",
    "_dual",
    "_gal",
    "_ivp",
    "_step",
]
