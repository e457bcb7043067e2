"""Shared dependency factories for tool injection."""

from __future__ import annotations

from typing import TYPE_CHECKING

from fastmcp.server.dependencies import get_context

if TYPE_CHECKING:
    from spectral_domains.settings import Settings

__all__ = ["get_settings"]


async def get_settings() -> Settings:
    """Resolve Settings from the lifespan context."""
    ctx = get_context()
    return ctx.request_context.lifespan_context["settings"]
