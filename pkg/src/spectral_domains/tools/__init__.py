"""MCP tool modules, imported by server.py to trigger registration."""
