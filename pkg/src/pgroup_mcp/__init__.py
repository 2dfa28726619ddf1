"""
pgroup-mcp.

Computable Abelian p-groups of length at most omega: staged presentations,
invariant extraction, categoricity classification, Scott families and
limit-computable isomorphisms, usable as a library, a report CLI and an MCP
server.
"""

from .simple_server import create_server

__version__ = "0.1.0"
__all__ = ["create_server"]
