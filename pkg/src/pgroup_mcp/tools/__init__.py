"""Tool registration modules for the pgroup-mcp server."""

from .analysis_tools import register_analysis_tools
from .presentation_tools import register_presentation_tools
from .scott_tools import register_scott_tools

__all__ = [
    "register_analysis_tools",
    "register_presentation_tools",
    "register_scott_tools",
]


def register_all_tools() -> None:
    """Register all tools with the server."""
    register_analysis_tools()
    register_presentation_tools()
    register_scott_tools()
