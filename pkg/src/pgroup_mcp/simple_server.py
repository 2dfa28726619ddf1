"""
pgroup-mcp server implementation.

The server exposes classification, invariant extraction, presentation
building and Scott-family checks as MCP tools.
"""

import logging
import os

from fastmcp import FastMCP
from fastmcp.server.middleware.error_handling import ErrorHandlingMiddleware
from fastmcp.server.middleware.logging import LoggingMiddleware
from fastmcp.server.middleware.timing import TimingMiddleware

from .server_registry import ServerRegistry
from .tools import register_all_tools
from .workbench import Workbench, configured_default_budget

logger = logging.getLogger(__name__)


class PGroupServer:
    """
    pgroup-mcp server.

    Holds the FastMCP app and the workbench of named presentations.
    """

    def __init__(self) -> None:
        """Initialize the server."""
        from . import __version__

        self.app = FastMCP(
            version=__version__,
            name="pgroup-mcp",
            instructions="""System Prompt: pgroup-mcp

            You are the pgroup-mcp tool set for countable Abelian p-groups of length at most omega.

            - Types are given as spec text, one `key: value` per line, e.g. "p: 2\\ndivisible_rank: 1\\ncyclic_infinite: 1".
            - Use `classify_type`, `ulm_invariants` and `compare_types` for questions about isomorphism types.
            - Build named computable presentations with `build_presentation`, then query them with
              `presentation_invariants`, `decompose_presentation` and `delta2_isomorphism`.
            - Use `verify_scott_family` to check generated Scott formulas on a finite truncation.
            - Stagewise answers are yes/no/unknown; report unknown and inconclusive results as such.
            """,
            on_duplicate_resources="warn",
            on_duplicate_prompts="replace",
            include_fastmcp_meta=True,
        )
        self.workbench = Workbench()
        self.default_budget = configured_default_budget()
        self.read_only = os.getenv("PGL_READ_ONLY", "false").lower() == "true"

        self.app.add_middleware(ErrorHandlingMiddleware())
        self.app.add_middleware(TimingMiddleware())
        self.app.add_middleware(LoggingMiddleware(include_payloads=True, max_payload_length=1000))

        registry = ServerRegistry.get_instance()
        registry.initialize(app=self.app, workbench=self.workbench, default_budget=self.default_budget, read_only=self.read_only)

        register_all_tools()

        logger.info("pgroup-mcp server initialized")
        logger.info(f"Default stage budget: {self.default_budget}")
        if self.read_only:
            logger.info("Running in READ-ONLY mode")

    def run(self) -> None:
        self.app.run()


def create_server() -> PGroupServer:
    return PGroupServer()
