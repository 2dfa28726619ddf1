#!/usr/bin/env python3
"""
Main entry point for pgroup-mcp.

Report subcommands run one construction or analysis on spec files and print
a line-based report; `serve` runs the MCP server over stdio.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from .runner import EXIT_SPEC, RunConfig, run
from .types import Command, ScheduleKind


def setup_logging(debug: bool = False) -> None:
    """Set up logging configuration."""
    level = logging.DEBUG if debug else logging.INFO
    import os
    import tempfile

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    try:
        temp_log_dir = os.path.join(tempfile.gettempdir(), "pgroup_logs")
        os.makedirs(temp_log_dir, exist_ok=True)
        log_path = os.path.join(temp_log_dir, "pgroup.log")
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
        handlers.append(file_handler)
        print(f"[pgroup-mcp] Log file: {log_path}", file=sys.stderr)
    except Exception:
        pass  # stderr only

    handlers[0].setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


def _add_run_options(parser: argparse.ArgumentParser, command: Command) -> None:
    parser.add_argument("--spec", type=str, required=True, help="Group spec file")
    if command == Command.iso:
        parser.add_argument("--spec2", type=str, help="Second spec file (defaults to --spec)")
    parser.add_argument("--stages", type=int, default=40, help="Stage the presentation is run to")
    parser.add_argument("--budget", type=int, default=40, help="Stage budget for limit approximations")
    parser.add_argument("--prefix", type=int, default=50, help="Number of leading element ids tracked")
    parser.add_argument("--bound", type=int, help="Search bound for exhaustive checks (defaults to PGL_MAX_ORDER)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for shuffled schedules")
    parser.add_argument("--schedule", type=str, choices=[k.value for k in ScheduleKind], default=ScheduleKind.round_robin.value, help="Growth schedule")
    parser.add_argument("--delay", type=int, default=0, help="Delay for the delayed schedule")
    parser.add_argument("--out", type=str, help="Write the report here instead of stdout")
    if command == Command.iso:
        parser.add_argument("--schedule2", type=str, choices=[k.value for k in ScheduleKind], default=ScheduleKind.shuffled.value, help="Growth schedule of the second presentation")
        parser.add_argument("--dump", action="store_true", help="Append the stagewise map revisions")
    if command == Command.classify:
        parser.add_argument("--plain-delta2", action="store_true", help="Ask for plain instead of relative Delta-0-2 status")
    if command == Command.scott_verify:
        parser.add_argument("--length", type=int, default=1, help="Tuple length")
        parser.add_argument("--depth", type=int, help="Divisible depth of the truncation")
        parser.add_argument("--copies", type=int, default=2, help="Copies of each infinitely repeated summand")


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="pgroup-mcp - computable Abelian p-groups: presentations, invariants, Scott families",
        prog="pgroup-mcp",
    )

    parser.add_argument("--debug", action="store_true", help="Enable debug logging")

    from . import __version__

    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        _add_run_options(subparsers.add_parser(command.value, help=f"Run the {command.value} report"), command)
    subparsers.add_parser("serve", help="Run the MCP server over stdio")

    return parser.parse_args(argv)


def _config_from(args: argparse.Namespace) -> RunConfig:
    options: Dict[str, Any] = {
        "command": args.command,
        "spec": args.spec,
        "spec2": getattr(args, "spec2", None),
        "stages": args.stages,
        "budget": args.budget,
        "prefix": args.prefix,
        "bound": args.bound,
        "seed": args.seed,
        "schedule": args.schedule,
        "schedule2": getattr(args, "schedule2", ScheduleKind.shuffled.value),
        "delay": args.delay,
        "out": args.out,
        "dump": getattr(args, "dump", False),
        "plain_delta2": getattr(args, "plain_delta2", False),
        "length": getattr(args, "length", 1),
        "depth": getattr(args, "depth", None),
        "copies": getattr(args, "copies", 2),
    }
    return RunConfig(**options)


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point."""
    args = parse_arguments(argv)

    setup_logging(args.debug)

    from . import __version__

    logging.info(f"Running version {__version__}")

    if args.command == "serve":
        from .simple_server import create_server

        server = create_server()
        try:
            server.run()
        except KeyboardInterrupt:
            logging.info("Server stopped by user")
        except Exception as e:
            logging.error(f"Server error: {e}")
            sys.exit(1)
        return

    try:
        config = _config_from(args)
    except ValidationError as e:
        print(f"error: config: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}")
        sys.exit(EXIT_SPEC)

    report = run(config)
    if config.out is None:
        print(report.text(), end="")
    if report.exit_code:
        sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
