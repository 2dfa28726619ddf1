"""
Named in-memory presentations for the MCP server.

The workbench keeps built presentations between tool calls so that
invariants, decompositions and isomorphism approximations can be run on
them by name.
"""

import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from .presentations import GrowthSchedule, StagedPresentation, build_from_iso_type
from .spec_files import SpecDocument, parse_spec_text
from .types import ScheduleKind

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 200
MAX_ENTRIES = 32


class WorkbenchError(Exception):
    """Exception raised for workbench operations on missing or duplicate names."""

    pass


def configured_default_budget() -> int:
    """
    Default stage budget for tools, from PGL_DEFAULT_BUDGET.

    Raises:
        WorkbenchError: If the variable is set to something other than a positive integer
    """
    raw = os.getenv("PGL_DEFAULT_BUDGET")
    if raw is None or raw == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise WorkbenchError(f"PGL_DEFAULT_BUDGET must be an integer, got '{raw}'")
    if value <= 0:
        raise WorkbenchError(f"PGL_DEFAULT_BUDGET must be positive, got {value}")
    return value


@dataclass
class WorkbenchEntry:
    """A named presentation with the spec it was built from."""

    name: str
    doc: SpecDocument
    schedule: GrowthSchedule
    presentation: StagedPresentation

    def summary(self) -> Dict[str, Any]:
        G = self.presentation
        return {
            "name": self.name,
            "type": self.doc.iso_type.describe(),
            "schedule": self.schedule.describe(),
            "inf_mode": str(G.inf_mode),
            "stage": G.stage,
            "frozen": G.frozen,
        }


class Workbench:
    """Holds named presentations."""

    def __init__(self, max_entries: int = MAX_ENTRIES):
        self.max_entries = max_entries
        self._entries: Dict[str, WorkbenchEntry] = {}

    def build(self, name: str, spec_text: str, kind: ScheduleKind = ScheduleKind.round_robin, seed: int = 0, delay: int = 0, stages: Optional[int] = None) -> WorkbenchEntry:
        """
        Parse a spec and build a presentation of it under a new name.

        Args:
            name: Name to store the presentation under
            spec_text: Spec file contents
            kind: Growth schedule kind
            seed: Seed for shuffled schedules
            delay: Delay for delayed schedules
            stages: Stage to run the presentation to right away

        Raises:
            WorkbenchError: If the name is taken or the workbench is full
            SpecFileError: If the spec does not parse
        """
        if not name.strip():
            raise WorkbenchError("Presentation name must not be empty")
        if name in self._entries:
            raise WorkbenchError(f"Presentation '{name}' already exists")
        if len(self._entries) >= self.max_entries:
            raise WorkbenchError(f"Workbench is full ({self.max_entries} presentations); drop one first")
        doc = parse_spec_text(spec_text)
        schedule = GrowthSchedule(kind=kind, seed=seed, delay=delay)
        G = build_from_iso_type(doc.iso_type, schedule, doc.inf_mode)
        G.label = name
        if stages is not None:
            G.plan.advance_to(stages)
        entry = WorkbenchEntry(name, doc, schedule, G)
        self._entries[name] = entry
        logger.info(f"Workbench: built '{name}' ({doc.iso_type.describe()}, {schedule.describe()})")
        return entry

    def get(self, name: str) -> WorkbenchEntry:
        entry = self._entries.get(name)
        if entry is None:
            raise WorkbenchError(f"No presentation named '{name}'")
        return entry

    def list(self) -> List[Dict[str, Any]]:
        return [self._entries[name].summary() for name in sorted(self._entries)]

    def drop(self, name: str) -> bool:
        """Remove a presentation; False if the name is unknown."""
        if self._entries.pop(name, None) is None:
            logger.warning(f"Workbench: nothing to drop under '{name}'")
            return False
        logger.info(f"Workbench: dropped '{name}'")
        return True

    def freeze(self, name: str) -> WorkbenchEntry:
        entry = self.get(name)
        entry.presentation.freeze()
        return entry
