"""Tools for building and querying named computable presentations."""

from typing import Annotated, Optional

from ..invariants import divisible_approx, enumerate_character
from ..limitwise import decompose_complement, delta2_isomorphism
from ..presentations import PresentationError
from ..server_registry import get_server_registry
from ..spec_files import SpecFileError
from ..types import ScheduleKind
from ..workbench import WorkbenchError

# ids listed with their divisibility guess
SAMPLE_IDS = 8


def register_presentation_tools() -> None:
    """Register all presentation tools with the server."""
    registry = get_server_registry()
    app = registry.app
    workbench = registry.workbench
    default_budget = registry.default_budget
    read_only = registry.read_only

    @app.tool(
        name="build_presentation",
        description="Build a computable presentation of a type and store it under a name.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": False,
            "readOnlyHint": False,
            "title": "Build Presentation",
            "parameters": {
                "name": "Name to store the presentation under. Must not be in use.",
                "spec_text": "The type as spec text; inf_mode selects a decidable or merely enumerated divisible part.",
                "schedule": "Growth schedule: round_robin, shuffled or delayed.",
                "seed": "Seed for the shuffled schedule.",
                "delay": "Stage before which the delayed schedule grows no class past its first element.",
                "stages": "Stage to run the presentation to immediately. Optional.",
            },
            "returns": "Returns a confirmation with the presentation's name, type, schedule and current stage.",
        },
        meta={"category": "presentations"},
    )
    def build_presentation(
        name: Annotated[str, "Name to store the presentation under"],
        spec_text: Annotated[str, "The type as spec text"],
        schedule: Annotated[str, "Growth schedule"] = ScheduleKind.round_robin.value,
        seed: Annotated[int, "Seed for shuffled schedules"] = 0,
        delay: Annotated[int, "Delay for delayed schedules"] = 0,
        stages: Annotated[Optional[int], "Stage to run to"] = None,
    ) -> str:
        """Build a computable presentation and store it under a name."""
        if read_only:
            return "Error: Server is running in read-only mode"
        try:
            entry = workbench.build(name, spec_text, ScheduleKind(schedule), seed, delay, stages)
            summary = entry.summary()
            return f"Built presentation '{name}'\ntype: {summary['type']}\nschedule: {summary['schedule']}\ninf_mode: {summary['inf_mode']}\nstage: {summary['stage']}"
        except SpecFileError as e:
            return f"Error parsing spec: {str(e)}"
        except WorkbenchError as e:
            return f"Error building presentation: {str(e)}"
        except Exception as e:
            return f"Unexpected error building presentation: {str(e)}"

    @app.tool(
        name="list_presentations",
        description="List the named presentations held by the server.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "List Presentations",
            "returns": "Returns one line per presentation with its name, type, schedule and stage, or a note that there are none.",
        },
        meta={"category": "presentations"},
    )
    def list_presentations() -> str:
        """List the named presentations."""
        try:
            entries = workbench.list()
            if not entries:
                return "No presentations built yet."
            result = f"Presentations ({len(entries)}):\n"
            for e in entries:
                frozen = ", frozen" if e["frozen"] else ""
                result += f"{e['name']}: {e['type']} [{e['schedule']}, {e['inf_mode']}] stage {e['stage']}{frozen}\n"
            return result
        except Exception as e:
            return f"Unexpected error listing presentations: {str(e)}"

    @app.tool(
        name="drop_presentation",
        description="Remove a named presentation.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": False,
            "title": "Drop Presentation",
            "parameters": {
                "name": "Name of the presentation to remove.",
            },
            "returns": "Returns a confirmation, or a message that no presentation has that name.",
        },
        meta={"category": "presentations"},
    )
    def drop_presentation(name: Annotated[str, "Name of the presentation to remove"]) -> str:
        """Remove a named presentation."""
        if read_only:
            return "Error: Server is running in read-only mode"
        try:
            if workbench.drop(name):
                return f"Dropped presentation '{name}'"
            return f"No presentation named '{name}'"
        except Exception as e:
            return f"Unexpected error dropping presentation: {str(e)}"

    @app.tool(
        name="presentation_invariants",
        description="Run stagewise invariant queries on a named presentation: character census and divisibility guesses.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Presentation Invariants",
            "parameters": {
                "name": "Name of the presentation.",
                "budget": "Stage budget for the queries. Defaults to PGL_DEFAULT_BUDGET.",
            },
            "returns": "Returns confirmed character entries as 'entry n k' lines, the census mind-change count, and divisibility guesses for the first element ids.",
        },
        meta={"category": "presentations"},
    )
    def presentation_invariants(
        name: Annotated[str, "Name of the presentation"],
        budget: Annotated[Optional[int], "Stage budget"] = None,
    ) -> str:
        """Run stagewise invariant queries on a named presentation."""
        try:
            G = workbench.get(name).presentation
            stages = budget if budget is not None else default_budget
            census = enumerate_character(G, stages)
            lines = census.lines() + [f"mind_changes: {census.mind_changes}"]
            for g in range(min(SAMPLE_IDS, G.universe_size(stages))):
                verdict = divisible_approx(G, g, stages)
                lines.append(f"divisible {g} {verdict.value} mind_changes {verdict.mind_changes}")
            return "\n".join(lines)
        except WorkbenchError as e:
            return f"Error: {str(e)}"
        except PresentationError as e:
            return f"Error querying presentation: {str(e)}"
        except Exception as e:
            return f"Unexpected error querying presentation: {str(e)}"

    @app.tool(
        name="decompose_presentation",
        description="Grow a complement of the divisible part of a named presentation.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Decompose Presentation",
            "parameters": {
                "name": "Name of the presentation; its divisible part must be decidable (inf_mode computable).",
                "stage": "Last stage of the chain. Defaults to PGL_DEFAULT_BUDGET.",
                "id_limit": "Only element ids below this bound are considered. Defaults to the whole stage group.",
            },
            "returns": "Returns the growth steps, the cyclic decomposition of the complement and its size.",
        },
        meta={"category": "presentations"},
    )
    def decompose_presentation(
        name: Annotated[str, "Name of the presentation"],
        stage: Annotated[Optional[int], "Last stage of the chain"] = None,
        id_limit: Annotated[Optional[int], "Bound on element ids considered"] = None,
    ) -> str:
        """Grow a complement of the divisible part."""
        try:
            G = workbench.get(name).presentation
            chain = decompose_complement(G, stage if stage is not None else default_budget, id_limit)
            return "\n".join(chain.lines())
        except WorkbenchError as e:
            return f"Error: {str(e)}"
        except Exception as e:
            return f"Error decomposing presentation: {str(e)}"

    @app.tool(
        name="delta2_isomorphism",
        description="Approximate an isomorphism between two named presentations stage by stage, counting mind changes.",
        tags={"public", "presentations"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Delta-0-2 Isomorphism",
            "parameters": {
                "first": "Name of the source presentation.",
                "second": "Name of the target presentation.",
                "budget": "Last stage to run. Defaults to PGL_DEFAULT_BUDGET.",
                "prefix": "Number of leading element ids tracked.",
            },
            "returns": "Returns the status (stabilized, inconclusive or mismatch), the stabilized prefix length and mind-change counts.",
        },
        meta={"category": "presentations"},
    )
    def delta2_isomorphism_tool(
        first: Annotated[str, "Name of the source presentation"],
        second: Annotated[str, "Name of the target presentation"],
        budget: Annotated[Optional[int], "Last stage to run"] = None,
        prefix: Annotated[int, "Number of leading element ids tracked"] = 50,
    ) -> str:
        """Approximate an isomorphism between two named presentations."""
        try:
            G1 = workbench.get(first).presentation
            G2 = workbench.get(second).presentation
            limit_map = delta2_isomorphism(G1, G2, budget if budget is not None else default_budget, prefix)
            return "\n".join(limit_map.lines())
        except WorkbenchError as e:
            return f"Error: {str(e)}"
        except Exception as e:
            return f"Error approximating isomorphism: {str(e)}"
