"""Tools answering questions about isomorphism types given as spec text."""

from typing import Annotated

from ..finite_core import SearchBoundError, brute_force_isomorphic
from ..invariants import classify_categoricity, isomorphic_by_ulm, ulm_invariants
from ..server_registry import get_server_registry
from ..spec_files import SpecFileError, parse_spec_text


def register_analysis_tools() -> None:
    """Register all type-analysis tools with the server."""
    registry = get_server_registry()
    app = registry.app

    @app.tool(
        name="classify_type",
        description="Classify the effective categoricity of an Abelian p-group type of length at most omega.",
        tags={"public", "analysis"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Classify Type",
            "parameters": {
                "spec_text": "The type as spec text, one 'key: value' per line (p, divisible_rank, cyclic, cyclic_infinite, sfunction, ...).",
                "plain_delta2": "Ask for plain instead of relative Delta-0-2 categoricity; finite nonzero rank with unbounded reduced part is then reported as open.",
            },
            "returns": "Returns the categoricity level on the first line, followed by the deciding clause, the relative Delta-0-3 flag, any open problem and notes.",
        },
        meta={"category": "analysis"},
    )
    def classify_type(
        spec_text: Annotated[str, "The type as spec text"],
        plain_delta2: Annotated[bool, "Ask for plain Delta-0-2 status"] = False,
    ) -> str:
        """Classify the effective categoricity of an Abelian p-group type."""
        try:
            doc = parse_spec_text(spec_text)
            return "\n".join(classify_categoricity(doc.iso_type, plain_delta2=plain_delta2).lines())
        except SpecFileError as e:
            return f"Error parsing spec: {str(e)}"
        except Exception as e:
            return f"Unexpected error classifying type: {str(e)}"

    @app.tool(
        name="ulm_invariants",
        description="Compute the Ulm invariants and divisible rank of a type.",
        tags={"public", "analysis"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Ulm Invariants",
            "parameters": {
                "spec_text": "The type as spec text.",
            },
            "returns": "Returns the divisible rank and one 'u(n): count' line per nonzero Ulm invariant, with a tail line for staircase types.",
        },
        meta={"category": "analysis"},
    )
    def ulm_invariants_tool(spec_text: Annotated[str, "The type as spec text"]) -> str:
        """Compute the Ulm invariants of a type."""
        try:
            doc = parse_spec_text(spec_text)
            return "\n".join(ulm_invariants(doc.iso_type).lines())
        except SpecFileError as e:
            return f"Error parsing spec: {str(e)}"
        except Exception as e:
            return f"Unexpected error computing Ulm invariants: {str(e)}"

    @app.tool(
        name="compare_types",
        description="Decide whether two types are isomorphic by comparing Ulm invariants; finite groups are cross-checked by brute force.",
        tags={"public", "analysis"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Compare Types",
            "parameters": {
                "spec_text": "The first type as spec text.",
                "other_spec_text": "The second type as spec text.",
            },
            "returns": "Returns 'isomorphic: true' or 'isomorphic: false', plus a brute-force line when both types are finite and small enough.",
        },
        meta={"category": "analysis"},
    )
    def compare_types(
        spec_text: Annotated[str, "The first type as spec text"],
        other_spec_text: Annotated[str, "The second type as spec text"],
    ) -> str:
        """Decide whether two types are isomorphic."""
        try:
            a = parse_spec_text(spec_text).iso_type
            b = parse_spec_text(other_spec_text).iso_type
            lines = [f"isomorphic: {str(isomorphic_by_ulm(a, b)).lower()}"]
            if a.divisible_rank == 0 and b.divisible_rank == 0 and a.reduced_is_finite and b.reduced_is_finite:
                try:
                    agree = brute_force_isomorphic(a.finite_part_spec(), b.finite_part_spec())
                    lines.append(f"brute_force: {str(agree).lower()}")
                except SearchBoundError as e:
                    lines.append(f"brute_force: skipped ({str(e)})")
            return "\n".join(lines)
        except SpecFileError as e:
            return f"Error parsing spec: {str(e)}"
        except Exception as e:
            return f"Unexpected error comparing types: {str(e)}"
