"""Tools for Scott-family checks."""

from typing import Annotated, Optional

from ..finite_core import SearchBoundError
from ..scott import TruncationPolicyError, UncoveredClassError, formula_shape, policy_depth, truncate, verify_scott_family
from ..server_registry import get_server_registry
from ..spec_files import SpecFileError, parse_spec_text


def register_scott_tools() -> None:
    """Register all Scott-family tools with the server."""
    registry = get_server_registry()
    app = registry.app

    @app.tool(
        name="verify_scott_family",
        description="Check on a finite truncation that tuples with equal generated Scott formulas are automorphic.",
        tags={"public", "scott"},
        annotations={
            "idempotentHint": True,
            "readOnlyHint": True,
            "title": "Verify Scott Family",
            "parameters": {
                "spec_text": "The type as spec text. Types outside the covered classes are rejected.",
                "tuple_length": "Length of the tuples compared.",
                "depth": "Divisible depth of the truncation. Defaults to the shallowest depth the truncation policy allows.",
                "copies": "Copies of each infinitely repeated summand in the truncation.",
                "bound": "Largest number of tuples to enumerate. Defaults to PGL_MAX_ORDER.",
            },
            "returns": "Returns the formula shape, the truncation, the number of tuples and formula classes, and one line per violation.",
        },
        meta={"category": "scott"},
    )
    def verify_scott_family_tool(
        spec_text: Annotated[str, "The type as spec text"],
        tuple_length: Annotated[int, "Tuple length"] = 1,
        depth: Annotated[Optional[int], "Divisible depth of the truncation"] = None,
        copies: Annotated[int, "Copies of each repeated summand"] = 2,
        bound: Annotated[Optional[int], "Largest number of tuples to enumerate"] = None,
    ) -> str:
        """Check a generated Scott family on a finite truncation."""
        try:
            t = parse_spec_text(spec_text).iso_type
            model = truncate(t, depth if depth is not None else policy_depth(t, copies), copies)
            report = verify_scott_family(t, model, tuple_length, bound)
            return "\n".join([f"shape: {formula_shape(t)}", f"truncation: {model.spec.describe()}"] + report.lines())
        except SpecFileError as e:
            return f"Error parsing spec: {str(e)}"
        except (UncoveredClassError, TruncationPolicyError) as e:
            return f"Error: {str(e)}"
        except SearchBoundError as e:
            return f"Error: search bound reached: {str(e)}"
        except Exception as e:
            return f"Unexpected error verifying Scott family: {str(e)}"
