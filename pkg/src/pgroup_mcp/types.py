"""Type definitions and enums for pgroup-mcp."""

from enum import Enum


class Verdict(str, Enum):
    """Three-valued answer of a stagewise query."""

    yes = "yes"
    no = "no"
    unknown = "unknown"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


class CategoricityLevel(str, Enum):
    """Categoricity labels reported by the classifier."""

    computably_categorical = "computably_categorical"
    delta2_relatively = "delta2_relatively"
    delta2_open = "delta2_open"
    not_delta2_relatively = "not_delta2_relatively"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


class InfMode(str, Enum):
    """How the set of elements lying in infinite classes is presented."""

    computable = "computable"
    sigma1 = "sigma1"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


class FormulaShape(str, Enum):
    """Shape tag of a generated Scott formula."""

    orders_and_relations = "orders_and_relations"
    orders_relations_divisibility = "orders_relations_divisibility"
    pure_diagram = "pure_diagram"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


class ScheduleKind(str, Enum):
    """Interleaving policy for summand growth."""

    round_robin = "round_robin"
    shuffled = "shuffled"
    delayed = "delayed"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


class Command(str, Enum):
    """Report-producing subcommands of the command-line interface."""

    build = "build"
    transform = "transform"
    invariants = "invariants"
    classify = "classify"
    iso = "iso"
    scott_verify = "scott-verify"
    decompose = "decompose"

    def __str__(self) -> str:
        """Return the string value for easy use in messages."""
        return self.value


# Cardinal omega is written as None wherever a count may be infinite.
OMEGA_TEXT = "omega"
