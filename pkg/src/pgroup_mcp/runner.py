"""
Report-producing runs behind the command-line interface.

Every report starts with a header echoing the command and the parsed spec in
canonical form, followed by one fact per line. Identical configurations give
byte-identical reports.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .finite_core import SearchBoundError
from .invariants import classify_categoricity, divisible_approx, enumerate_character, isomorphic_by_ulm, ulm_invariants
from .limitwise import STATUS_INCONCLUSIVE, STATUS_MISMATCH, decompose_complement, delta2_isomorphism
from .presentations import GrowthSchedule, build_equivalence, build_from_iso_type, plan_character_census, reveal, transform_equiv_to_group
from .scott import formula_shape, policy_depth, truncate, verify_scott_family
from .spec_files import SpecDocument, SpecFileError, parse_spec, print_spec
from .types import Command, ScheduleKind

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SPEC = 2
EXIT_INCONCLUSIVE = 3
EXIT_VIOLATION = 4

# ids whose divisibility guesses are listed in invariants and decompose reports
SAMPLE_IDS = 8


class RunConfig(BaseModel):
    """Validated configuration of one run."""

    model_config = ConfigDict(frozen=True)

    command: Command
    spec: Path
    spec2: Optional[Path] = None
    stages: int = Field(default=40, gt=0)
    budget: int = Field(default=40, gt=0)
    prefix: int = Field(default=50, gt=0)
    length: int = Field(default=1, gt=0)
    depth: Optional[int] = Field(default=None, gt=0)
    copies: int = Field(default=2, gt=0)
    bound: Optional[int] = Field(default=None, gt=0)
    seed: int = 0
    schedule: ScheduleKind = ScheduleKind.round_robin
    schedule2: ScheduleKind = ScheduleKind.shuffled
    delay: int = Field(default=0, ge=0)
    plain_delta2: bool = False
    dump: bool = False
    out: Optional[Path] = None

    def growth_schedule(self, kind: ScheduleKind) -> GrowthSchedule:
        return GrowthSchedule(kind=kind, seed=self.seed, delay=self.delay)


@dataclass
class Report:
    """Lines of a report and the exit status that goes with them."""

    exit_code: int = EXIT_OK
    lines: List[str] = field(default_factory=list)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _header(config: RunConfig, docs: List[Tuple[str, SpecDocument]]) -> List[str]:
    lines = [f"command: {config.command}", f"seed: {config.seed}"]
    for name, doc in docs:
        lines.append(f"--- {name}")
        lines.extend(print_spec(doc))
    lines.append("--- result")
    return lines


def _run_build(config: RunConfig, doc: SpecDocument) -> Report:
    G = build_from_iso_type(doc.iso_type, config.growth_schedule(config.schedule), doc.inf_mode)
    decoder = reveal(G)
    events = G.plan.events_through(config.stages)
    lines = [f"label: {G.label}", f"stage: {config.stages}", f"events: {events}", f"universe_size: {G.p}^{events}"]
    for c, size in enumerate(decoder.component_sizes(config.stages)):
        lines.append(f"component {c} {decoder.part(c)} {size}")
    return Report(EXIT_OK, lines)


def _run_transform(config: RunConfig, doc: SpecDocument) -> Report:
    A = build_equivalence(doc.character(), doc.infinite_classes, doc.inf_mode, config.growth_schedule(config.schedule))
    G = transform_equiv_to_group(A, doc.p)
    census = enumerate_character(G, config.stages)
    planned = plan_character_census(A, config.stages)
    false_confirmations = sorted(e for e in census.entries if not doc.character().contains(*e))
    lines = [f"classes_open: {len(A.class_sizes(config.stages))}"]
    lines.extend(census.lines())
    lines.append(f"settled_entries: {len(planned)}")
    lines.append(f"mind_changes: {census.mind_changes}")
    lines.append(f"false_confirmations: {len(false_confirmations)}")
    lines.extend(f"false_entry {n} {k}" for n, k in false_confirmations)
    return Report(EXIT_VIOLATION if false_confirmations else EXIT_OK, lines)


def _run_invariants(config: RunConfig, doc: SpecDocument) -> Report:
    lines = ulm_invariants(doc.iso_type).lines()
    G = build_from_iso_type(doc.iso_type, config.growth_schedule(config.schedule), doc.inf_mode)
    census = enumerate_character(G, config.stages)
    lines.append("--- census")
    lines.extend(census.lines())
    lines.append(f"mind_changes: {census.mind_changes}")
    lines.append("--- divisible")
    for g in range(min(SAMPLE_IDS, G.universe_size(config.stages))):
        verdict = divisible_approx(G, g, config.stages)
        lines.append(f"divisible {g} {verdict.value} mind_changes {verdict.mind_changes}")
    return Report(EXIT_OK, lines)


def _run_classify(config: RunConfig, doc: SpecDocument) -> Report:
    return Report(EXIT_OK, classify_categoricity(doc.iso_type, plain_delta2=config.plain_delta2).lines())


def _run_iso(config: RunConfig, doc: SpecDocument, doc2: SpecDocument) -> Report:
    if not isomorphic_by_ulm(doc.iso_type, doc2.iso_type):
        return Report(EXIT_VIOLATION, ["ulm_agree: false", f"status: {STATUS_MISMATCH}"])
    G1 = build_from_iso_type(doc.iso_type, config.growth_schedule(config.schedule), doc.inf_mode)
    G2 = build_from_iso_type(doc2.iso_type, config.growth_schedule(config.schedule2), doc2.inf_mode)
    limit_map = delta2_isomorphism(G1, G2, config.budget, config.prefix)
    lines = ["ulm_agree: true"] + limit_map.lines()
    if config.dump:
        lines.append("--- dump")
        lines.extend(limit_map.dump_lines())
    if limit_map.status == STATUS_MISMATCH:
        return Report(EXIT_VIOLATION, lines)
    if limit_map.status == STATUS_INCONCLUSIVE:
        return Report(EXIT_INCONCLUSIVE, lines)
    return Report(EXIT_OK, lines)


def _run_scott_verify(config: RunConfig, doc: SpecDocument) -> Report:
    t = doc.iso_type
    depth = config.depth if config.depth is not None else policy_depth(t, config.copies)
    model = truncate(t, depth, config.copies)
    result = verify_scott_family(t, model, config.length, config.bound)
    lines = [f"shape: {formula_shape(t)}", f"truncation: {model.spec.describe()}"] + result.lines()
    return Report(EXIT_OK if result.clean else EXIT_VIOLATION, lines)


def _run_decompose(config: RunConfig, doc: SpecDocument) -> Report:
    G = build_from_iso_type(doc.iso_type, config.growth_schedule(config.schedule), doc.inf_mode)
    chain = decompose_complement(G, config.stages)
    lines = chain.lines()
    for x in range(min(SAMPLE_IDS, config.prefix)):
        lines.append(f"membership {x} {chain.membership(x)}")
    return Report(EXIT_OK, lines)


SINGLE_SPEC_RUNS: Dict[Command, Callable[[RunConfig, SpecDocument], Report]] = {
    Command.build: _run_build,
    Command.transform: _run_transform,
    Command.invariants: _run_invariants,
    Command.classify: _run_classify,
    Command.scott_verify: _run_scott_verify,
    Command.decompose: _run_decompose,
}


def _execute(config: RunConfig) -> Report:
    doc = parse_spec(config.spec)
    docs = [("spec", doc)]
    doc2: Optional[SpecDocument] = None
    if config.command == Command.iso:
        doc2 = parse_spec(config.spec2) if config.spec2 is not None else doc
        docs.append(("spec2", doc2))
    header = _header(config, docs)
    if doc2 is not None:
        body = _run_iso(config, doc, doc2)
    else:
        body = SINGLE_SPEC_RUNS[config.command](config, doc)
    return Report(body.exit_code, header + body.lines)


def run(config: RunConfig) -> Report:
    """
    Run one command and write its report.

    The report goes to config.out when set. Failures become a single
    `error: <kind>: <message>` line with a nonzero exit code.

    Args:
        config: Validated run configuration

    Returns:
        The report with its exit code
    """
    logger.info(f"Running {config.command} on {config.spec}")
    try:
        report = _execute(config)
    except SpecFileError as e:
        logger.error(f"Spec error: {e}")
        report = Report(EXIT_SPEC, [f"error: spec: {e}"])
    except SearchBoundError as e:
        logger.warning(f"Search bound reached: {e}")
        report = Report(EXIT_INCONCLUSIVE, [f"error: budget: {e}"])
    except Exception as e:
        logger.error(f"{config.command} failed: {e}")
        report = Report(EXIT_FAILURE, [f"error: {type(e).__name__}: {e}"])
    if config.out is not None:
        try:
            config.out.write_text(report.text(), encoding="utf-8")
        except Exception as e:
            logger.error(f"Could not write report to {config.out}: {e}")
            return Report(EXIT_FAILURE, [f"error: output: Could not write report to {config.out}: {e}"])
    return report
