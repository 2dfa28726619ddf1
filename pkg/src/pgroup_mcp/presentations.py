"""
Staged computable presentations.

An equivalence structure and the group built from it share one GrowthPlan:
at every stage the plan performs at most one growth event, either adding an
element to an existing class or opening the next class. In the group picture
a class of current size k is a cyclic component Z(p^k), and a class that grows
forever is a copy of Z(p^inf). Element ids are assigned so that the elements
of a stage always form an initial segment 0 .. p^(events) - 1.
"""

import bisect
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field
from sympy import integer_log, isprime

from .finite_core import Element, FiniteGroupSpec
from .sfunction import SFunction
from .types import OMEGA_TEXT, InfMode, ScheduleKind, Verdict

logger = logging.getLogger(__name__)

PART_DIVISIBLE = "divisible"
PART_HOMOGENEOUS = "homogeneous"
PART_FINITE = "finite"

# stages after opening before a sigma1 structure announces a class as infinite
ANNOUNCE_DELAY = 8

Coordinates = Dict[int, Fraction]


class CharacterError(Exception):
    """Exception raised for invalid characters."""

    pass


class PresentationError(Exception):
    """Exception raised for operations on elements that are not materialized."""

    pass


class FrozenPresentationError(PresentationError):
    """Exception raised when a frozen presentation is asked for a later stage."""

    pass


class BuildError(Exception):
    """Exception raised when a requested structure cannot be built."""

    pass


def _merge_counts(pairs: Iterable[Tuple[int, int]], skip: FrozenSet[int]) -> Tuple[Tuple[int, int], ...]:
    counts: Dict[int, int] = {}
    for n, k in pairs:
        if n < 1 or k < 0:
            raise CharacterError(f"Invalid multiplicity entry {n}:{k}")
        if n in skip or k == 0:
            continue
        counts[n] = counts.get(n, 0) + k
    return tuple(sorted(counts.items()))


def format_rank(rank: Optional[int]) -> str:
    return OMEGA_TEXT if rank is None else str(rank)


@dataclass(frozen=True)
class Character:
    """
    A set of pairs (n, k) closed downward in k.

    Finite multiplicities, exponents of infinite multiplicity and the limits
    of an optional s-function contribute together.
    """

    finite: Tuple[Tuple[int, int], ...] = ()
    infinite: FrozenSet[int] = frozenset()
    sfunction: Optional[SFunction] = None

    def __post_init__(self) -> None:
        infinite = frozenset(int(n) for n in self.infinite)
        for n in infinite:
            if n < 1:
                raise CharacterError(f"Infinite multiplicity exponent must be positive, got {n}")
        object.__setattr__(self, "infinite", infinite)
        object.__setattr__(self, "finite", _merge_counts(self.finite, infinite))

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[int, int]]) -> "Character":
        """
        Build a finite character from explicit (n, k) entries.

        Raises:
            CharacterError: If an entry is invalid or downward closure fails
        """
        pairs = set((int(n), int(k)) for n, k in entries)
        for n, k in sorted(pairs):
            if n < 1 or k < 1:
                raise CharacterError(f"Entry ({n},{k}) must have n >= 1 and k >= 1")
            if k > 1 and (n, k - 1) not in pairs:
                raise CharacterError(f"Entry ({n},{k}) present but ({n},{k - 1}) missing: not downward closed")
        counts: Dict[int, int] = {}
        for n, k in pairs:
            counts[n] = max(counts.get(n, 0), k)
        return cls(finite=tuple(counts.items()))

    def multiplicity(self, n: int) -> Optional[int]:
        """Multiplicity of n, None when infinite."""
        if n in self.infinite:
            return None
        count = dict(self.finite).get(n, 0)
        if self.sfunction is not None and n >= 1:
            count += self.sfunction.limit_multiplicity(n)
        return count

    def contains(self, n: int, k: int) -> bool:
        if n < 1 or k < 1:
            return False
        m = self.multiplicity(n)
        return m is None or m >= k

    @property
    def is_bounded(self) -> bool:
        return self.sfunction is None or self.sfunction.row_count is not None

    def max_exponent(self) -> Optional[int]:
        """Largest exponent with nonzero multiplicity, None when unbounded."""
        if not self.is_bounded:
            return None
        candidates = [n for n, _ in self.finite] + list(self.infinite)
        if self.sfunction is not None:
            candidates += self.sfunction.limits()
        return max(candidates, default=0)

    def entries_up_to(self, n_max: int, k_max: int) -> FrozenSet[Tuple[int, int]]:
        return frozenset((n, k) for n in range(1, n_max + 1) for k in range(1, k_max + 1) if self.contains(n, k))

    @property
    def descriptor(self) -> str:
        if self.sfunction is not None:
            return f"s-function ({self.sfunction.describe()})"
        if self.infinite:
            return f"infinite multiplicities up to {max(self.infinite)}"
        return "finite set"


@dataclass(frozen=True)
class IsoTypeSpec:
    """Isomorphism type: divisible rank (None for omega) plus a direct sum of cyclic groups."""

    p: int
    divisible_rank: Optional[int] = 0
    cyclic_finite: Tuple[Tuple[int, int], ...] = ()
    cyclic_infinite: FrozenSet[int] = frozenset()
    sfunction: Optional[SFunction] = None
    reduced_computable: bool = True

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not isprime(self.p):
            raise CharacterError(f"p must be prime, got {self.p}")
        if self.divisible_rank is not None and self.divisible_rank < 0:
            raise CharacterError(f"Divisible rank must be nonnegative, got {self.divisible_rank}")
        infinite = frozenset(int(n) for n in self.cyclic_infinite)
        for n in infinite:
            if n < 1:
                raise CharacterError(f"Cyclic exponents must be positive, got {n}")
        object.__setattr__(self, "cyclic_infinite", infinite)
        object.__setattr__(self, "cyclic_finite", _merge_counts(self.cyclic_finite, infinite))

    @classmethod
    def from_finite(cls, spec: FiniteGroupSpec) -> "IsoTypeSpec":
        counts: Dict[int, int] = {}
        for n in spec.exponents:
            counts[n] = counts.get(n, 0) + 1
        return cls(p=spec.p, cyclic_finite=tuple(counts.items()))

    def character(self) -> Character:
        return Character(finite=self.cyclic_finite, infinite=self.cyclic_infinite, sfunction=self.sfunction)

    @property
    def has_unbounded_period(self) -> bool:
        return self.sfunction is not None and self.sfunction.row_count is None

    @property
    def reduced_is_finite(self) -> bool:
        return not self.cyclic_infinite and not self.has_unbounded_period

    def finite_summands(self) -> List[int]:
        """Exponents of the finitely many cyclic summands outside the infinite multiplicities."""
        exponents = [n for n, k in self.cyclic_finite for _ in range(k)]
        if self.sfunction is not None and self.sfunction.row_count is not None:
            exponents += [m for m in self.sfunction.limits() if m >= 1 and m not in self.cyclic_infinite]
        return sorted(exponents, reverse=True)

    def finite_part_spec(self) -> FiniteGroupSpec:
        return FiniteGroupSpec(self.p, tuple(self.finite_summands()))

    def describe(self) -> str:
        parts = []
        if self.divisible_rank != 0:
            parts.append(f"{format_rank(self.divisible_rank)} x Z({self.p}^inf)")
        for m in sorted(self.cyclic_infinite):
            parts.append(f"omega x Z({self.p}^{m})")
        for n, k in self.cyclic_finite:
            parts.append(f"{k} x Z({self.p}^{n})")
        if self.sfunction is not None:
            parts.append(f"s-function summands ({self.sfunction.describe()})")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ClassSlot:
    """A class waiting to be opened: its part of the group and its target size."""

    part: str
    target: Optional[int] = None
    row: Optional[int] = None


class GrowthSchedule(BaseModel):
    """How growth events are interleaved across classes."""

    model_config = ConfigDict(frozen=True)

    kind: ScheduleKind = ScheduleKind.round_robin
    seed: int = 0
    delay: int = Field(default=0, ge=0)

    def describe(self) -> str:
        if self.kind == ScheduleKind.shuffled:
            return f"{self.kind} seed={self.seed}"
        if self.kind == ScheduleKind.delayed:
            return f"{self.kind} delay={self.delay}"
        return str(self.kind)


def _round_robin(streams: Sequence[Iterator[ClassSlot]]) -> Iterator[ClassSlot]:
    active = list(streams)
    while active:
        for stream in list(active):
            try:
                yield next(stream)
            except StopIteration:
                active.remove(stream)


def slot_stream(finite: Sequence[Tuple[int, int]], infinite: Iterable[int], sfunction: Optional[SFunction], infinite_classes: Optional[int]) -> Iterator[ClassSlot]:
    """
    Order in which classes are opened.

    Finitely many fixed classes come first, largest first, then the finite
    number of infinite classes. Everything that repeats forever is merged
    round-robin afterwards.
    """
    for n, count in sorted(finite, reverse=True):
        for _ in range(count):
            yield ClassSlot(PART_FINITE, n)
    if infinite_classes is not None:
        for _ in range(infinite_classes):
            yield ClassSlot(PART_DIVISIBLE)
    streams: List[Iterator[ClassSlot]] = []
    if infinite_classes is None:
        streams.append(itertools.repeat(ClassSlot(PART_DIVISIBLE)))
    for m in sorted(infinite):
        streams.append(itertools.repeat(ClassSlot(PART_HOMOGENEOUS, m)))
    if sfunction is not None:
        rows: Iterable[int] = itertools.count() if sfunction.row_count is None else range(sfunction.row_count)
        streams.append(ClassSlot(PART_FINITE, row=i) for i in rows if sfunction.limit(i) >= 1)
    yield from _round_robin(streams)


class GrowthPlan:
    """Stage-by-stage record of which class grows."""

    def __init__(self, slots: Iterator[ClassSlot], sfunction: Optional[SFunction] = None, schedule: Optional[GrowthSchedule] = None):
        self.schedule = schedule or GrowthSchedule()
        self.sfunction = sfunction
        self.classes: List[ClassSlot] = []
        self.class_events: List[List[int]] = []
        self.events: List[int] = []
        self.event_stages: List[int] = []
        self.openings: List[int] = []
        self.stage = -1
        self.frozen = False
        self._slots = slots
        self._pending: Optional[ClassSlot] = None
        self._exhausted = False
        self._cursor = 0
        self._rng = random.Random(self.schedule.seed)

    def _peek(self) -> Optional[ClassSlot]:
        if self._pending is None and not self._exhausted:
            self._pending = next(self._slots, None)
            self._exhausted = self._pending is None
        return self._pending

    def slot_target(self, slot: ClassSlot, stage: int) -> Optional[int]:
        if slot.row is not None and self.sfunction is not None:
            return self.sfunction.value(slot.row, stage)
        return slot.target

    def _hungry(self, c: int, stage: int) -> bool:
        size = len(self.class_events[c])
        if self.schedule.kind == ScheduleKind.delayed and stage < self.schedule.delay and size >= 1:
            return False
        target = self.slot_target(self.classes[c], stage)
        return target is None or size < target

    def _can_open(self, stage: int) -> bool:
        slot = self._peek()
        if slot is None:
            return False
        target = self.slot_target(slot, stage)
        return target is None or target >= 1

    def _record(self, c: int, stage: int) -> None:
        j = len(self.events)
        self.events.append(c)
        self.event_stages.append(stage)
        self.class_events[c].append(j)

    def _step(self, stage: int) -> None:
        new = len(self.classes)
        available = [c for c in range(new) if self._hungry(c, stage)]
        if self._can_open(stage):
            available.append(new)
        if not available:
            return
        if self.schedule.kind == ScheduleKind.shuffled:
            choice = self._rng.choice(available)
        else:
            allowed = set(available)
            positions = new + 1
            choice = next((self._cursor + k) % positions for k in range(positions) if (self._cursor + k) % positions in allowed)
        if choice == new:
            slot = self._peek()
            assert slot is not None
            self._pending = None
            self.classes.append(slot)
            self.class_events.append([])
            self.openings.append(len(self.events))
            self._cursor = 0
            logger.debug(f"Stage {stage}: opened class {new} ({slot.part})")
        else:
            self._cursor = choice + 1
        self._record(choice, stage)

    def advance_to(self, stage: int) -> None:
        """
        Run the plan through the given stage.

        Raises:
            FrozenPresentationError: If the plan is frozen and the stage is not yet materialized
        """
        if stage <= self.stage:
            return
        if self.frozen:
            raise FrozenPresentationError(f"Presentation frozen at stage {self.stage}, stage {stage} requested")
        while self.stage < stage:
            self.stage += 1
            self._step(self.stage)

    def events_through(self, stage: int) -> int:
        """Number of growth events executed at stages <= stage."""
        self.advance_to(stage)
        return bisect.bisect_right(self.event_stages, stage)

    def size_before(self, c: int, event: int) -> int:
        """Size of class c just before the given event."""
        return bisect.bisect_left(self.class_events[c], event)

    def classes_open_at(self, event: int) -> int:
        """Number of classes opened at or before the given event."""
        return bisect.bisect_right(self.openings, event)

    def opening_stage(self, c: int) -> int:
        return self.event_stages[self.class_events[c][0]]

    def finished(self) -> bool:
        """True when no class will ever open or grow again."""
        if self._peek() is not None:
            return False
        for c, slot in enumerate(self.classes):
            target = slot.target if slot.row is None or self.sfunction is None else self.sfunction.limit(slot.row)
            if target is None or len(self.class_events[c]) < target:
                return False
        return True


def _plan(finite: Sequence[Tuple[int, int]], infinite: Iterable[int], sfunction: Optional[SFunction], infinite_classes: Optional[int], schedule: Optional[GrowthSchedule]) -> GrowthPlan:
    return GrowthPlan(slot_stream(finite, infinite, sfunction, infinite_classes), sfunction=sfunction, schedule=schedule)


class EquivalenceStructure:
    """A computable equivalence structure on the naturals, grown stage by stage."""

    def __init__(self, plan: GrowthPlan, character: Character, infinite_classes: Optional[int], inf_mode: InfMode = InfMode.computable, announce_delay: int = ANNOUNCE_DELAY):
        self.plan = plan
        self.character = character
        self.infinite_classes = infinite_classes
        self.inf_mode = inf_mode
        self.announce_delay = announce_delay

    def universe_size(self, stage: int) -> int:
        return self.plan.events_through(stage)

    def _check(self, a: int, stage: int) -> None:
        if a < 0 or a >= self.universe_size(stage):
            raise PresentationError(f"Element {a} not present at stage {stage}")

    def class_of(self, a: int, stage: int) -> int:
        self._check(a, stage)
        return self.plan.events[a]

    def related(self, a: int, b: int, stage: int) -> bool:
        """E(a, b) as decided at the given stage."""
        return self.class_of(a, stage) == self.class_of(b, stage)

    def representative(self, c: int) -> int:
        """Least element of class c."""
        return self.plan.class_events[c][0]

    def class_sizes(self, stage: int) -> List[int]:
        n = self.universe_size(stage)
        return [self.plan.size_before(c, n) for c in range(self.plan.classes_open_at(n - 1))] if n else []

    def infinite_class_verdict(self, c: int, stage: int) -> Verdict:
        """Whether class c is infinite, as far as the structure reveals at this stage."""
        infinite = self.plan.classes[c].part == PART_DIVISIBLE
        if self.inf_mode == InfMode.computable:
            return Verdict.yes if infinite else Verdict.no
        if infinite and stage >= self.plan.opening_stage(c) + self.announce_delay:
            return Verdict.yes
        return Verdict.unknown


class StagedPresentation:
    """
    A computable group given by (p, universe_size, add).

    Event j owns the ids p^j .. p^(j+1) - 1. Inside that block an id is a
    mixed-radix number over the components open at event j, most significant
    first; the component that grows contributes only its new elements.
    """

    def __init__(self, p: int, plan: GrowthPlan, inf_mode: InfMode = InfMode.computable, announce_delay: int = ANNOUNCE_DELAY, label: str = ""):
        self.p = p
        self.plan = plan
        self.inf_mode = inf_mode
        self.announce_delay = announce_delay
        self.label = label

    @property
    def stage(self) -> int:
        return self.plan.stage

    @property
    def frozen(self) -> bool:
        return self.plan.frozen

    def freeze(self) -> None:
        self.plan.frozen = True
        logger.info(f"Presentation '{self.label}' frozen at stage {self.plan.stage}")

    def universe_size(self, stage: int) -> int:
        return int(self.p ** self.plan.events_through(stage))

    def materialized_size(self) -> int:
        return int(self.p ** len(self.plan.events))

    def add(self, a: int, b: int) -> int:
        """
        Group operation on element ids.

        Raises:
            PresentationError: If either id is not materialized yet
        """
        x, y = self._decode(a), self._decode(b)
        total = {c: (x.get(c, Fraction(0)) + y.get(c, Fraction(0))) % 1 for c in set(x) | set(y)}
        return self._encode(total)

    def divisible_verdict(self, g: int, stage: int) -> Verdict:
        """Membership of g in the divisible part, as the plan reveals it at this stage."""
        self.plan.advance_to(stage)
        coords = self._decode(g)
        pending = False
        for c in coords:
            if self.plan.classes[c].part != PART_DIVISIBLE:
                return Verdict.no if self.inf_mode == InfMode.computable else Verdict.unknown
            if self.inf_mode == InfMode.sigma1 and stage < self.plan.opening_stage(c) + self.announce_delay:
                pending = True
        return Verdict.unknown if pending else Verdict.yes

    def _radices(self, j: int) -> Tuple[int, List[int], List[int]]:
        grown = self.plan.events[j]
        count = self.plan.classes_open_at(j)
        sizes = [self.plan.size_before(c, j) for c in range(count)]
        radices = [self.p**e * (self.p - 1) if c == grown else self.p**e for c, e in enumerate(sizes)]
        return grown, sizes, radices

    def _decode(self, g: int) -> Coordinates:
        p = self.p
        if g < 0 or g >= self.materialized_size():
            raise PresentationError(f"Element {g} is not materialized (stage {self.plan.stage})")
        if g == 0:
            return {}
        j = int(integer_log(g, p)[0])
        rank = g - p**j
        grown, sizes, radices = self._radices(j)
        digits = [0] * len(radices)
        for idx in reversed(range(len(radices))):
            rank, digits[idx] = divmod(rank, radices[idx])
        coords: Coordinates = {}
        for c, (digit, e) in enumerate(zip(digits, sizes)):
            if c == grown:
                u = (digit // (p - 1)) * p + digit % (p - 1) + 1
                coords[c] = Fraction(u, p ** (e + 1))
            elif digit:
                coords[c] = Fraction(digit, p**e)
        return coords

    def _encode(self, coords: Mapping[int, Fraction]) -> int:
        p = self.p
        reduced = {c: Fraction(v) % 1 for c, v in coords.items() if Fraction(v) % 1}
        if not reduced:
            return 0
        j = -1
        for c, v in reduced.items():
            depth, exact = integer_log(v.denominator, p)
            if not exact:
                raise PresentationError(f"Coordinate {v} is not a p-power fraction")
            if c >= len(self.plan.classes) or int(depth) > len(self.plan.class_events[c]):
                raise PresentationError(f"Coordinate {v} on component {c} is not materialized")
            j = max(j, self.plan.class_events[c][int(depth) - 1])
        grown, sizes, radices = self._radices(j)
        rank = 0
        for c, (e, radix) in enumerate(zip(sizes, radices)):
            v = reduced.get(c, Fraction(0))
            if c == grown:
                u = int(v * p ** (e + 1))
                digit = (u // p) * (p - 1) + u % p - 1
            else:
                digit = int(v * p**e)
            rank = rank * radix + digit
        return int(p**j + rank)


@dataclass(frozen=True)
class StageView:
    """The finite group G^s with its embedding into the presentation."""

    stage: int
    spec: FiniteGroupSpec
    components: Tuple[int, ...]
    parts: Tuple[str, ...]
    presentation: StagedPresentation = field(compare=False, repr=False)

    @property
    def universe_size(self) -> int:
        return self.spec.order

    def embed(self, g: int) -> Element:
        """Coordinates of element id g inside this stage."""
        if g >= self.universe_size:
            raise PresentationError(f"Element {g} is not present at stage {self.stage}")
        coords = self.presentation._decode(g)
        return tuple(int(coords.get(c, Fraction(0)) * self.presentation.p**e) for c, e in zip(self.components, self.spec.exponents))

    def id_of(self, element: Sequence[int]) -> int:
        checked = self.spec.check(element)
        p = self.presentation.p
        return self.presentation._encode({c: Fraction(x, p**e) for c, x, e in zip(self.components, checked, self.spec.exponents) if x})

    def lift(self, element: Sequence[int], later: "StageView") -> Element:
        """Image of an element of this stage in a later stage."""
        return later.embed(self.id_of(element))

    def part_of(self, index: int) -> str:
        return self.parts[index]


def stage_view(G: StagedPresentation, stage: int) -> StageView:
    """
    The finite group materialized by the given stage.

    Raises:
        FrozenPresentationError: If the stage is beyond a frozen presentation
    """
    n = G.plan.events_through(stage)
    count = G.plan.classes_open_at(n - 1) if n else 0
    components = tuple(range(count))
    exponents = tuple(G.plan.size_before(c, n) for c in components)
    parts = tuple(G.plan.classes[c].part for c in components)
    return StageView(stage, FiniteGroupSpec(G.p, exponents), components, parts, G)


class Decoder:
    """Full view of a presentation's summand structure, for tests and reports only."""

    def __init__(self, G: StagedPresentation):
        self._G = G

    def coordinates(self, g: int) -> Coordinates:
        return dict(self._G._decode(g))

    def id_of(self, coords: Mapping[int, Fraction]) -> int:
        return self._G._encode(coords)

    def part(self, c: int) -> str:
        return self._G.plan.classes[c].part

    def component_sizes(self, stage: int) -> List[int]:
        n = self._G.plan.events_through(stage)
        count = self._G.plan.classes_open_at(n - 1) if n else 0
        return [self._G.plan.size_before(c, n) for c in range(count)]

    def divisible_components(self, stage: int) -> List[int]:
        return [c for c in range(len(self.component_sizes(stage))) if self.part(c) == PART_DIVISIBLE]

    def in_divisible_part(self, g: int) -> bool:
        return all(self.part(c) == PART_DIVISIBLE for c in self.coordinates(g))

    def settled_finite_spec(self, stage: int) -> FiniteGroupSpec:
        """Reduced components visible at this stage, sorted descending."""
        sizes = self.component_sizes(stage)
        return FiniteGroupSpec(self._G.p, tuple(sorted((e for c, e in enumerate(sizes) if self.part(c) != PART_DIVISIBLE), reverse=True)))


def reveal(G: StagedPresentation) -> Decoder:
    return Decoder(G)


def build_equivalence(character: Character, infinite_classes: Optional[int], inf_mode: InfMode = InfMode.computable, schedule: Optional[GrowthSchedule] = None) -> EquivalenceStructure:
    """
    Build a computable equivalence structure with the given character.

    Args:
        character: Sizes of the finite classes
        infinite_classes: Number of infinite classes, None for omega
        inf_mode: Whether membership in an infinite class is decidable or only enumerated
        schedule: Growth schedule

    Raises:
        BuildError: If an unbounded character with finitely many infinite classes is
            requested in computable mode without an s1-function witness
    """
    if not character.is_bounded and inf_mode == InfMode.computable and infinite_classes is not None:
        if character.sfunction is None or not character.sfunction.is_s1():
            raise BuildError("Unbounded character with finitely many infinite classes needs an s1-function in computable mode")
    plan = _plan(character.finite, character.infinite, character.sfunction, infinite_classes, schedule)
    logger.info(f"Built equivalence structure: {character.descriptor}, {format_rank(infinite_classes)} infinite classes, {inf_mode}")
    return EquivalenceStructure(plan, character, infinite_classes, inf_mode)


def transform_equiv_to_group(A: EquivalenceStructure, p: int) -> StagedPresentation:
    """The group whose k-element classes become Z(p^k) summands and infinite classes Z(p^inf)."""
    if not isprime(p):
        raise BuildError(f"p must be prime, got {p}")
    return StagedPresentation(p, A.plan, A.inf_mode, A.announce_delay, label="transform")


def build_from_iso_type(t: IsoTypeSpec, schedule: Optional[GrowthSchedule] = None, inf_mode: InfMode = InfMode.computable) -> StagedPresentation:
    """Build a presentation of t directly."""
    plan = _plan(t.cyclic_finite, t.cyclic_infinite, t.sfunction, t.divisible_rank, schedule)
    label = f"{t.describe()} [{(schedule or GrowthSchedule()).describe()}]"
    logger.info(f"Building presentation of {label}")
    return StagedPresentation(t.p, plan, inf_mode, label=label)


def plan_character_census(A: EquivalenceStructure, stage: int) -> Set[Tuple[int, int]]:
    """Entries (n, k) witnessed by k settled classes of size n at this stage."""
    counts: Dict[int, int] = {}
    for c, size in enumerate(A.class_sizes(stage)):
        slot = A.plan.classes[c]
        if slot.part == PART_DIVISIBLE:
            continue
        target = slot.target if slot.row is None or A.plan.sfunction is None else A.plan.sfunction.limit(slot.row)
        if target == size:
            counts[size] = counts.get(size, 0) + 1
    return {(n, k) for n, total in counts.items() for k in range(1, total + 1)}
