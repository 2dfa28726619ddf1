"""
Invariants of staged presentations and of isomorphism types.

Queries against presentations are stagewise and use nothing but the group
operation and the universe sizes: semi-decidable questions answer yes or
unknown, limit questions answer with a guess and a log of revisions.
"""

import logging
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, FrozenSet, List, Optional, Tuple

from sympy import multiplicity

from .finite_core import FiniteGroupSpec, scale
from .presentations import IsoTypeSpec, StagedPresentation, format_rank
from .series import CompositionSeries, EchelonTable, IdTags, multiply, preimage, pure_witnesses
from .types import CategoricityLevel, Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StageVerdict:
    """A verdict with the stage it was issued at and its revision history."""

    value: Verdict
    stage: int
    mind_changes: int = 0
    log: Tuple[Tuple[int, Verdict], ...] = ()


@dataclass(frozen=True)
class CharacterCensus:
    """Character entries confirmed at a budget, with one witness tuple per exponent."""

    entries: FrozenSet[Tuple[int, int]]
    budget: int
    mind_changes: int = 0
    log: Tuple[str, ...] = ()
    witnesses: Tuple[Tuple[int, Tuple[int, ...]], ...] = field(default=(), compare=False)

    def lines(self) -> List[str]:
        return [f"entry {n} {k}" for n, k in sorted(self.entries)]


def order_of(G: StagedPresentation, g: int) -> int:
    """Exponent n with o(g) = p^n."""
    n = 0
    current = g
    while current != 0:
        current = multiply(G, current, G.p)
        n += 1
    return n


class HeightSearch:
    """
    Height witnesses inside the stage groups of one presentation.

    One graph table of multiplication by p^n is kept per n and grown as the
    stage advances, so queries at rising stages share their work.
    """

    def __init__(self, G: StagedPresentation, stage: int = 0):
        self.G = G
        self.series = CompositionSeries(G, stage)
        self._tables: Dict[int, Tuple[EchelonTable[int], int]] = {}

    @property
    def stage(self) -> int:
        return self.series.stage

    def advance(self, stage: int) -> None:
        self.series.advance(stage)

    def _table(self, n: int) -> EchelonTable[int]:
        step = self.G.p**n
        gens = self.series.generators()
        if n in self._tables:
            table, done = self._tables[n]
        else:
            table, done = EchelonTable(self.series, IdTags(self.series)), 0
        for g in gens[done:]:
            table.insert(self.series.multiple(g, step), g)
        self._tables[n] = (table, len(gens))
        return table

    def witness(self, g: int, n: int) -> Optional[int]:
        """Some h of the current stage with p^n*h = g, None when there is none."""
        if n <= 0:
            return g
        if g == 0:
            return 0
        if g >= self.series.size:
            return None
        h = preimage(self._table(n), g)
        if h is not None and multiply(self.G, h, self.G.p**n) != g:
            raise ArithmeticError(f"Witness {h} for {g} fails the check p^{n}*h = g")
        return h

    def at_least(self, g: int, n: int) -> bool:
        return self.witness(g, n) is not None

    def divisible_guess(self, g: int) -> Verdict:
        """Guess for membership in the divisible part: height at least isqrt(stage)."""
        return Verdict.yes if self.at_least(g, isqrt(self.stage)) else Verdict.no


def height_at_least(G: StagedPresentation, g: int, n: int, budget: int) -> StageVerdict:
    """
    Search for h with p^n * h = g among the elements of stage budget.

    Returns:
        yes with the stage when a witness is found, unknown otherwise
    """
    if g == 0 or n <= 0:
        return StageVerdict(Verdict.yes, budget)
    if HeightSearch(G, budget).at_least(g, n):
        return StageVerdict(Verdict.yes, budget)
    return StageVerdict(Verdict.unknown, budget)


def first_stage(G: StagedPresentation, g: int, budget: int) -> Optional[int]:
    """Earliest stage <= budget at which g is in the universe."""
    if g >= G.universe_size(budget):
        return None
    low, high = 0, budget
    while low < high:
        mid = (low + high) // 2
        if g < G.universe_size(mid):
            high = mid
        else:
            low = mid + 1
    return low


def divisible_approx(G: StagedPresentation, g: int, budget: int) -> StageVerdict:
    """
    Limit guess for membership of g in the divisible part.

    At stage s the guess is yes when g has height at least isqrt(s) in the
    stage group. Every change of guess is logged.
    """
    if g == 0:
        return StageVerdict(Verdict.yes, budget, 0, ((0, Verdict.yes),))
    start = first_stage(G, g, budget)
    if start is None:
        return StageVerdict(Verdict.unknown, budget)
    search = HeightSearch(G, start)
    log: List[Tuple[int, Verdict]] = []
    guess: Optional[Verdict] = None
    for s in range(start, budget + 1):
        search.advance(s)
        current = search.divisible_guess(g)
        if current != guess:
            log.append((s, current))
            if guess is not None:
                logger.debug(f"Element {g}: divisibility guess changed to {current} at stage {s}")
            guess = current
    assert guess is not None
    return StageVerdict(guess, budget, len(log) - 1, tuple(log))


def witness_stage(budget: int) -> int:
    """Stage whose elements may witness character entries when purity is judged at budget."""
    return max(budget // 2, budget - 2 * isqrt(budget) - 2)


def settled_witnesses(G: StagedPresentation, budget: int) -> Dict[int, Tuple[int, ...]]:
    """
    Per exponent n, elements of order p^n spanning a pure Z(p^n)^k of G^budget.

    The elements are taken from the witness stage. The socle of their span
    must meet p^n * G^budget only in 0.
    """
    series = CompositionSeries(G, budget)
    early = G.universe_size(witness_stage(budget))
    ambient = series.generators()
    candidates = [g for g in ambient if g < early]
    found: Dict[int, Tuple[int, ...]] = {}
    current = list(candidates)
    n = 1
    while any(current):
        chosen = pure_witnesses(series, n, candidates, ambient)
        if chosen:
            found[n] = tuple(chosen)
        current = [series.multiple(g, G.p) for g in current]
        n += 1
    return found


def enumerate_character(G: StagedPresentation, budget: int) -> CharacterCensus:
    """
    Confirm character entries (n, k) within the budget.

    k elements of order p^n spanning a pure subgroup Z(p^n)^k confirm
    (n, 1..k). The census is repeated at growing budgets so that withdrawn
    entries show up as mind changes.
    """
    checkpoints = sorted(set(b for b in (budget // 8, budget // 4, budget // 2, budget) if b >= 0))
    previous: FrozenSet[Tuple[int, int]] = frozenset()
    mind_changes = 0
    log: List[str] = []
    entries: FrozenSet[Tuple[int, int]] = frozenset()
    witnesses: Dict[int, Tuple[int, ...]] = {}
    for b in checkpoints:
        witnesses = settled_witnesses(G, b)
        entries = frozenset((n, k) for n, chosen in witnesses.items() for k in range(1, len(chosen) + 1))
        withdrawn = previous - entries
        if withdrawn:
            mind_changes += len(withdrawn)
            log.append(f"budget {b}: withdrew {sorted(withdrawn)}")
            logger.debug(f"Character census withdrew {sorted(withdrawn)} at budget {b}")
        previous = entries
    return CharacterCensus(entries, budget, mind_changes, tuple(log), tuple(sorted(witnesses.items())))


@dataclass(frozen=True)
class UlmData:
    """
    Ulm invariants of a length <= omega group.

    counts maps n to the number of Z(p^(n+1)) summands (None for infinitely
    many). A tail (start, count) means every n >= start not listed has that
    count.
    """

    counts: Tuple[Tuple[int, Optional[int]], ...] = ()
    tail: Optional[Tuple[int, int]] = None
    divisible_rank: Optional[int] = 0

    @classmethod
    def build(cls, counts: Dict[int, Optional[int]], tail: Optional[Tuple[int, int]], divisible_rank: Optional[int]) -> "UlmData":
        """Normalize so that equal invariants have equal representations."""
        if tail is not None and tail[1] == 0:
            tail = None
        if tail is not None:
            start, count = tail
            while start > 0 and counts.get(start - 1, 0) == count:
                start -= 1
            tail = (start, count)

        def default(n: int) -> Optional[int]:
            return tail[1] if tail is not None and n >= tail[0] else 0

        kept = tuple(sorted((n, v) for n, v in counts.items() if v != default(n)))
        return cls(kept, tail, divisible_rank)

    def value(self, n: int) -> Optional[int]:
        listed = dict(self.counts)
        if n in listed:
            return listed[n]
        if self.tail is not None and n >= self.tail[0]:
            return self.tail[1]
        return 0

    @property
    def is_trivial(self) -> bool:
        return not self.counts and self.tail is None and self.divisible_rank == 0

    def lines(self) -> List[str]:
        out = [f"divisible_rank: {format_rank(self.divisible_rank)}"]
        for n, v in self.counts:
            out.append(f"u({n}): {'omega' if v is None else v}")
        if self.tail is not None:
            out.append(f"u(n >= {self.tail[0]}): {self.tail[1]}")
        return out


def ulm_of_finite(spec: FiniteGroupSpec) -> UlmData:
    """Ulm invariants of a finite group by counting the socle filtration."""
    elements = list(spec.elements())
    zero = spec.zero()
    socle = {g for g in elements if scale(g, spec.p, spec) == zero}
    counts: Dict[int, Optional[int]] = {}
    previous = len(socle)
    for n in range(spec.max_exponent + 1):
        step = spec.p ** (n + 1)
        multiples = {scale(g, step, spec) for g in elements}
        following = len(socle & multiples)
        if previous != following:
            counts[n] = int(multiplicity(spec.p, previous // following))
        previous = following
    return UlmData.build(counts, None, 0)


def ulm_invariants(t: IsoTypeSpec) -> UlmData:
    counts: Dict[int, Optional[int]] = {}

    def bump(n: int, k: int) -> None:
        current = counts.get(n, 0)
        counts[n] = None if current is None else current + k

    for n, k in t.cyclic_finite:
        bump(n - 1, k)
    tail: Optional[Tuple[int, int]] = None
    if t.sfunction is not None:
        if t.sfunction.row_count is None:
            offset, repeat = t.sfunction.staircase or (1, 1)
            start = max(offset, 1) - 1
            tail = (start, repeat)
            for n in list(counts):
                if n >= start:
                    bump(n, repeat)
        else:
            for m in t.sfunction.limits():
                if m >= 1:
                    bump(m - 1, 1)
    for m in t.cyclic_infinite:
        counts[m - 1] = None
    return UlmData.build(counts, tail, t.divisible_rank)


def isomorphic_by_ulm(a: IsoTypeSpec, b: IsoTypeSpec) -> bool:
    ua, ub = ulm_invariants(a), ulm_invariants(b)
    if ua.is_trivial and ub.is_trivial:
        return True
    return a.p == b.p and ua == ub


@dataclass(frozen=True)
class Classification:
    """Categoricity level with the clause that produced it."""

    level: CategoricityLevel
    clause: str
    relatively_delta3: bool = True
    open_problem: Optional[str] = None
    notes: Tuple[str, ...] = field(default=())

    def lines(self) -> List[str]:
        out = [str(self.level), f"clause: {self.clause}", f"relatively_delta3: {str(self.relatively_delta3).lower()}"]
        if self.open_problem:
            out.append(f"open_problem: {self.open_problem}")
        out.extend(f"note: {n}" for n in self.notes)
        return out


def classify_categoricity(t: IsoTypeSpec, plain_delta2: bool = False) -> Classification:
    """
    Place an isomorphism type in the categoricity case split.

    Args:
        t: Type of length at most omega
        plain_delta2: Ask for plain (not relative) Delta-0-2 status, which is
            open for finite nonzero rank with unbounded reduced part

    Returns:
        The classification
    """
    notes: List[str] = []
    if not t.reduced_computable:
        notes.append("reduced part has no computable copy: Delta-0-2 categoricity is an open question")
    rank = t.divisible_rank

    if t.reduced_is_finite:
        result = Classification(CategoricityLevel.computably_categorical, "divisible part plus finite group")
    elif rank is not None and len(t.cyclic_infinite) == 1 and not t.has_unbounded_period:
        result = Classification(CategoricityLevel.computably_categorical, "finite divisible rank plus omega copies of one cyclic group plus finite group")
    elif not t.has_unbounded_period:
        result = Classification(CategoricityLevel.delta2_relatively, "reduced part of finite period")
    elif rank == 0:
        result = Classification(CategoricityLevel.delta2_relatively, "reduced group with all elements of finite height")
    elif plain_delta2 and rank is not None:
        result = Classification(
            CategoricityLevel.delta2_open,
            "finite nonzero divisible rank with reduced part of infinite period",
            open_problem="plain Delta-0-2 categoricity with finitely many Z(p^inf) summands and unbounded reduced part",
        )
    else:
        result = Classification(CategoricityLevel.not_delta2_relatively, "nonzero divisible rank with reduced part of infinite period")
        if rank is None:
            notes.append("not Delta-0-2 categorical, assuming a computable copy of the reduced part")
    logger.debug(f"Classified {t.describe()} as {result.level}")
    return Classification(result.level, result.clause, True, result.open_problem, tuple(notes))
