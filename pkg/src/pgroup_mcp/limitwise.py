"""
Limit-computable procedures over staged presentations.

Everything here works stage by stage and keeps a record of every revision,
so that the number of mind changes per argument can be reported.
"""

import bisect
import itertools
import logging
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .finite_core import FiniteGroupSpec
from .invariants import HeightSearch
from .presentations import Character, StagedPresentation
from .series import CompositionSeries, EchelonTable, IdTags, multiply, span, stage_type
from .sfunction import SFunction
from .types import InfMode, Verdict

logger = logging.getLogger(__name__)

DEFAULT_PREFIX = 50

STATUS_STABILIZED = "stabilized"
STATUS_INCONCLUSIVE = "inconclusive"
STATUS_MISMATCH = "mismatch"


class LimitwiseError(Exception):
    """Exception raised for invalid limitwise queries."""

    pass


class DivisiblePartError(LimitwiseError):
    """Exception raised when membership in the divisible part is not decidable at a stage."""

    pass


def sfunction_limits(f: SFunction, count: Optional[int] = None) -> List[int]:
    """
    Limits m_i of an s-function.

    Args:
        f: The s-function
        count: How many limits to return; required for staircase functions

    Returns:
        The limits in row order
    """
    return f.limits(count)


def character_from_sfunction(f: SFunction) -> Character:
    """The character {(n, k): at least k rows have limit n}."""
    character = Character(sfunction=f)
    logger.debug(f"Character from {f.describe()}: {character.descriptor}")
    return character

def _require_decidable(G: StagedPresentation) -> None:
    if G.inf_mode != InfMode.computable:
        raise DivisiblePartError(f"Divisible part of '{G.label}' is only enumerated ({G.inf_mode}); a decidable divisible part is required")


def _divisible(G: StagedPresentation, g: int, stage: int) -> bool:
    verdict = G.divisible_verdict(g, stage)
    if verdict == Verdict.unknown:
        raise DivisiblePartError(f"Divisible-part verdict for element {g} is undetermined at stage {stage}")
    return verdict == Verdict.yes


def _joined(first: EchelonTable[None], second: EchelonTable[None]) -> EchelonTable[None]:
    joint = first.copy()
    for y, _ in second.image_rows():
        joint.insert(y, None)
    return joint


@dataclass(frozen=True)
class ComplementChain:
    """
    The chain A_0 <= A_1 <= ... of finite subgroups meeting the divisible part trivially.

    A_j is spanned by the steps taken before stage j; examined[j] is the
    first id not yet considered after stage j - 1.
    """

    p: int
    stage: int
    id_limit: Optional[int]
    steps: Tuple[Tuple[int, int], ...]
    examined: Tuple[int, ...]
    series: CompositionSeries = field(compare=False, repr=False)
    complement: EchelonTable[None] = field(compare=False, repr=False)
    divisible: EchelonTable[None] = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return int(self.p**self.complement.rank)

    @property
    def members(self) -> FrozenSet[int]:
        """Every element of the final A; only for small complements."""
        return frozenset(self.complement.elements())

    def subgroup(self, j: int) -> EchelonTable[None]:
        return span(self.series, [g for s, g in self.steps if s < j])

    def membership(self, x: int) -> Verdict:
        """
        Decide x in H by looking at the first A_j built after x was considered.

        Returns unknown while x has not been considered.
        """
        if x == 0:
            return Verdict.yes
        if x < 0 or x >= self.examined[-1]:
            return Verdict.unknown
        j = bisect.bisect_right(self.examined, x)
        return Verdict.yes if self.subgroup(j).contains(x) else Verdict.no

    def in_sum(self, x: int) -> bool:
        """
        True when x lies in A + D at the last stage.

        Raises:
            LimitwiseError: If x is not present at the last stage
        """
        if x < 0 or x >= self.series.size:
            raise LimitwiseError(f"Element {x} is not present at stage {self.stage}")
        return _joined(self.complement, self.divisible).contains(x)

    def exponents(self) -> Tuple[int, ...]:
        """Cyclic decomposition of the materialized complement."""
        return stage_type(self.series, [g for _, g in self.steps])

    def lines(self) -> List[str]:
        out = [f"step {s} {g}" for s, g in self.steps]
        exponents = self.exponents()
        summary = " + ".join(f"Z({self.p}^{e})" for e in exponents) if exponents else "0"
        out.append(f"complement: {summary}")
        out.append(f"members: {self.order}")
        out.append(f"examined_below: {self.examined[-1]}")
        return out


def decompose_complement(G: StagedPresentation, stage: int, id_limit: Optional[int] = None) -> ComplementChain:
    """
    Grow a complement of the divisible part.

    At every stage the least id g outside A_s with <A_s, g> meeting the
    divisible part only in 0 is added. The divisible part of a stage is
    spanned by the composition generators it contains, so the test is a
    rank count: rank <A_s, g> + rank D_s = rank <A_s, g, D_s>. Candidates
    run over the whole stage group unless id_limit bounds them further.

    Raises:
        DivisiblePartError: If the divisible part is not decidable stagewise
    """
    _require_decidable(G)
    if stage < 0 or (id_limit is not None and id_limit < 1):
        raise LimitwiseError(f"Stage must be nonnegative and id_limit positive, got {stage} and {id_limit}")
    series = CompositionSeries(G)
    complement = span(series, [])
    divisible = span(series, [])
    sorted_out = 0
    examined: List[int] = [1]
    steps: List[Tuple[int, int]] = []
    cursor = 1
    for s in range(stage + 1):
        series.advance(s)
        generators = series.generators()
        for g in generators[sorted_out:]:
            if _divisible(G, g, s):
                divisible.insert(g, None)
        sorted_out = len(generators)
        joint = _joined(complement, divisible)
        limit = series.size if id_limit is None else min(series.size, id_limit)
        while cursor < limit:
            k = series.level(cursor)
            if joint.covers(k):
                cursor = series.bounds[k + 1]
                continue
            g = cursor
            cursor += 1
            if joint.contains(g):
                continue
            grown = complement.copy()
            grown.insert(g, None)
            together = joint.copy()
            together.insert(g, None)
            if grown.rank + divisible.rank != together.rank:
                continue
            complement = grown
            steps.append((s, g))
            logger.debug(f"Stage {s}: complement grows by {g} to order {G.p**complement.rank}")
            break
        examined.append(cursor)
    logger.info(f"Complement of '{G.label}' through stage {stage}: {len(steps)} steps, order {G.p**complement.rank}")
    return ComplementChain(G.p, stage, id_limit, tuple(steps), tuple(examined), series, complement, divisible)


@dataclass
class LimitMap:
    """
    Stagewise approximations h_s to an isomorphism between two presentations.

    Only revisions are stored: changes lists (stage, id, image, retract).
    """

    prefix: int
    budget: int
    status: str = STATUS_INCONCLUSIVE
    reason: str = ""
    current: Dict[int, Optional[int]] = field(default_factory=dict)
    changes: List[Tuple[int, int, Optional[int], bool]] = field(default_factory=list)
    mind_changes: Dict[int, int] = field(default_factory=dict)
    last_change: Dict[int, int] = field(default_factory=dict)
    stable_from: int = 0

    def image(self, g: int) -> Optional[int]:
        return self.current.get(g)

    def record(self, stage: int, g: int, image: Optional[int]) -> None:
        previous = self.current.get(g)
        if previous == image:
            return
        retract = previous is not None
        if retract:
            self.mind_changes[g] = self.mind_changes.get(g, 0) + 1
            logger.debug(f"Stage {stage}: retract h({g}) = {previous}, now {image}")
        self.current[g] = image
        self.last_change[g] = stage
        self.changes.append((stage, g, image, retract))

    def stabilized_prefix(self) -> int:
        """Length of the initial run of ids whose image is defined and unchanged since stable_from."""
        n = 0
        while n < self.prefix and self.current.get(n) is not None and self.last_change.get(n, 0) < self.stable_from:
            n += 1
        return n

    @property
    def total_mind_changes(self) -> int:
        return sum(self.mind_changes.values())

    def dump_lines(self) -> List[str]:
        out: List[str] = []
        stage: Optional[int] = None
        for s, g, image, retract in self.changes:
            if s != stage:
                out.append(f"stage {s}")
                stage = s
            target = "none" if image is None else str(image)
            out.append(f"h {g} -> {target}" + (" retract" if retract else ""))
        return out

    def lines(self) -> List[str]:
        out = [f"status: {self.status}"]
        if self.reason:
            out.append(f"reason: {self.reason}")
        out.append(f"stabilized_prefix: {self.stabilized_prefix()}")
        out.append(f"total_mind_changes: {self.total_mind_changes}")
        for g in sorted(self.mind_changes):
            out.append(f"mind_changes {g} {self.mind_changes[g]}")
        return out


class _Side:
    """One presentation as seen by the back-and-forth: its series, height tables and complement."""

    def __init__(self, G: StagedPresentation, budget: int):
        self.G = G
        self.search = HeightSearch(G)
        self.chain = decompose_complement(G, budget)
        self.stage = 0
        self._members: Dict[int, Verdict] = {}

    @property
    def series(self) -> CompositionSeries:
        return self.search.series

    def advance(self, stage: int) -> None:
        self.search.advance(stage)
        self.stage = stage

    def profile(self, x: int) -> Tuple[Verdict, bool, Tuple[bool, ...]]:
        """Complement membership, divisibility and heights 1..isqrt(stage) of x."""
        depth = isqrt(self.stage)
        heights = tuple(self.search.at_least(x, k) for k in range(1, depth + 1))
        if x not in self._members:
            self._members[x] = self.chain.membership(x)
        return self._members[x], _divisible(self.G, x, self.stage), heights


class _PartialMap:
    """A finite partial isomorphism kept as two graph tables, one per direction."""

    def __init__(self, source: CompositionSeries, target: CompositionSeries):
        self.source = source
        self.target = target
        self.forward: EchelonTable[int] = EchelonTable(source, IdTags(target))
        self.backward: EchelonTable[int] = EchelonTable(target, IdTags(source))

    def table(self, forth: bool) -> EchelonTable[int]:
        return self.forward if forth else self.backward

    def apply(self, x: int, forth: bool = True) -> Optional[int]:
        rest, tag = self.table(forth).reduce(x, 0)
        if rest:
            return None
        return (self.target if forth else self.source).neg(tag)

    def add(self, g: int, h: int) -> None:
        """
        Raises:
            LimitwiseError: If the pair does not extend the map to an injective homomorphism
        """
        self.forward.insert(g, h)
        self.backward.insert(h, g)
        if self.forward.kernel_tags() or self.backward.kernel_tags():
            raise LimitwiseError(f"Pair ({g}, {h}) does not extend the partial isomorphism")


def _requirement(M: _PartialMap, a: _Side, g: int, forth: bool) -> Tuple[int, int]:
    """Least t with p^t*g in the domain, and the image of p^t*g."""
    p = a.G.p
    t = 1
    x = multiply(a.G, g, p)
    domain = M.table(forth)
    while not domain.contains(x):
        x = multiply(a.G, x, p)
        t += 1
    image = M.apply(x, forth)
    assert image is not None
    return t, image


def _fits(M: _PartialMap, a: _Side, b: _Side, g: int, h: int, forth: bool, requirement: Optional[Tuple[int, int]] = None) -> bool:
    t, target = requirement if requirement is not None else _requirement(M, a, g, forth)
    p = a.G.p
    if multiply(b.G, h, p**t) != target:
        return False
    if M.table(not forth).contains(multiply(b.G, h, p ** (t - 1))):
        return False
    return True


def _partner(M: _PartialMap, a: _Side, b: _Side, g: int, forth: bool, previous: Optional[int]) -> Optional[int]:
    """Least h (the previous partner first) that extends the map by g -> h."""
    requirement = _requirement(M, a, g, forth)
    wanted = a.profile(g)
    candidates: Iterable[int] = range(1, b.series.size)
    if previous is not None and 0 < previous < b.series.size:
        candidates = itertools.chain([previous], candidates)
    for h in candidates:
        if _fits(M, a, b, g, h, forth, requirement) and b.profile(h) == wanted:
            return h
    return None


def _stage_types_differ(side1: _Side, side2: _Side, budget: int) -> Optional[str]:
    type1 = stage_type(side1.series)
    type2 = stage_type(side2.series)
    if type1 == type2:
        return None
    spec1, spec2 = FiniteGroupSpec(side1.G.p, type1), FiniteGroupSpec(side2.G.p, type2)
    return f"stage groups {spec1.describe()} and {spec2.describe()} differ at stage {budget}"


def delta2_isomorphism(G1: StagedPresentation, G2: StagedPresentation, budget: int, prefix: int = DEFAULT_PREFIX) -> LimitMap:
    """
    Approximate an isomorphism G1 -> G2 stage by stage.

    The approximation is a finite partial isomorphism grown back and forth.
    A pair g -> h is admitted when, with t least such that p^t*g is already
    mapped, p^t*h is the image of p^t*g, p^(t-1)*h is outside the image, and
    g and h agree on complement membership, divisibility and the heights
    1..isqrt(s) in their stage groups. At every stage the pairs are replayed in
    order; the first one that no longer fits is dropped together with all
    later pairs. A change of image for a tracked id is a mind change.

    Args:
        G1: Source presentation
        G2: Target presentation
        budget: Last stage to run
        prefix: Number of leading ids tracked

    Returns:
        The LimitMap; its status is stabilized, inconclusive or mismatch

    Raises:
        DivisiblePartError: If either divisible part is not decidable stagewise
    """
    _require_decidable(G1)
    _require_decidable(G2)
    if budget < 0 or prefix < 1:
        raise LimitwiseError(f"Budget must be nonnegative and prefix positive, got {budget} and {prefix}")
    window = max(1, budget // 4)
    result = LimitMap(prefix=prefix, budget=budget, stable_from=budget - window + 1)
    if G1.p != G2.p:
        result.status = STATUS_MISMATCH
        result.reason = f"different primes {G1.p} and {G2.p}"
        logger.warning(f"No isomorphism between '{G1.label}' and '{G2.label}': {result.reason}")
        return result
    side1, side2 = _Side(G1, budget), _Side(G2, budget)
    pairs: List[Tuple[int, int, bool]] = []
    for s in range(budget + 1):
        side1.advance(s)
        side2.advance(s)
        M = _PartialMap(side1.series, side2.series)
        kept: List[Tuple[int, int, bool]] = []
        for g, h, forth in pairs:
            a, b, x, y = (side1, side2, g, h) if forth else (side2, side1, h, g)
            if not (_fits(M, a, b, x, y, forth) and a.profile(x) == b.profile(y)):
                logger.debug(f"Stage {s}: pair {g} -> {h} no longer fits; dropping {len(pairs) - len(kept)} pairs")
                break
            M.add(g, h)
            kept.append((g, h, forth))
        pairs = kept
        for x in range(1, min(prefix, side1.series.size)):
            if M.forward.contains(x):
                continue
            h = _partner(M, side1, side2, x, True, result.image(x))
            if h is not None:
                M.add(x, h)
                pairs.append((x, h, True))
        for y in range(1, min(prefix, side2.series.size)):
            if M.backward.contains(y):
                continue
            g = _partner(M, side2, side1, y, False, None)
            if g is not None:
                M.add(g, y)
                pairs.append((g, y, False))
        for x in range(min(prefix, side1.series.size)):
            result.record(s, x, M.apply(x))
    covered = min(prefix, side1.series.size)
    if result.stabilized_prefix() >= covered:
        result.status = STATUS_STABILIZED
    else:
        reason = _stage_types_differ(side1, side2, budget)
        if reason is not None:
            result.status = STATUS_MISMATCH
            result.reason = reason
            logger.warning(f"No isomorphism between '{G1.label}' and '{G2.label}': {reason}")
            return result
        result.status = STATUS_INCONCLUSIVE
        result.reason = f"only {result.stabilized_prefix()} of {covered} ids settled by stage {budget}"
        logger.warning(f"Isomorphism approximation inconclusive at budget {budget}: {result.reason}")
    logger.info(f"Isomorphism approximation {result.status} with {result.total_mind_changes} mind changes")
    return result


def mind_change_census(m: LimitMap, prefix: Optional[int] = None) -> Dict[int, int]:
    """
    Revision count per id below prefix.

    Raises:
        LimitwiseError: If the map was not run through the requested prefix
    """
    limit = m.prefix if prefix is None else prefix
    if limit > m.prefix:
        raise LimitwiseError(f"Map tracks {m.prefix} ids, census of {limit} requested")
    return {g: m.mind_changes.get(g, 0) for g in range(limit)}
