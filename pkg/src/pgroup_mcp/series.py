"""
Subgroup arithmetic inside a stage group, from the group operation alone.

The distinct values of universe_size(0), universe_size(1), ... grow by a
factor p at a time, and the ids below each of them form a subgroup. This gives
a composition series 0 = H_0 < H_1 < ... < H_e = G^s whose k-th generator is
the least id outside H_k. Subgroups are kept in echelon form against that
series: one row per level, each row congruent to the level's generator
modulo the level below. Rows may carry a tag, an element of a second group
that is transformed alongside (a preimage, an image, or coordinates).
"""

import bisect
import logging
from typing import Dict, Generic, Iterator, List, Optional, Sequence, Tuple, TypeVar

from .finite_core import Element, FiniteGroupSpec, add, scale
from .presentations import PresentationError, StagedPresentation

logger = logging.getLogger(__name__)

T = TypeVar("T")

Key = Tuple[int, int]


def multiply(G: StagedPresentation, g: int, k: int) -> int:
    """k*g computed with the presentation's addition only."""
    result = 0
    base = g
    while k:
        if k & 1:
            result = G.add(result, base)
        base = G.add(base, base)
        k >>= 1
    return result


class CompositionSeries:
    """The chain of id prefixes of a presentation, read off universe sizes."""

    def __init__(self, G: StagedPresentation, stage: int = 0):
        self.G = G
        self.p = G.p
        self.stage = -1
        self.bounds: List[int] = [1]
        self._multiples: Dict[int, List[int]] = {}
        self.advance(stage)

    def advance(self, stage: int) -> None:
        """
        Extend the series through the given stage.

        Raises:
            PresentationError: If a universe grows by anything other than a factor p
        """
        for s in range(self.stage + 1, stage + 1):
            size = self.G.universe_size(s)
            if size == self.bounds[-1]:
                continue
            if size != self.bounds[-1] * self.p:
                raise PresentationError(f"Universe grows from {self.bounds[-1]} to {size} at stage {s}; expected a factor {self.p}")
            self.bounds.append(size)
        self.stage = max(self.stage, stage)

    @property
    def length(self) -> int:
        return len(self.bounds) - 1

    @property
    def size(self) -> int:
        return self.bounds[-1]

    def generators(self) -> List[int]:
        """Least id of every step of the series, bottom first."""
        return self.bounds[:-1]

    def level(self, y: int) -> int:
        """The k with y in H_(k+1) but not in H_k."""
        if y <= 0 or y >= self.size:
            raise PresentationError(f"Element {y} is not a nonzero element of stage {self.stage}")
        return bisect.bisect_right(self.bounds, y) - 1

    def add(self, a: int, b: int) -> int:
        return self.G.add(a, b)

    def multiple(self, y: int, k: int) -> int:
        return multiply(self.G, y, k)

    def neg(self, y: int) -> int:
        return multiply(self.G, y, self.size - 1)

    def _generator_multiples(self, k: int) -> List[int]:
        found = self._multiples.get(k)
        if found is None:
            g = self.bounds[k]
            found = [0]
            for _ in range(1, self.p):
                found.append(self.G.add(found[-1], g))
            self._multiples[k] = found
        return found

    def leading(self, y: int) -> Tuple[int, int]:
        """
        Level k and the coefficient c in [1, p) with y = c*g_k modulo H_k.

        Raises:
            PresentationError: If no coefficient brings y below H_k
        """
        k = self.level(y)
        for d, m in enumerate(self._generator_multiples(k)[1:], start=1):
            if self.G.add(y, m) < self.bounds[k]:
                return k, self.p - d
        raise PresentationError(f"Ids below {self.bounds[k + 1]} do not extend ids below {self.bounds[k]} by one cyclic step")


class Tags(Generic[T]):
    """Arithmetic of the values carried next to table rows."""

    zero: T

    def add(self, a: T, b: T) -> T:
        raise NotImplementedError

    def scale(self, a: T, k: int) -> T:
        raise NotImplementedError

    def leading(self, a: T) -> Optional[Key]:
        """Level and leading coefficient of a tag, None for tags that are zero."""
        raise NotImplementedError


class Untagged(Tags[None]):
    zero = None

    def add(self, a: None, b: None) -> None:
        return None

    def scale(self, a: None, k: int) -> None:
        return None

    def leading(self, a: None) -> Optional[Key]:
        return None


class IdTags(Tags[int]):
    """Tags that are element ids of a presentation, possibly another one."""

    zero = 0

    def __init__(self, series: CompositionSeries):
        self.series = series

    def add(self, a: int, b: int) -> int:
        return self.series.add(a, b)

    def scale(self, a: int, k: int) -> int:
        return self.series.multiple(a, k)

    def leading(self, a: int) -> Optional[Key]:
        if a == 0:
            return None
        return self.series.leading(a)


class CoordinateTags(Tags[Element]):
    """Tags that are coordinates in a finite group with a fixed basis."""

    def __init__(self, spec: FiniteGroupSpec):
        self.spec = spec
        self.zero = spec.zero()

    def add(self, a: Element, b: Element) -> Element:
        return add(a, b, self.spec)

    def scale(self, a: Element, k: int) -> Element:
        return scale(a, k, self.spec)

    def leading(self, a: Element) -> Optional[Key]:
        if a == self.zero:
            return None
        raise PresentationError(f"Coordinates {a} describe zero; the basis is not independent")


class EchelonTable(Generic[T]):
    """
    A subgroup of G^s in echelon form, rows optionally tagged.

    Rows are pairs (y, tag). A pair is keyed by the level of y, or by the
    level of its tag when y is zero; those rows span the tags that go with 0.
    When every inserted pair is (m*x, x) the tags of rows keyed by y are
    preimages and the remaining rows span the kernel of multiplication by m.
    """

    def __init__(self, series: CompositionSeries, tags: Tags[T]):
        self.series = series
        self.tags = tags
        self.rows: Dict[Tuple[int, int], Tuple[int, T]] = {}

    def copy(self) -> "EchelonTable[T]":
        other = EchelonTable(self.series, self.tags)
        other.rows = dict(self.rows)
        return other

    def _key(self, y: int, tag: T) -> Optional[Tuple[Tuple[int, int], int]]:
        if y:
            k, c = self.series.leading(y)
            return (1, k), c
        found = self.tags.leading(tag)
        if found is None:
            return None
        k, c = found
        return (0, k), c

    def reduce(self, y: int, tag: T, full: bool = False) -> Tuple[int, T]:
        """
        Subtract rows from (y, tag) top-down until no row applies.

        With full=False reduction stops once y is zero.
        """
        p = self.series.p
        while y or full:
            found = self._key(y, tag)
            if found is None:
                break
            key, c = found
            row = self.rows.get(key)
            if row is None:
                break
            y = self.series.add(y, self.series.multiple(row[0], p - c))
            tag = self.tags.add(tag, self.tags.scale(row[1], p - c))
        return y, tag

    def insert(self, y: int, tag: T) -> bool:
        """Add (y, tag) and close under multiplication by p. True when a row was added."""
        p = self.series.p
        grew = False
        queue: List[Tuple[int, T]] = [(y, tag)]
        while queue:
            y, tag = queue.pop()
            y, tag = self.reduce(y, tag, full=True)
            found = self._key(y, tag)
            if found is None:
                continue
            key, c = found
            inverse = pow(c, -1, p)
            y, tag = self.series.multiple(y, inverse), self.tags.scale(tag, inverse)
            self.rows[key] = (y, tag)
            grew = True
            queue.append((self.series.multiple(y, p), self.tags.scale(tag, p)))
        return grew

    def contains(self, y: int) -> bool:
        return self.reduce(y, self.tags.zero)[0] == 0

    @property
    def rank(self) -> int:
        """Composition length of the subgroup spanned by the first coordinates."""
        return sum(1 for kind, _ in self.rows if kind == 1)

    def covers(self, k: int) -> bool:
        """True when the subgroup contains H_(k+1)."""
        return all((1, j) in self.rows for j in range(k + 1))

    def image_rows(self) -> List[Tuple[int, T]]:
        return [self.rows[key] for key in sorted(self.rows) if key[0] == 1]

    def kernel_tags(self) -> List[T]:
        return [self.rows[key][1] for key in sorted(self.rows) if key[0] == 0]

    def elements(self) -> Iterator[int]:
        """Every element of the subgroup; only for small subgroups."""
        current = [0]
        for y, _ in self.image_rows():
            grown = []
            for x in current:
                z = x
                for _ in range(self.series.p):
                    grown.append(z)
                    z = self.series.add(z, y)
            current = grown
        return iter(sorted(current))


def span(series: CompositionSeries, generators: Sequence[int]) -> EchelonTable[None]:
    table: EchelonTable[None] = EchelonTable(series, Untagged())
    for g in generators:
        table.insert(g, None)
    return table


def graph(series: CompositionSeries, generators: Sequence[int], multiplier: int) -> EchelonTable[int]:
    """Table of {(m*x, x)} for x in the span of the generators."""
    table: EchelonTable[int] = EchelonTable(series, IdTags(series))
    for g in generators:
        table.insert(series.multiple(g, multiplier), g)
    return table


def preimage(table: EchelonTable[int], y: int) -> Optional[int]:
    """Some x with m*x = y from a graph table, None if y is not in the image."""
    rest, tag = table.reduce(y, 0)
    if rest:
        return None
    return table.series.neg(tag)


def socle_counts(series: CompositionSeries, generators: Sequence[int]) -> List[int]:
    """Ranks of p^m*S for m = 0, 1, ... until zero, S the span of the generators."""
    p = series.p
    ranks: List[int] = []
    current = list(generators)
    while True:
        rank = span(series, current).rank
        ranks.append(rank)
        if rank == 0:
            return ranks
        current = [series.multiple(g, p) for g in current]


def stage_type(series: CompositionSeries, generators: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Cyclic decomposition of the span of the generators (all of G^s by default), exponents descending."""
    ranks = socle_counts(series, series.generators() if generators is None else generators)
    ranks += [0, 0]
    exponents: List[int] = []
    for n in range(1, len(ranks) - 1):
        exponents.extend([n] * (ranks[n - 1] - 2 * ranks[n] + ranks[n + 1]))
    return tuple(sorted(exponents, reverse=True))


def pure_witnesses(series: CompositionSeries, n: int, candidates: Sequence[int], ambient: Sequence[int]) -> List[int]:
    """
    Elements of order p^n spanning a pure Z(p^n)^k inside the span of ambient, k as large as possible.

    Witnesses are drawn from the span of candidates. A homogeneous subgroup is
    pure exactly when its socle meets (p^n * ambient)[p] only in 0.
    """
    p = series.p
    kernel = sorted(graph(series, candidates, p**n).kernel_tags())
    deep = graph(series, ambient, p ** (n + 1)).kernel_tags()
    blocked = span(series, [series.multiple(v, p**n) for v in deep])
    chosen: List[int] = []
    for v in kernel:
        if blocked.insert(series.multiple(v, p ** (n - 1)), None):
            chosen.append(v)
    return chosen


def cyclic_basis(series: CompositionSeries, generators: Optional[Sequence[int]] = None) -> List[Tuple[int, int]]:
    """A basis of the span of the generators as (element, exponent), exponents descending."""
    gens = series.generators() if generators is None else list(generators)
    exponents = stage_type(series, gens)
    basis: List[Tuple[int, int]] = []
    for n in sorted(set(exponents), reverse=True):
        chosen = pure_witnesses(series, n, gens, gens)
        if len(chosen) != exponents.count(n):
            raise PresentationError(f"Found {len(chosen)} basis elements of order {series.p}^{n}, expected {exponents.count(n)}")
        basis.extend((x, n) for x in chosen)
    logger.debug(f"Basis of stage {series.stage}: exponents {exponents}")
    return basis


class Coordinates:
    """Translation between ids of a subgroup and coordinates over a cyclic basis."""

    def __init__(self, series: CompositionSeries, basis: Sequence[Tuple[int, int]]):
        self.series = series
        self.basis = [x for x, _ in basis]
        self.spec = FiniteGroupSpec(series.p, tuple(e for _, e in basis))
        self.table: EchelonTable[Element] = EchelonTable(series, CoordinateTags(self.spec))
        for i, x in enumerate(self.basis):
            self.table.insert(x, self.spec.unit(i))

    def coordinates(self, y: int) -> Element:
        """
        Raises:
            PresentationError: If y is outside the subgroup
        """
        rest, tag = self.table.reduce(y, self.spec.zero())
        if rest:
            raise PresentationError(f"Element {y} is outside the subgroup")
        return scale(tag, -1, self.spec)

    def element(self, coords: Sequence[int]) -> int:
        total = 0
        for x, c in zip(self.basis, self.spec.check(coords)):
            if c:
                total = self.series.add(total, self.series.multiple(x, c))
        return total
