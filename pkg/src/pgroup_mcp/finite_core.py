"""
Exact arithmetic and exhaustive search over finite Abelian p-groups.

A finite group is given as a direct sum of cyclic groups Z(p^n). Everything
here is brute force on purpose: these routines are the ground-truth oracles
the staged machinery is checked against.
"""

import itertools
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from sympy import isprime, multiplicity

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]

DEFAULT_MAX_ORDER = 2**16
MAX_ORDER_ENV = "PGL_MAX_ORDER"


class FiniteGroupError(Exception):
    """Base exception for finite group operations."""

    pass


class ElementShapeError(FiniteGroupError):
    """Exception raised when an element does not match the group's coordinates."""

    pass


class NotSubgroupError(FiniteGroupError):
    """Exception raised when an element set is not closed under the group operation."""

    pass


class InconsistentPairingError(FiniteGroupError):
    """Exception raised when a pairing does not define an injective partial map."""

    pass


class SearchBoundError(FiniteGroupError):
    """Exception raised when a group exceeds the brute-force search bound."""

    pass


def configured_max_order() -> int:
    """
    Read the brute-force search bound.

    Returns:
        The value of PGL_MAX_ORDER, or DEFAULT_MAX_ORDER when unset

    Raises:
        FiniteGroupError: If the variable is not a positive integer
    """
    raw = os.getenv(MAX_ORDER_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise FiniteGroupError(f"{MAX_ORDER_ENV} must be an integer, got '{raw}'")
    if value <= 0:
        raise FiniteGroupError(f"{MAX_ORDER_ENV} must be positive, got {value}")
    return value


@lru_cache(maxsize=None)
def valuation(p: int, c: int) -> int:
    """p-adic valuation of a nonzero integer."""
    return int(multiplicity(p, c))


@dataclass(frozen=True)
class FiniteGroupSpec:
    """The group Z(p^n_1) + ... + Z(p^n_k), coordinates in the given order."""

    p: int
    exponents: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not isprime(self.p):
            raise FiniteGroupError(f"p must be prime, got {self.p}")
        object.__setattr__(self, "exponents", tuple(int(n) for n in self.exponents))
        for n in self.exponents:
            if n < 1:
                raise FiniteGroupError(f"Exponents must be positive, got {n}")

    @property
    def moduli(self) -> Tuple[int, ...]:
        return tuple(self.p**n for n in self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return int(self.p ** sum(self.exponents))

    @property
    def max_exponent(self) -> int:
        return max(self.exponents, default=0)

    def canonical(self) -> "FiniteGroupSpec":
        """Return the same group with exponents sorted in descending order."""
        return FiniteGroupSpec(self.p, tuple(sorted(self.exponents, reverse=True)))

    def zero(self) -> Element:
        return tuple(0 for _ in self.exponents)

    def unit(self, i: int) -> Element:
        """The generator of the i-th cyclic summand."""
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic (canonical) order."""
        return itertools.product(*(range(m) for m in self.moduli))

    def check(self, g: Sequence[int]) -> Element:
        """Validate coordinates and return them as an Element."""
        if len(g) != self.rank:
            raise ElementShapeError(f"Element {tuple(g)} has {len(g)} coordinates, group {self.describe()} has {self.rank}")
        return tuple(int(c) % m for c, m in zip(g, self.moduli))

    def describe(self) -> str:
        if not self.exponents:
            return "0"
        return " + ".join(f"Z({self.p}^{n})" for n in self.exponents)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup together with the generators it was built from."""

    generators: Tuple[Element, ...]
    elements: FrozenSet[Element]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.elements

    def sorted_elements(self) -> Tuple[Element, ...]:
        return tuple(sorted(self.elements))


def add(a: Sequence[int], b: Sequence[int], spec: FiniteGroupSpec) -> Element:
    """
    Add two elements coordinatewise.

    Raises:
        ElementShapeError: If either element has the wrong number of coordinates
    """
    if len(a) != spec.rank or len(b) != spec.rank:
        raise ElementShapeError(f"Cannot add {tuple(a)} and {tuple(b)} in {spec.describe()}")
    return tuple((x + y) % m for x, y, m in zip(a, b, spec.moduli))


def neg(a: Sequence[int], spec: FiniteGroupSpec) -> Element:
    return tuple((-x) % m for x, m in zip(spec.check(a), spec.moduli))


def scale(a: Sequence[int], k: int, spec: FiniteGroupSpec) -> Element:
    """Return k*a."""
    return tuple((k * x) % m for x, m in zip(spec.check(a), spec.moduli))


def order_exponent(g: Sequence[int], spec: FiniteGroupSpec) -> int:
    """Smallest n with p^n * g = 0."""
    current = spec.check(g)
    zero = spec.zero()
    n = 0
    while current != zero:
        current = scale(current, spec.p, spec)
        n += 1
    return n


def height(g: Sequence[int], spec: FiniteGroupSpec) -> Optional[int]:
    """Height of g in the full group, None for the zero element."""
    coords = spec.check(g)
    heights = [valuation(spec.p, c) for c in coords if c]
    if not heights:
        return None
    return min(heights)


def divide(g: Sequence[int], k: int, spec: FiniteGroupSpec) -> Optional[Element]:
    """Return some h with p^k * h = g, or None if g has height below k."""
    coords = spec.check(g)
    step = spec.p**k
    result: List[int] = []
    for c, n in zip(coords, spec.exponents):
        if c == 0:
            result.append(0)
        elif k >= n or c % step:
            return None
        else:
            result.append(c // step)
    return tuple(result)


def span_with(elements: Iterable[Element], g: Element, spec: FiniteGroupSpec) -> FrozenSet[Element]:
    """Elements of <S, g> given S as a subgroup."""
    base = list(elements)
    multiples = [spec.zero()]
    current = g
    while current != spec.zero():
        multiples.append(current)
        current = add(current, g, spec)
    return frozenset(add(x, m, spec) for x in base for m in multiples)


def generate(generators: Iterable[Sequence[int]], spec: FiniteGroupSpec) -> Subgroup:
    """Closure of a set of generators."""
    gens = tuple(dict.fromkeys(spec.check(g) for g in generators))
    elements: FrozenSet[Element] = frozenset([spec.zero()])
    for g in gens:
        if g not in elements:
            elements = span_with(elements, g, spec)
    return Subgroup(gens, elements)


def subgroup_from_elements(elements: Iterable[Sequence[int]], spec: FiniteGroupSpec) -> Subgroup:
    """
    Build a Subgroup from its full element list.

    Raises:
        NotSubgroupError: If the elements are not closed under addition
    """
    wanted = frozenset(spec.check(g) for g in elements)
    gens: List[Element] = []
    current: FrozenSet[Element] = frozenset([spec.zero()])
    for g in sorted(wanted):
        if g not in current:
            gens.append(g)
            current = span_with(current, g, spec)
    if current != wanted:
        raise NotSubgroupError(f"Set of {len(wanted)} elements is not a subgroup of {spec.describe()}")
    return Subgroup(tuple(gens), current)


def _validate_subgroup(sub: Subgroup, spec: FiniteGroupSpec) -> None:
    if spec.zero() not in sub.elements:
        raise NotSubgroupError("Subgroup does not contain zero")
    for g in sub.generators:
        for x in sub.elements:
            if add(x, g, spec) not in sub.elements:
                raise NotSubgroupError(f"Subgroup not closed: {x} + {g} escapes")
    if generate(sub.generators, spec).elements != sub.elements:
        raise NotSubgroupError("Subgroup elements differ from the closure of its generators")


def _extensions(start: Subgroup, spec: FiniteGroupSpec, keep: Optional[FrozenSet[Element]] = None, max_order: Optional[int] = None) -> List[Subgroup]:
    """All subgroups above start, optionally meeting keep only in zero."""
    seen: Set[FrozenSet[Element]] = {start.elements}
    found = [start]
    stack = [start]
    all_elements = list(spec.elements())
    while stack:
        current = stack.pop()
        for g in all_elements:
            if g in current.elements:
                continue
            grown = span_with(current.elements, g, spec)
            if grown in seen:
                continue
            seen.add(grown)
            if max_order is not None and len(grown) > max_order:
                continue
            if keep is not None and len(grown & keep) > 1:
                continue
            sub = Subgroup(current.generators + (g,), grown)
            found.append(sub)
            stack.append(sub)
    return found


def all_subgroups(spec: FiniteGroupSpec) -> List[Subgroup]:
    """Every subgroup, ordered by size then by sorted elements."""
    subs = _extensions(generate([], spec), spec)
    return sorted(subs, key=lambda s: (s.order, s.sorted_elements()))


def subgroups_containing(elements: Iterable[Sequence[int]], spec: FiniteGroupSpec) -> List[Subgroup]:
    """Every subgroup that contains the given elements."""
    subs = _extensions(generate(elements, spec), spec)
    return sorted(subs, key=lambda s: (s.order, s.sorted_elements()))


def is_pure(sub: Subgroup, spec: FiniteGroupSpec) -> bool:
    """
    Check A ∩ p^k G = p^k A for every k.

    Args:
        sub: Candidate subgroup A
        spec: The ambient group G

    Returns:
        True if every element of A divisible by p^k in G is divisible by p^k inside A

    Raises:
        NotSubgroupError: If sub is not closed under the group operation
    """
    _validate_subgroup(sub, spec)
    for k in range(1, spec.max_exponent + 1):
        step = spec.p**k
        inside = frozenset(scale(y, step, spec) for y in sub.elements)
        for a in sub.elements:
            h = height(a, spec)
            if (h is None or h >= k) and a not in inside:
                logger.debug(f"{a} has height >= {k} in {spec.describe()} but not inside the subgroup")
                return False
    return True


def find_pure_complement(sub: Subgroup, spec: FiniteGroupSpec) -> Optional[Subgroup]:
    """
    Find C with sub ∩ C = 0 and sub + C = G.

    The lexicographically least complement (by sorted element list) is
    returned so that answers are deterministic.

    Returns:
        The complement, or None if none exists
    """
    total = spec.order
    if sub.order == 1:
        return generate([spec.unit(i) for i in range(spec.rank)], spec)
    if sub.order == total:
        return generate([], spec)
    if total % sub.order:
        return None
    target = total // sub.order
    candidates = [c for c in _extensions(generate([], spec), spec, keep=sub.elements, max_order=target) if c.order == target]
    if not candidates:
        logger.warning(f"No complement found for a subgroup of order {sub.order} in {spec.describe()}")
        return None
    return min(candidates, key=lambda c: c.sorted_elements())


def _generator_order(spec: FiniteGroupSpec) -> List[Element]:
    indices = sorted(range(spec.rank), key=lambda i: (-spec.exponents[i], i))
    return [spec.unit(i) for i in indices]


def _relative_order(g: Element, domain: Dict[Element, Element], spec: FiniteGroupSpec) -> int:
    """Least t >= 1 with p^t * g in the domain."""
    t = 1
    current = scale(g, spec.p, spec)
    while current not in domain:
        current = scale(current, spec.p, spec)
        t += 1
    return t


def _completions(phi: Dict[Element, Element], spec: FiniteGroupSpec, generators: List[Element]) -> Iterator[Dict[Element, Element]]:
    """Yield every automorphism extending the injective partial map phi."""
    pending = [g for g in generators if g not in phi]
    if not pending:
        yield dict(phi)
        return
    g = pending[0]
    t = _relative_order(g, phi, spec)
    step = spec.p**t
    target = phi[scale(g, step, spec)]
    image = set(phi.values())
    g_order = order_exponent(g, spec)
    g_height = height(g, spec)
    candidates = itertools.chain([g], (h for h in spec.elements() if h != g))
    for h in candidates:
        if h in image or order_exponent(h, spec) != g_order or height(h, spec) != g_height:
            continue
        if scale(h, step, spec) != target or scale(h, step // spec.p, spec) in image:
            continue
        extended: Dict[Element, Element] = {}
        consistent = True
        for x, fx in phi.items():
            src, dst = x, fx
            for _ in range(1, step):
                src = add(src, g, spec)
                dst = add(dst, h, spec)
                if height(src, spec) != height(dst, spec):
                    consistent = False
                    break
                extended[src] = dst
            if not consistent:
                break
        if not consistent:
            continue
        extended.update(phi)
        yield from _completions(extended, spec, generators)


def _seed_map(pairs: Sequence[Tuple[Sequence[int], Sequence[int]]], spec: FiniteGroupSpec) -> Optional[Dict[Element, Element]]:
    """Close a pairing to a partial isomorphism, None if no homomorphism extends it."""
    phi: Dict[Element, Element] = {spec.zero(): spec.zero()}
    for raw_a, raw_b in pairs:
        a, b = spec.check(raw_a), spec.check(raw_b)
        if a in phi:
            if phi[a] != b:
                raise InconsistentPairingError(f"{a} is paired with both {phi[a]} and {b}")
            continue
        t = _relative_order(a, phi, spec)
        step = spec.p**t
        if scale(b, step, spec) != phi[scale(a, step, spec)]:
            logger.debug(f"Pair {a} -> {b} breaks the order relation p^{t}")
            return None
        image = set(phi.values())
        if scale(b, step // spec.p, spec) in image:
            raise InconsistentPairingError(f"Pair {a} -> {b} makes the map non-injective")
        extended = dict(phi)
        for x, fx in phi.items():
            src, dst = x, fx
            for _ in range(1, step):
                src = add(src, a, spec)
                dst = add(dst, b, spec)
                extended[src] = dst
        phi = extended
    return phi


def extend_to_automorphism(pairs: Sequence[Tuple[Sequence[int], Sequence[int]]], spec: FiniteGroupSpec) -> Optional[Dict[Element, Element]]:
    """
    Extend a pairing of elements to an automorphism of the group.

    Args:
        pairs: (source, target) element pairs
        spec: The group

    Returns:
        A full element mapping, or None if no automorphism extends the pairing

    Raises:
        InconsistentPairingError: If the pairing is not a well-defined injective map
        ElementShapeError: If an element has the wrong number of coordinates
    """
    phi = _seed_map(pairs, spec)
    if phi is None:
        return None
    for result in _completions(phi, spec, _generator_order(spec)):
        return result
    return None


def automorphisms(spec: FiniteGroupSpec) -> Iterator[Dict[Element, Element]]:
    """Enumerate every automorphism, the identity first."""
    return _completions({spec.zero(): spec.zero()}, spec, _generator_order(spec))


def _basis_search(exponents: Sequence[int], candidates: Dict[int, List[Element]], spec: FiniteGroupSpec) -> Optional[List[Element]]:
    """
    Choose images for generators of the given exponents (descending).

    Each image must have exactly the generator's order and meet the span of
    the earlier images trivially; images for equal exponents are taken in
    increasing order.
    """
    images: List[Element] = []

    def search(index: int, span: FrozenSet[Element]) -> bool:
        if index == len(exponents):
            return True
        n = exponents[index]
        previous = images[-1] if index > 0 and exponents[index - 1] == n else None
        for h in candidates.get(n, []):
            if previous is not None and h <= previous:
                continue
            if scale(h, spec.p ** (n - 1), spec) in span:
                continue
            images.append(h)
            if search(index + 1, span_with(span, h, spec)):
                return True
            images.pop()
        return False

    if search(0, frozenset([spec.zero()])):
        return images
    return None


def subgroup_exponents(sub: Subgroup, spec: FiniteGroupSpec) -> Tuple[int, ...]:
    """Cyclic decomposition of a subgroup, exponents in descending order."""
    by_order: Dict[int, int] = {}
    for g in sub.elements:
        n = order_exponent(g, spec)
        by_order[n] = by_order.get(n, 0) + 1
    at_least_counts: List[int] = []
    killed = 1
    previous_rank = 0
    k = 0
    while killed < sub.order:
        k += 1
        killed += by_order.get(k, 0)
        rank = valuation(spec.p, killed) if killed > 1 else 0
        # number of summands of exponent >= k
        at_least = rank - previous_rank
        previous_rank = rank
        at_least_counts.append(at_least)
    result: List[int] = []
    for k, at_least in enumerate(at_least_counts, start=1):
        above = at_least_counts[k] if k < len(at_least_counts) else 0
        result.extend([k] * (at_least - above))
    return tuple(sorted(result, reverse=True))


def find_basis(sub: Subgroup, spec: FiniteGroupSpec) -> Tuple[Tuple[int, ...], List[Element]]:
    """
    Express a subgroup as a direct sum of cyclic groups.

    Returns:
        The exponents (descending) and one generator per summand
    """
    exponents = subgroup_exponents(sub, spec)
    multiples = frozenset(scale(g, spec.p, spec) for g in sub.elements)
    candidates: Dict[int, List[Element]] = {}
    for g in sorted(sub.elements):
        if g not in multiples:
            candidates.setdefault(order_exponent(g, spec), []).append(g)
    basis = _basis_search(exponents, candidates, spec)
    if basis is None:
        raise FiniteGroupError(f"No basis found for a subgroup of order {sub.order}")
    return exponents, basis


def brute_force_isomorphic(a: FiniteGroupSpec, b: FiniteGroupSpec, bound: Optional[int] = None) -> bool:
    """
    Decide isomorphism by backtracking over generator images.

    Generators of a are mapped, in decreasing order of exponent, to elements
    of b of the same order and height 0 whose cyclic subgroup meets the span
    of earlier images trivially.

    Raises:
        SearchBoundError: If either group is larger than the search bound
    """
    limit = bound if bound is not None else configured_max_order()
    if a.order > limit or b.order > limit:
        raise SearchBoundError(f"Groups of order {a.order} and {b.order} exceed the search bound {limit}")
    if a.order == 1 and b.order == 1:
        return True
    if a.p != b.p or a.order != b.order:
        return False
    candidates: Dict[int, List[Element]] = {}
    for h in b.elements():
        if height(h, b) == 0:
            candidates.setdefault(order_exponent(h, b), []).append(h)
    return _basis_search(sorted(a.exponents, reverse=True), candidates, b) is not None
