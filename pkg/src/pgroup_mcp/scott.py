"""
Scott formulas for the covered categoricity classes.

A tuple's formula is computed from a finite model of the group in which every
coordinate carries a role (divisible, homogeneous or finite). Formulas for
groups with a finite summand follow the product form: the main part and the
finite part are described separately and a tuple satisfies the formula when
its two components satisfy their halves.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .finite_core import (
    Element,
    FiniteGroupSpec,
    InconsistentPairingError,
    SearchBoundError,
    add,
    automorphisms,
    configured_max_order,
    extend_to_automorphism,
    find_basis,
    height,
    is_pure,
    order_exponent,
    scale,
    subgroups_containing,
)
from .invariants import HeightSearch, StageVerdict, classify_categoricity
from .limitwise import decompose_complement
from .presentations import PART_DIVISIBLE, PART_FINITE, PART_HOMOGENEOUS, IsoTypeSpec, PresentationError, StagedPresentation
from .series import CompositionSeries, Coordinates, cyclic_basis
from .types import CategoricityLevel, FormulaShape, Verdict

logger = logging.getLogger(__name__)

# divisible summands are truncated at least this much deeper than any cyclic exponent
TRUNCATION_MARGIN = 3


class ScottFormulaError(Exception):
    """Exception raised for malformed formulas or arity mismatches."""

    pass


class InconsistentEvaluationError(ScottFormulaError):
    """Exception raised when a formula evaluates differently over a group and over its subgroups."""

    pass


class UncoveredClassError(Exception):
    """Exception raised for types outside the classes with generated Scott families."""

    pass


class TruncationPolicyError(Exception):
    """Exception raised when a finite truncation could create spurious formula collisions."""

    pass


class EnclosureNotFoundError(Exception):
    """Exception raised when no finite pure enclosure can be searched within bounds."""

    pass


@dataclass(frozen=True)
class ScottFormula:
    """A Scott formula in normalized form; syntactic equality is the collision test."""

    shape: FormulaShape
    tuple_length: int
    parameters: Tuple[int, ...] = ()
    orders: Tuple[int, ...] = ()
    relations: Tuple[Tuple[int, ...], ...] = ()
    flags: Tuple[Tuple[Tuple[int, ...], Tuple[bool, ...]], ...] = ()
    finite_part: Tuple[int, ...] = ()
    finite_orbit: Tuple[Element, ...] = ()
    diagram: Tuple[int, ...] = ()
    diagram_tuple: Tuple[Element, ...] = ()
    certificate: str = field(default="", compare=False)
    witnesses: Tuple[Element, ...] = field(default=(), compare=False)

    def serialize(self) -> List[str]:
        """Deterministic line-based text form."""
        lines = [f"shape: {self.shape}", f"tuple_length: {self.tuple_length}", f"parameters: {' '.join(map(str, self.parameters))}".rstrip()]
        if self.shape == FormulaShape.pure_diagram:
            lines.append(f"diagram: {' '.join(map(str, self.diagram))}".rstrip())
            for x in self.diagram_tuple:
                lines.append(f"row: {' '.join(map(str, x))}".rstrip())
            lines.append("purity: p^n*x = g -> exists y in F with p^n*y = g")
            if self.certificate:
                lines.append(f"certificate: {self.certificate}")
            return lines
        lines.append(f"orders: {' '.join(map(str, self.orders))}".rstrip())
        for r in self.relations:
            lines.append(f"relation: {' '.join(map(str, r))}")
        for coeffs, marks in self.flags:
            lines.append(f"flags: {' '.join(map(str, coeffs))} : {' '.join('1' if m else '0' for m in marks)}")
        if self.finite_part:
            lines.append(f"finite_part: {' '.join(map(str, self.finite_part))}")
            for x in self.finite_orbit:
                lines.append(f"finite_row: {' '.join(map(str, x))}".rstrip())
        return lines


@dataclass(frozen=True)
class Truncation:
    """A finite model of a type, one role per coordinate."""

    spec: FiniteGroupSpec
    roles: Tuple[str, ...]

    def coordinates(self, role: str) -> List[int]:
        return [i for i, r in enumerate(self.roles) if r == role]


def policy_depth(t: IsoTypeSpec, copies: int = 2) -> int:
    """Shallowest divisible depth that truncate accepts for t."""
    reduced = list(t.cyclic_infinite) + t.finite_summands()
    if t.has_unbounded_period and t.sfunction is not None:
        reduced += t.sfunction.limits(copies)
    return TRUNCATION_MARGIN + max(reduced, default=0)


def truncate(t: IsoTypeSpec, depth: int, copies: int = 2) -> Truncation:
    """
    Finite model of t: divisible summands become Z(p^depth), each infinitely
    repeated cyclic summand appears copies times.

    Raises:
        TruncationPolicyError: If depth is too shallow for the cyclic exponents
    """
    exponents: List[int] = []
    roles: List[str] = []
    rank = copies if t.divisible_rank is None else t.divisible_rank
    exponents += [depth] * rank
    roles += [PART_DIVISIBLE] * rank
    for m in sorted(t.cyclic_infinite, reverse=True):
        exponents += [m] * copies
        roles += [PART_HOMOGENEOUS] * copies
    finite = t.finite_summands()
    if t.has_unbounded_period and t.sfunction is not None:
        finite = sorted(finite + [m for m in t.sfunction.limits(copies) if m >= 1], reverse=True)
    exponents += finite
    roles += [PART_FINITE] * len(finite)
    reduced = [e for e, r in zip(exponents, roles) if r != PART_DIVISIBLE]
    if rank and reduced and depth < TRUNCATION_MARGIN + max(reduced):
        raise TruncationPolicyError(f"Divisible depth {depth} must be at least {TRUNCATION_MARGIN} + {max(reduced)}")
    return Truncation(FiniteGroupSpec(t.p, tuple(exponents)), tuple(roles))


def infer_truncation(t: IsoTypeSpec, spec: FiniteGroupSpec) -> Truncation:
    """
    Assign roles to the coordinates of a finite approximation of t.

    Raises:
        TruncationPolicyError: If spec is not a policy-compliant truncation of t
    """
    if spec.p != t.p:
        raise TruncationPolicyError(f"Truncation over p={spec.p} for a type over p={t.p}")
    roles: List[str] = []
    if t.divisible_rank != 0:
        if not spec.exponents:
            raise TruncationPolicyError("Truncation has no coordinates for the divisible part")
        depth = spec.max_exponent
        for e in spec.exponents:
            if e == depth:
                roles.append(PART_DIVISIBLE)
            elif e > depth - TRUNCATION_MARGIN:
                raise TruncationPolicyError(f"Cyclic exponent {e} is within {TRUNCATION_MARGIN} of the divisible depth {depth}")
            else:
                roles.append(PART_HOMOGENEOUS if e in t.cyclic_infinite else PART_FINITE)
        count = roles.count(PART_DIVISIBLE)
        if t.divisible_rank is not None and count != t.divisible_rank:
            raise TruncationPolicyError(f"Truncation has {count} divisible coordinates, type has rank {t.divisible_rank}")
    else:
        roles = [PART_HOMOGENEOUS if e in t.cyclic_infinite else PART_FINITE for e in spec.exponents]
    allowed: Dict[int, int] = {}
    for e in t.finite_summands():
        allowed[e] = allowed.get(e, 0) + 1
    used: Dict[int, int] = {}
    for e, r in zip(spec.exponents, roles):
        if r == PART_FINITE:
            used[e] = used.get(e, 0) + 1
    if not t.has_unbounded_period:
        for e, k in used.items():
            if k > allowed.get(e, 0):
                raise TruncationPolicyError(f"Truncation has {k} summands Z({t.p}^{e}) but the type has {allowed.get(e, 0)}")
    return Truncation(spec, tuple(roles))


def formula_shape(t: IsoTypeSpec) -> FormulaShape:
    """
    Shape of the formulas used for t.

    Raises:
        UncoveredClassError: If t is not in a class with generated Scott families
    """
    level = classify_categoricity(t).level
    if level == CategoricityLevel.computably_categorical:
        if t.reduced_is_finite:
            return FormulaShape.orders_and_relations
        return FormulaShape.orders_relations_divisibility
    if level == CategoricityLevel.delta2_relatively:
        if t.divisible_rank == 0:
            return FormulaShape.pure_diagram
        return FormulaShape.orders_relations_divisibility
    raise UncoveredClassError(f"No Scott family is generated for {level} types: {t.describe()}")


def flag_depths(t: IsoTypeSpec) -> int:
    """Number of divisibility flags p^1 .. p^(r-1) recorded for bounded reduced parts."""
    if classify_categoricity(t).level == CategoricityLevel.computably_categorical:
        return 0
    exponents = list(t.cyclic_infinite) + t.finite_summands()
    return max(max(exponents, default=1) - 1, 0)


@lru_cache(maxsize=64)
def _automorphism_list(spec: FiniteGroupSpec) -> Tuple[Dict[Element, Element], ...]:
    return tuple(automorphisms(spec))


def orbit_minimum(spec: FiniteGroupSpec, elements: Sequence[Element]) -> Tuple[Element, ...]:
    """Least image of a tuple under the automorphism group."""
    if not elements:
        return ()
    return min(tuple(alpha[x] for x in elements) for alpha in _automorphism_list(spec))


def _project(x: Element, indices: Sequence[int]) -> Element:
    return tuple(x[i] for i in indices)


class _Oracle:
    """Answers divisibility questions about elements of a finite model."""

    def in_divisible(self, x: Element) -> bool:
        raise NotImplementedError

    def reduced_height_at_least(self, x: Element, k: int) -> bool:
        raise NotImplementedError


class _TruncationOracle(_Oracle):
    def __init__(self, model: Truncation):
        self.model = model
        self.divisible = set(model.coordinates(PART_DIVISIBLE))

    def in_divisible(self, x: Element) -> bool:
        return all(c == 0 or i in self.divisible for i, c in enumerate(x))

    def reduced_height_at_least(self, x: Element, k: int) -> bool:
        reduced = tuple(0 if i in self.divisible else c for i, c in enumerate(x))
        h = height(reduced, self.model.spec)
        return h is None or h >= k


class _PresentationOracle(_Oracle):
    def __init__(self, coords: Coordinates, model: Truncation, search: HeightSearch):
        self.coords = coords
        self.model = model
        self.search = search
        self.divisible = set(model.coordinates(PART_DIVISIBLE))

    def in_divisible(self, x: Element) -> bool:
        return self.search.divisible_guess(self.coords.element(x)) == Verdict.yes

    def reduced_height_at_least(self, x: Element, k: int) -> bool:
        reduced = tuple(0 if i in self.divisible else c for i, c in enumerate(x))
        return self.search.at_least(self.coords.element(reduced), k)


def _main_and_finite(model: Truncation) -> Tuple[List[int], List[int]]:
    finite = model.coordinates(PART_FINITE)
    main = [i for i in range(len(model.roles)) if i not in finite]
    return main, finite


def _lift(x: Element, indices: Sequence[int], rank: int) -> Element:
    full = [0] * rank
    for i, c in zip(indices, x):
        full[i] = c
    return tuple(full)


def _product_formula(shape: FormulaShape, model: Truncation, elements: Sequence[Element], oracle: _Oracle, depths: int) -> ScottFormula:
    spec = model.spec
    main, finite = _main_and_finite(model)
    main_spec = FiniteGroupSpec(spec.p, tuple(spec.exponents[i] for i in main))
    finite_spec = FiniteGroupSpec(spec.p, tuple(spec.exponents[i] for i in finite))
    mains = [_project(x, main) for x in elements]
    orders = tuple(order_exponent(m, main_spec) for m in mains)
    relations: List[Tuple[int, ...]] = []
    flags: List[Tuple[Tuple[int, ...], Tuple[bool, ...]]] = []
    for coeffs in itertools.product(*(range(spec.p**o) for o in orders)):
        combo = main_spec.zero()
        for c, m in zip(coeffs, mains):
            combo = add(combo, scale(m, c, main_spec), main_spec)
        if combo == main_spec.zero():
            relations.append(coeffs)
        elif shape == FormulaShape.orders_relations_divisibility:
            lifted = _lift(combo, main, spec.rank)
            marks = (oracle.in_divisible(lifted),) + tuple(oracle.reduced_height_at_least(lifted, k) for k in range(1, depths + 1))
            flags.append((coeffs, marks))
    finite_orbit = orbit_minimum(finite_spec, [_project(x, finite) for x in elements]) if finite else ()
    return ScottFormula(
        shape=shape,
        tuple_length=len(elements),
        orders=orders,
        relations=tuple(relations),
        flags=tuple(flags),
        finite_part=finite_spec.exponents,
        finite_orbit=finite_orbit,
    )


def _pure_diagram(model: Truncation, elements: Sequence[Element]) -> ScottFormula:
    """
    Diagram of a minimal pure subgroup F containing the tuple.

    F is searched inside the direct summand spanned by the coordinates the
    tuple uses; among minimal candidates the least normalized diagram wins.
    """
    spec = model.spec
    support = [i for i in range(spec.rank) if any(x[i] for x in elements)]
    local = FiniteGroupSpec(spec.p, tuple(spec.exponents[i] for i in support))
    if local.order > configured_max_order():
        raise EnclosureNotFoundError(f"Support summand of order {local.order} exceeds the search bound")
    points = [_project(x, support) for x in elements]
    pure = [s for s in subgroups_containing(points, local) if is_pure(s, local)]
    smallest = min(s.order for s in pure)
    minimal = [s for s in pure if s.order == smallest]
    best: Optional[Tuple[Tuple[int, ...], Tuple[Element, ...]]] = None
    witness: Tuple[Element, ...] = ()
    for sub in minimal:
        exponents, basis = find_basis(sub, local)
        canonical = FiniteGroupSpec(spec.p, exponents)
        to_canonical: Dict[Element, Element] = {}
        for coeffs in canonical.elements():
            image = local.zero()
            for c, b in zip(coeffs, basis):
                image = add(image, scale(b, c, local), local)
            to_canonical[image] = coeffs
        key = (exponents, orbit_minimum(canonical, [to_canonical[x] for x in points]))
        if best is None or key < best:
            best = key
            witness = tuple(_lift(b, support, spec.rank) for b in basis)
    assert best is not None
    certificate = f"no proper pure subgroup; minimal order {smallest} among {len(pure)} pure enclosures"
    return ScottFormula(
        shape=FormulaShape.pure_diagram,
        tuple_length=len(elements),
        diagram=best[0],
        diagram_tuple=best[1],
        certificate=certificate,
        witnesses=witness,
    )


def formula_in_model(t: IsoTypeSpec, model: Truncation, elements: Sequence[Element], oracle: Optional[_Oracle] = None, shape: Optional[FormulaShape] = None) -> ScottFormula:
    """Formula of a tuple of elements of a finite model of t."""
    shape = shape or formula_shape(t)
    checked = [model.spec.check(x) for x in elements]
    if shape == FormulaShape.pure_diagram:
        return _pure_diagram(model, checked)
    return _product_formula(shape, model, checked, oracle or _TruncationOracle(model), flag_depths(t) if shape == FormulaShape.orders_relations_divisibility else 0)


def _presentation_model(t: IsoTypeSpec, G: StagedPresentation, budget: int) -> Tuple[Coordinates, Truncation]:
    """
    Finite model of stage budget of G: a cyclic basis with one role per coordinate.

    Divisible coordinates come from a basis of the divisible part of the
    stage, reduced ones from a basis of the complement grown beside it.
    """
    if t.divisible_rank == 0:
        series = CompositionSeries(G, budget)
        divisible: List[Tuple[int, int]] = []
        reduced = cyclic_basis(series)
    else:
        chain = decompose_complement(G, budget)
        series = chain.series
        divisible = cyclic_basis(series, [y for y, _ in chain.divisible.image_rows()])
        reduced = cyclic_basis(series, [g for _, g in chain.steps])
    coords = Coordinates(series, divisible + reduced)
    roles = [PART_DIVISIBLE] * len(divisible) + [PART_HOMOGENEOUS if e in t.cyclic_infinite else PART_FINITE for _, e in reduced]
    return coords, Truncation(coords.spec, tuple(roles))


def generate_scott_formula(t: IsoTypeSpec, G: StagedPresentation, tuple_ids: Sequence[int], budget: int) -> ScottFormula:
    """
    Generate the Scott formula of a tuple of a presentation of t.

    Args:
        t: The isomorphism type of G
        G: The presentation
        tuple_ids: Element ids
        budget: Stage at which divisibility is judged

    Raises:
        UncoveredClassError: If t has no generated Scott family
        EnclosureNotFoundError: If the pure enclosure search is out of bounds
        PresentationError: If an id is not present at the budget stage
        DivisiblePartError: If t has divisible summands and G only enumerates its divisible part
    """
    shape = formula_shape(t)
    for g in tuple_ids:
        if g >= G.universe_size(budget):
            raise PresentationError(f"Element {g} is not present at stage {budget}")
    coords, model = _presentation_model(t, G, budget)
    elements = [coords.coordinates(g) for g in tuple_ids]
    oracle = _PresentationOracle(coords, model, HeightSearch(G, budget))
    formula = formula_in_model(t, model, elements, oracle, shape=shape)
    logger.debug(f"Formula for {tuple(tuple_ids)} at stage {budget}: {formula.shape}")
    return formula


def satisfies(t: IsoTypeSpec, G: StagedPresentation, tuple_ids: Sequence[int], formula: ScottFormula, budget: int) -> StageVerdict:
    """
    Search the stages up to budget for one at which the tuple has the given formula.

    Returns:
        yes with the first such stage, unknown when the budget runs out first

    Raises:
        ScottFormulaError: If the tuple length does not match the formula
    """
    if len(tuple_ids) != formula.tuple_length:
        raise ScottFormulaError(f"Formula has arity {formula.tuple_length}, tuple has {len(tuple_ids)} elements")
    for s in range(budget + 1):
        if any(g >= G.universe_size(s) for g in tuple_ids):
            continue
        try:
            own = generate_scott_formula(t, G, tuple_ids, s)
        except (PresentationError, EnclosureNotFoundError) as e:
            logger.debug(f"No formula for {tuple(tuple_ids)} at stage {s}: {str(e)}")
            continue
        if own == formula:
            return StageVerdict(Verdict.yes, s, 0, ((s, Verdict.yes),))
    logger.debug(f"Tuple {tuple(tuple_ids)} not seen with the formula by stage {budget}")
    return StageVerdict(Verdict.unknown, budget)



@dataclass
class ScottReport:
    """Outcome of an exhaustive Scott-family check."""

    tuple_length: int
    tuples_checked: int = 0
    formula_classes: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations

    def lines(self) -> List[str]:
        out = [f"tuple_length: {self.tuple_length}", f"tuples_checked: {self.tuples_checked}", f"formula_classes: {self.formula_classes}", f"violations: {len(self.violations)}"]
        out.extend(f"violation: {v}" for v in self.violations)
        return out


def verify_scott_family(t: IsoTypeSpec, truncation: Union[FiniteGroupSpec, Truncation], tuple_length: int, budget: Optional[int] = None) -> ScottReport:
    """
    Check that tuples with equal formulas are automorphic in a finite truncation.

    Args:
        t: The isomorphism type
        truncation: A finite approximation of t, with or without explicit roles
        tuple_length: Length of the tuples compared
        budget: Largest number of tuples to enumerate, PGL_MAX_ORDER by default

    Raises:
        TruncationPolicyError: If the truncation violates the truncation policy
        SearchBoundError: If there are more tuples than the budget allows
    """
    model = truncation if isinstance(truncation, Truncation) else infer_truncation(t, truncation)
    shape = formula_shape(t)
    report = ScottReport(tuple_length)
    if tuple_length <= 0:
        return report
    spec = model.spec
    limit = budget if budget is not None else configured_max_order()
    if spec.order**tuple_length > limit:
        raise SearchBoundError(f"{spec.order ** tuple_length} tuples exceed the budget {limit}")

    representatives: Dict[ScottFormula, Tuple[Element, ...]] = {}
    for tup in itertools.product(list(spec.elements()), repeat=tuple_length):
        report.tuples_checked += 1
        formula = formula_in_model(t, model, tup, shape=shape)
        rep = representatives.setdefault(formula, tup)
        if rep == tup:
            continue
        try:
            found = extend_to_automorphism(list(zip(rep, tup)), spec)
        except InconsistentPairingError as e:
            report.violations.append(f"{rep} ~ {tup}: {e}")
            continue
        if found is None:
            report.violations.append(f"{rep} ~ {tup}: no automorphism")
    report.formula_classes = len(representatives)
    if report.violations:
        logger.warning(f"Scott family check found {len(report.violations)} violations on {spec.describe()}")
    else:
        logger.info(f"Scott family check clean: {report.tuples_checked} tuples, {report.formula_classes} formulas")
    return report


@dataclass(frozen=True)
class Atom:
    """Linear equation sum(lhs) = sum(rhs), or its negation when equal is False."""

    lhs: Tuple[Tuple[str, int], ...]
    rhs: Tuple[Tuple[str, int], ...] = ()
    equal: bool = True


@dataclass(frozen=True)
class Not:
    inner: "Node"


@dataclass(frozen=True)
class And:
    parts: Tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    parts: Tuple["Node", ...]


@dataclass(frozen=True)
class Implies:
    premise: "Node"
    conclusion: "Node"


Node = Union[Atom, Not, And, Or, Implies]


@dataclass(frozen=True)
class Pi1Formula:
    """A universal formula: variables quantified over a quantifier-free matrix."""

    variables: Tuple[str, ...]
    matrix: Node

    def names(self) -> List[str]:
        found: List[str] = []

        def walk(node: Node) -> None:
            if isinstance(node, Atom):
                found.extend(name for name, _ in node.lhs + node.rhs)
            elif isinstance(node, Not):
                walk(node.inner)
            elif isinstance(node, (And, Or)):
                for part in node.parts:
                    walk(part)
            elif isinstance(node, Implies):
                walk(node.premise)
                walk(node.conclusion)
            else:
                raise ScottFormulaError(f"Unknown formula node {node!r}")

        walk(self.matrix)
        return found


def _combination(terms: Iterable[Tuple[str, int]], assignment: Mapping[str, Element], spec: FiniteGroupSpec) -> Element:
    total = spec.zero()
    for name, c in terms:
        total = add(total, scale(assignment[name], c, spec), spec)
    return total


def _evaluate(node: Node, assignment: Mapping[str, Element], spec: FiniteGroupSpec) -> bool:
    if isinstance(node, Atom):
        same = _combination(node.lhs, assignment, spec) == _combination(node.rhs, assignment, spec)
        return same if node.equal else not same
    if isinstance(node, Not):
        return not _evaluate(node.inner, assignment, spec)
    if isinstance(node, And):
        return all(_evaluate(part, assignment, spec) for part in node.parts)
    if isinstance(node, Or):
        return any(_evaluate(part, assignment, spec) for part in node.parts)
    if isinstance(node, Implies):
        return not _evaluate(node.premise, assignment, spec) or _evaluate(node.conclusion, assignment, spec)
    raise ScottFormulaError(f"Unknown formula node {node!r}")


def _holds_over(domain: Sequence[Element], theta: Pi1Formula, params: Mapping[str, Element], spec: FiniteGroupSpec) -> bool:
    for values in itertools.product(domain, repeat=len(theta.variables)):
        assignment = dict(params)
        assignment.update(zip(theta.variables, values))
        if not _evaluate(theta.matrix, assignment, spec):
            return False
    return True


def pi1_holds_in_all_finite_subgroups(spec: FiniteGroupSpec, theta: Pi1Formula, params: Mapping[str, Sequence[int]]) -> bool:
    """
    Decide a universal formula in every subgroup containing the parameters.

    The answer is computed over the full group and over every subgroup
    containing the parameters; the two must agree.

    Raises:
        ScottFormulaError: If the formula is malformed or mentions unknown names
        InconsistentEvaluationError: If the two evaluations disagree
    """
    checked = {name: spec.check(value) for name, value in params.items()}
    overlap = set(theta.variables) & set(checked)
    if overlap:
        raise ScottFormulaError(f"Names used both as variables and parameters: {sorted(overlap)}")
    if len(set(theta.variables)) != len(theta.variables):
        raise ScottFormulaError("Repeated quantified variable")
    unknown = set(theta.names()) - set(theta.variables) - set(checked)
    if unknown:
        raise ScottFormulaError(f"Unknown names in formula: {sorted(unknown)}")
    in_full = _holds_over(list(spec.elements()), theta, checked, spec)
    in_subgroups = all(_holds_over(sorted(sub.elements), theta, checked, spec) for sub in subgroups_containing(list(checked.values()), spec))
    if in_full != in_subgroups:
        raise InconsistentEvaluationError("Universal formula disagrees between the full group and its subgroups")
    return in_full


def order_divisibility_law(spec: FiniteGroupSpec, m: int) -> bool:
    """In a sum of copies of Z(p^m): o(g) <= p^k iff g is divisible by p^(m-k)."""
    for g in spec.elements():
        order = order_exponent(g, spec)
        h = height(g, spec)
        for k in range(m + 1):
            divisible = h is None or h >= m - k
            if (order <= k) != divisible:
                logger.warning(f"Order/height law fails at {g}, k={k}")
                return False
    return True


