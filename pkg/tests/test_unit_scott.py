"""Unit tests for scott module."""

import pytest

from pgroup_mcp import scott
from pgroup_mcp.finite_core import FiniteGroupSpec, SearchBoundError
from pgroup_mcp.presentations import PART_DIVISIBLE, PART_HOMOGENEOUS, IsoTypeSpec, build_from_iso_type
from pgroup_mcp.scott import (
    TRUNCATION_MARGIN,
    And,
    Atom,
    Implies,
    InconsistentEvaluationError,
    Not,
    Pi1Formula,
    ScottFormulaError,
    TruncationPolicyError,
    UncoveredClassError,
    flag_depths,
    formula_in_model,
    formula_shape,
    generate_scott_formula,
    infer_truncation,
    orbit_minimum,
    order_divisibility_law,
    pi1_holds_in_all_finite_subgroups,
    policy_depth,
    satisfies,
    truncate,
    verify_scott_family,
)
from pgroup_mcp.sfunction import SFunction
from pgroup_mcp.types import FormulaShape, Verdict

Z4_Z2 = IsoTypeSpec(2, cyclic_finite=((2, 1), (1, 1)))
RANK_ONE_HOMOGENEOUS = IsoTypeSpec(2, divisible_rank=1, cyclic_infinite=frozenset({1}))
BOUNDED_REDUCED = IsoTypeSpec(2, cyclic_infinite=frozenset({1, 2}))


class TestFormulaShape:
    """Test cases for shape selection."""

    def test_shapes(self) -> None:
        """Test the shape chosen for each covered class."""
        assert formula_shape(Z4_Z2) == FormulaShape.orders_and_relations
        assert formula_shape(RANK_ONE_HOMOGENEOUS) == FormulaShape.orders_relations_divisibility
        assert formula_shape(BOUNDED_REDUCED) == FormulaShape.pure_diagram
        assert formula_shape(IsoTypeSpec(2, divisible_rank=None, cyclic_infinite=frozenset({1}))) == FormulaShape.orders_relations_divisibility

    def test_uncovered(self) -> None:
        """Test that types without a generated family are rejected."""
        with pytest.raises(UncoveredClassError):
            formula_shape(IsoTypeSpec(2, divisible_rank=1, sfunction=SFunction.stairs(1, 1)))

    def test_flag_depths(self) -> None:
        """Test the number of divisibility flags."""
        assert flag_depths(RANK_ONE_HOMOGENEOUS) == 0
        assert flag_depths(IsoTypeSpec(2, divisible_rank=None, cyclic_infinite=frozenset({1, 3}))) == 2


class TestTruncation:
    """Test cases for finite truncations."""

    def test_truncate_roles(self) -> None:
        """Test exponents and roles of a truncation."""
        model = truncate(RANK_ONE_HOMOGENEOUS, policy_depth(RANK_ONE_HOMOGENEOUS))
        assert model.spec.exponents == (TRUNCATION_MARGIN + 1, 1, 1)
        assert model.roles == (PART_DIVISIBLE, PART_HOMOGENEOUS, PART_HOMOGENEOUS)

    def test_truncate_too_shallow(self) -> None:
        """Test that divisible coordinates must sit well above the cyclic ones."""
        with pytest.raises(TruncationPolicyError):
            truncate(RANK_ONE_HOMOGENEOUS, 2)

    def test_infer_truncation(self) -> None:
        """Test role inference for a bare finite group."""
        model = infer_truncation(RANK_ONE_HOMOGENEOUS, FiniteGroupSpec(2, (5, 1, 1)))
        assert model.roles == (PART_DIVISIBLE, PART_HOMOGENEOUS, PART_HOMOGENEOUS)

    def test_infer_truncation_rejects_close_exponent(self) -> None:
        """Test that a cyclic exponent near the divisible depth is rejected."""
        with pytest.raises(TruncationPolicyError):
            infer_truncation(RANK_ONE_HOMOGENEOUS, FiniteGroupSpec(2, (3, 1, 1)))

    def test_infer_truncation_rejects_extra_summands(self) -> None:
        """Test that a bounded type limits its finite summands."""
        with pytest.raises(TruncationPolicyError):
            infer_truncation(Z4_Z2, FiniteGroupSpec(2, (2, 1, 1)))


class TestFormulas:
    """Test cases for formula generation."""

    def test_orbit_minimum(self) -> None:
        """Test that automorphic elements share an orbit minimum."""
        spec = FiniteGroupSpec(2, (2, 1))
        assert orbit_minimum(spec, [(0, 1)]) == orbit_minimum(spec, [(2, 1)])
        assert orbit_minimum(spec, [(0, 1)]) != orbit_minimum(spec, [(2, 0)])
        assert orbit_minimum(spec, []) == ()

    def test_divisibility_flags_separate_elements(self) -> None:
        """Test that elements of equal order are told apart by divisibility."""
        model = truncate(RANK_ONE_HOMOGENEOUS, policy_depth(RANK_ONE_HOMOGENEOUS))
        inside = formula_in_model(RANK_ONE_HOMOGENEOUS, model, [(8, 0, 0)])
        outside = formula_in_model(RANK_ONE_HOMOGENEOUS, model, [(0, 1, 0)])
        assert inside.orders == outside.orders
        assert inside != outside

    def test_serialize(self) -> None:
        """Test the text form."""
        model = truncate(Z4_Z2, 0)
        lines = formula_in_model(Z4_Z2, model, [(1, 0)]).serialize()
        assert lines[0] == "shape: orders_and_relations"
        assert lines[1] == "tuple_length: 1"
        assert any(line.startswith("finite_part: ") for line in lines)

    def test_pure_diagram_serialize(self) -> None:
        """Test that diagrams carry the purity clause."""
        model = truncate(BOUNDED_REDUCED, 0, copies=1)
        lines = formula_in_model(BOUNDED_REDUCED, model, [(2, 0)]).serialize()
        assert lines[0] == "shape: pure_diagram"
        assert any(line.startswith("purity: ") for line in lines)

    def test_generate_and_satisfy(self) -> None:
        """Test formulas generated on a presentation."""
        G = build_from_iso_type(Z4_Z2)
        formula = generate_scott_formula(Z4_Z2, G, [1], 4)
        assert formula.tuple_length == 1
        verdict = satisfies(Z4_Z2, G, [1], formula, 4)
        assert verdict.value == Verdict.yes
        assert verdict.stage == 2

    def test_satisfies_needs_budget(self) -> None:
        """Test that a formula seen only once the group is complete is unknown at a smaller budget."""
        G = build_from_iso_type(Z4_Z2)
        formula = generate_scott_formula(Z4_Z2, G, [1], 4)
        assert satisfies(Z4_Z2, G, [1], formula, 1).value == Verdict.unknown
        assert satisfies(Z4_Z2, G, [1], formula, 2).value == Verdict.yes

    def test_satisfies_never_says_no(self) -> None:
        """Test that a tuple with another formula stays unknown."""
        G = build_from_iso_type(Z4_Z2)
        formula = generate_scott_formula(Z4_Z2, G, [1], 4)
        assert satisfies(Z4_Z2, G, [4], formula, 6).value == Verdict.unknown

    def test_generate_with_divisible_part(self) -> None:
        """Test that divisibility flags of a presentation match those of the truncation."""
        G = build_from_iso_type(RANK_ONE_HOMOGENEOUS)
        formula = generate_scott_formula(RANK_ONE_HOMOGENEOUS, G, [1], 9)
        assert formula.shape == FormulaShape.orders_relations_divisibility
        assert formula.tuple_length == 1
        assert satisfies(RANK_ONE_HOMOGENEOUS, G, [1], formula, 9).value == Verdict.yes

    def test_satisfies_arity(self) -> None:
        """Test that the tuple length must match."""
        G = build_from_iso_type(Z4_Z2)
        formula = generate_scott_formula(Z4_Z2, G, [1], 4)
        with pytest.raises(ScottFormulaError):
            satisfies(Z4_Z2, G, [1, 2], formula, 4)


class TestVerifyScottFamily:
    """Test cases for exhaustive checks on truncations."""

    def test_finite_group(self) -> None:
        """Test a finite group, where formulas describe automorphism orbits."""
        report = verify_scott_family(Z4_Z2, FiniteGroupSpec(2, (2, 1)), 1)
        assert report.clean
        assert report.tuples_checked == 8
        assert report.formula_classes == 4

    def test_finite_group_pairs(self) -> None:
        """Test pairs in a finite group."""
        report = verify_scott_family(Z4_Z2, FiniteGroupSpec(2, (2, 1)), 2)
        assert report.clean
        assert report.tuples_checked == 64

    def test_divisible_plus_homogeneous(self) -> None:
        """Test a divisible summand next to copies of Z(2)."""
        model = truncate(RANK_ONE_HOMOGENEOUS, policy_depth(RANK_ONE_HOMOGENEOUS))
        report = verify_scott_family(RANK_ONE_HOMOGENEOUS, model, 1)
        assert report.clean
        assert report.tuples_checked == 64

    def test_pure_diagram(self) -> None:
        """Test single elements and pairs under the diagram shape."""
        model = truncate(BOUNDED_REDUCED, 0, copies=1)
        assert verify_scott_family(BOUNDED_REDUCED, model, 1).clean
        assert verify_scott_family(BOUNDED_REDUCED, model, 2).clean

    @pytest.mark.parametrize(
        "rank, m, length, copies",
        [
            (0, 1, 2, 2),
            (0, 2, 2, 2),
            (0, 3, 2, 2),
            (1, 1, 2, 2),
            (1, 2, 1, 2),
            (1, 2, 2, 1),
            (1, 3, 1, 1),
            (2, 1, 1, 2),
        ],
    )
    def test_divisible_rank_with_homogeneous_part(self, rank: int, m: int, length: int, copies: int) -> None:
        """Test finite divisible rank next to omega copies of Z(2^m)."""
        t = IsoTypeSpec(2, divisible_rank=rank, cyclic_infinite=frozenset({m}))
        model = truncate(t, policy_depth(t, copies), copies)
        report = verify_scott_family(t, model, length)
        assert report.clean, report.violations[:3]
        assert report.tuples_checked == model.spec.order**length

    @pytest.mark.parametrize(
        "t",
        [
            IsoTypeSpec(2, cyclic_infinite=frozenset({1, 3})),
            IsoTypeSpec(3, cyclic_infinite=frozenset({1, 2})),
            IsoTypeSpec(2, cyclic_infinite=frozenset({1, 2}), cyclic_finite=((3, 1),)),
        ],
    )
    def test_reduced_pairs(self, t: IsoTypeSpec) -> None:
        """Test pairs in one-copy truncations of bounded reduced types."""
        model = truncate(t, 0, copies=1)
        assert verify_scott_family(t, model, 2).clean

    def test_empty_tuples(self) -> None:
        """Test that length zero checks nothing."""
        report = verify_scott_family(Z4_Z2, FiniteGroupSpec(2, (2, 1)), 0)
        assert report.tuples_checked == 0
        assert report.clean

    def test_budget(self) -> None:
        """Test that too many tuples are refused."""
        with pytest.raises(SearchBoundError):
            verify_scott_family(Z4_Z2, FiniteGroupSpec(2, (2, 1)), 2, budget=10)

    def test_report_lines(self) -> None:
        """Test the report form."""
        lines = verify_scott_family(Z4_Z2, FiniteGroupSpec(2, (2, 1)), 1).lines()
        assert lines == ["tuple_length: 1", "tuples_checked: 8", "formula_classes: 4", "violations: 0"]


class TestPi1Formulas:
    """Test cases for universal formulas over finite subgroups."""

    def test_exponent_law(self) -> None:
        """Test that 4y = 0 holds everywhere in Z(4) + Z(2)."""
        theta = Pi1Formula(("y",), Atom(lhs=(("y", 4),)))
        assert pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(2, (2, 1)), theta, {})

    def test_parameter_fails(self) -> None:
        """Test a formula refuted by zero."""
        theta = Pi1Formula(("y",), Atom(lhs=(("y", 1),), rhs=(("x", 1),)))
        assert not pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(2, (2, 1)), theta, {"x": (1, 0)})

    def test_disagreement_is_reported(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that disagreeing evaluations raise a formula error."""
        answers = iter([True])
        monkeypatch.setattr(scott, "_holds_over", lambda *args: next(answers, False))
        theta = Pi1Formula(variables=("x",), matrix=Atom(lhs=(("x", 2),)))
        with pytest.raises(InconsistentEvaluationError):
            pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(2, (1,)), theta, {})
        assert issubclass(InconsistentEvaluationError, ScottFormulaError)

    def test_connectives(self) -> None:
        """Test implication and negation: 2y = 0 and y != 0 imply 2y = 0."""
        premise = And((Atom(lhs=(("y", 2),)), Not(Atom(lhs=(("y", 1),)))))
        theta = Pi1Formula(("y",), Implies(premise, Atom(lhs=(("y", 2),))))
        assert pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(3, (1, 1)), theta, {})

    def test_unknown_name(self) -> None:
        """Test that free names must be parameters."""
        theta = Pi1Formula(("y",), Atom(lhs=(("z", 1),)))
        with pytest.raises(ScottFormulaError):
            pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(2, (1,)), theta, {})

    def test_name_clash(self) -> None:
        """Test that a name cannot be both bound and a parameter."""
        theta = Pi1Formula(("y",), Atom(lhs=(("y", 1),)))
        with pytest.raises(ScottFormulaError):
            pi1_holds_in_all_finite_subgroups(FiniteGroupSpec(2, (1,)), theta, {"y": (1,)})


class TestOrderDivisibilityLaw:
    """Test cases for the order/height law of homogeneous groups."""

    def test_homogeneous(self) -> None:
        """Test that the law holds in sums of copies of one cyclic group."""
        assert order_divisibility_law(FiniteGroupSpec(2, (2, 2)), 2)
        assert order_divisibility_law(FiniteGroupSpec(3, (1, 1, 1)), 1)

    def test_mixed(self) -> None:
        """Test that the law fails in Z(4) + Z(2)."""
        assert not order_divisibility_law(FiniteGroupSpec(2, (2, 1)), 2)
