"""Unit tests for presentations and sfunction modules."""

from fractions import Fraction

import pytest

from pgroup_mcp.invariants import order_of
from pgroup_mcp.presentations import (
    PART_DIVISIBLE,
    PART_FINITE,
    BuildError,
    Character,
    CharacterError,
    FrozenPresentationError,
    GrowthSchedule,
    IsoTypeSpec,
    PresentationError,
    build_equivalence,
    build_from_iso_type,
    plan_character_census,
    reveal,
    stage_view,
    transform_equiv_to_group,
)
from pgroup_mcp.sfunction import SFunction, SFunctionError
from pgroup_mcp.types import InfMode, ScheduleKind, Verdict


class TestSFunction:
    """Test cases for s-functions."""

    def test_tabulated_limits(self) -> None:
        """Test limits and settle stages of a table."""
        f = SFunction.tabulated([[0, 1, 1], [1, 2, 3]])
        assert f.limits() == [1, 3]
        assert f.value(1, 10) == 3
        assert f.settle_stage(0) == 1
        assert f.is_s1()

    def test_staircase(self) -> None:
        """Test the staircase formula."""
        f = SFunction.stairs(1, 2)
        assert f.row_count is None
        assert f.limits(4) == [1, 1, 2, 2]
        assert f.value(3, 1) == 1
        assert f.limit_multiplicity(5) == 2
        assert not f.is_s1()

    def test_staircase_needs_count(self) -> None:
        """Test that an unbounded function has no finite limit list."""
        with pytest.raises(SFunctionError):
            SFunction.stairs().limits()

    def test_rejects_decreasing_row(self) -> None:
        """Test that rows must be nondecreasing."""
        with pytest.raises(SFunctionError):
            SFunction.tabulated([[2, 1]])

    def test_rejects_both_forms(self) -> None:
        """Test that a function is tabulated or a staircase, not both."""
        with pytest.raises(SFunctionError):
            SFunction(rows=((1,),), staircase=(1, 1))


class TestCharacter:
    """Test cases for characters and isomorphism types."""

    def test_from_entries(self) -> None:
        """Test building a character from entries."""
        character = Character.from_entries([(2, 1), (1, 1), (1, 2)])
        assert character.multiplicity(1) == 2
        assert character.multiplicity(2) == 1
        assert character.contains(1, 2)
        assert not character.contains(2, 2)
        assert character.max_exponent() == 2

    def test_from_entries_not_downward_closed(self) -> None:
        """Test that (n, k) requires (n, k - 1)."""
        with pytest.raises(CharacterError):
            Character.from_entries([(1, 2)])

    def test_infinite_multiplicity(self) -> None:
        """Test infinite multiplicities."""
        character = Character(infinite=frozenset({2}))
        assert character.multiplicity(2) is None
        assert character.contains(2, 1000)

    def test_unbounded_character(self) -> None:
        """Test a character coming from a staircase."""
        character = Character(sfunction=SFunction.stairs(1, 1))
        assert not character.is_bounded
        assert character.max_exponent() is None
        assert character.contains(7, 1)

    def test_iso_type_merges_multiplicities(self) -> None:
        """Test that repeated cyclic entries add up."""
        t = IsoTypeSpec(2, cyclic_finite=((1, 1), (1, 2), (3, 1)))
        assert t.cyclic_finite == ((1, 3), (3, 1))
        assert t.finite_summands() == [3, 1, 1, 1]
        assert t.reduced_is_finite

    def test_iso_type_rejects_non_prime(self) -> None:
        """Test that p must be prime."""
        with pytest.raises(CharacterError):
            IsoTypeSpec(6)

    def test_describe(self) -> None:
        """Test the human-readable description."""
        t = IsoTypeSpec(3, divisible_rank=None, cyclic_infinite=frozenset({1}))
        assert t.describe() == "omega x Z(3^inf) + omega x Z(3^1)"
        assert IsoTypeSpec(2).describe() == "0"


class TestEquivalenceStructure:
    """Test cases for computable equivalence structures."""

    def test_class_sizes_and_relation(self) -> None:
        """Test a structure with classes of size 2 and 1."""
        A = build_equivalence(Character.from_entries([(2, 1), (1, 1)]), 0)
        assert A.class_sizes(5) == [2, 1]
        assert A.related(0, 1, 5)
        assert not A.related(0, 2, 5)
        assert A.representative(1) == 2
        assert plan_character_census(A, 5) == {(2, 1), (1, 1)}

    def test_element_not_present(self) -> None:
        """Test that elements beyond the universe are refused."""
        A = build_equivalence(Character.from_entries([(1, 1)]), 0)
        with pytest.raises(PresentationError):
            A.class_of(3, 4)

    def test_unbounded_without_s1_witness(self) -> None:
        """Test that a staircase with repeats needs infinitely many infinite classes in computable mode."""
        with pytest.raises(BuildError):
            build_equivalence(Character(sfunction=SFunction.stairs(1, 2)), 0)

    def test_unbounded_with_s1_witness(self) -> None:
        """Test that an s1-function witness is accepted."""
        A = build_equivalence(Character(sfunction=SFunction.stairs(1, 1)), 0)
        assert A.universe_size(6) > 0

    def test_sigma1_infinite_classes(self) -> None:
        """Test that infinite classes are only announced after a delay."""
        A = build_equivalence(Character(), 1, inf_mode=InfMode.sigma1)
        assert A.universe_size(20) == 21
        assert A.infinite_class_verdict(0, 0) == Verdict.unknown
        assert A.infinite_class_verdict(0, 20) == Verdict.yes

    def test_transform_rejects_composite(self) -> None:
        """Test that the transformation needs a prime."""
        A = build_equivalence(Character.from_entries([(1, 1)]), 0)
        with pytest.raises(BuildError):
            transform_equiv_to_group(A, 4)

    def test_transform_shares_plan(self) -> None:
        """Test that classes become cyclic summands of the same size."""
        A = build_equivalence(Character.from_entries([(2, 1), (1, 1)]), 0)
        G = transform_equiv_to_group(A, 3)
        assert G.universe_size(5) == 3**3
        assert reveal(G).component_sizes(5) == [2, 1]


class TestStagedPresentation:
    """Test cases for staged group presentations."""

    def test_cyclic_of_order_two(self) -> None:
        """Test Z(2)."""
        G = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((1, 1),)))
        assert G.universe_size(0) == 2
        assert G.add(1, 1) == 0
        assert G.plan.finished()

    def test_cyclic_of_order_four(self) -> None:
        """Test that Z(4) grows one element layer per stage."""
        G = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((2, 1),)))
        assert G.universe_size(0) == 2
        assert G.universe_size(1) == 4
        assert G.add(2, 2) == 1
        assert G.add(2, 3) == 0
        assert order_of(G, 2) == 2
        assert reveal(G).coordinates(3) == {0: Fraction(3, 4)}

    def test_event_blocks(self) -> None:
        """Test that the second summand gets the ids of the second event."""
        G = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((1, 2),)))
        G.plan.advance_to(3)
        decoder = reveal(G)
        assert decoder.coordinates(2) == {1: Fraction(1, 2)}
        assert G.add(1, 2) == 3

    def test_divisible_part_grows_forever(self) -> None:
        """Test Z(2^inf)."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1))
        assert G.universe_size(4) == 2**5
        assert not G.plan.finished()
        assert G.divisible_verdict(1, 4) == Verdict.yes

    def test_reduced_part_verdict(self) -> None:
        """Test that elements outside the divisible part are reported as such."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1, cyclic_finite=((1, 1),)))
        assert G.divisible_verdict(1, 3) == Verdict.no

    def test_sigma1_divisible_part(self) -> None:
        """Test that sigma1 presentations reveal the divisible part late."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1), inf_mode=InfMode.sigma1)
        assert G.divisible_verdict(1, 0) == Verdict.unknown
        assert G.divisible_verdict(1, 8) == Verdict.yes

    def test_freeze(self) -> None:
        """Test that a frozen presentation does not grow."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1))
        G.universe_size(3)
        G.freeze()
        assert G.frozen
        assert G.universe_size(2) == 2**3
        with pytest.raises(FrozenPresentationError):
            G.universe_size(5)

    def test_unmaterialized_element(self) -> None:
        """Test that ids beyond the materialized universe are refused."""
        G = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((1, 1),)))
        G.universe_size(0)
        with pytest.raises(PresentationError):
            G.add(5, 1)

    def test_stage_view_roundtrip(self) -> None:
        """Test that a stage view embeds ids and maps them back."""
        G = build_from_iso_type(IsoTypeSpec(3, cyclic_finite=((2, 1), (1, 1))))
        view = stage_view(G, 4)
        assert view.spec.order == 27
        assert view.parts == (PART_FINITE, PART_FINITE)
        for g in range(view.universe_size):
            assert view.id_of(view.embed(g)) == g

    def test_delayed_schedule(self) -> None:
        """Test that a delayed schedule opens classes before growing any."""
        schedule = GrowthSchedule(kind=ScheduleKind.delayed, delay=5)
        G = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((2, 1), (1, 1))), schedule)
        assert reveal(G).component_sizes(3) == [1, 1]
        assert reveal(G).component_sizes(5) == [2, 1]

    def test_shuffled_schedule_is_seeded(self) -> None:
        """Test that equal seeds give equal growth."""
        t = IsoTypeSpec(2, divisible_rank=2, cyclic_infinite=frozenset({1}))
        first = build_from_iso_type(t, GrowthSchedule(kind=ScheduleKind.shuffled, seed=7))
        second = build_from_iso_type(t, GrowthSchedule(kind=ScheduleKind.shuffled, seed=7))
        assert reveal(first).component_sizes(12) == reveal(second).component_sizes(12)

    def test_divisible_components(self) -> None:
        """Test the decoder's view of the divisible part."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1, cyclic_finite=((1, 1),)))
        decoder = reveal(G)
        assert decoder.divisible_components(4) == [1]
        assert decoder.part(1) == PART_DIVISIBLE
        assert decoder.settled_finite_spec(4).exponents == (1,)
