"""Unit tests for limitwise module."""

from fractions import Fraction

import pytest

from pgroup_mcp.invariants import height_at_least, order_of
from pgroup_mcp.limitwise import (
    STATUS_MISMATCH,
    STATUS_STABILIZED,
    DivisiblePartError,
    LimitMap,
    LimitwiseError,
    character_from_sfunction,
    decompose_complement,
    delta2_isomorphism,
    mind_change_census,
    sfunction_limits,
)
from pgroup_mcp.presentations import GrowthSchedule, IsoTypeSpec, build_from_iso_type, reveal
from pgroup_mcp.sfunction import SFunction
from pgroup_mcp.types import InfMode, ScheduleKind, Verdict

Z4_Z2 = IsoTypeSpec(2, cyclic_finite=((2, 1), (1, 1)))


class TestSFunctionHelpers:
    """Test cases for s-function limits and characters."""

    def test_limits(self) -> None:
        """Test limits of tabulated and staircase functions."""
        assert sfunction_limits(SFunction.tabulated([[1, 2], [0, 0, 3]])) == [2, 3]
        assert sfunction_limits(SFunction.stairs(2, 1), 3) == [2, 3, 4]

    def test_character(self) -> None:
        """Test the character of an s-function."""
        character = character_from_sfunction(SFunction.tabulated([[1, 2], [2], [0]]))
        assert character.contains(2, 2)
        assert not character.contains(2, 3)
        assert not character.contains(1, 1)


class TestDecomposeComplement:
    """Test cases for complements of the divisible part."""

    def test_divisible_group(self) -> None:
        """Test that a divisible group has trivial complement."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1))
        chain = decompose_complement(G, 6)
        assert chain.exponents() == ()
        assert chain.steps == ()
        assert "complement: 0" in chain.lines()

    def test_one_reduced_summand(self) -> None:
        """Test Z(2^inf) + Z(2)."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1, cyclic_finite=((1, 1),)))
        chain = decompose_complement(G, 6)
        assert chain.exponents() == (1,)
        assert chain.members == frozenset({0, 1})

    def test_odd_prime(self) -> None:
        """Test Z(3^inf) + Z(9) + Z(3)."""
        G = build_from_iso_type(IsoTypeSpec(3, divisible_rank=1, cyclic_finite=((2, 1), (1, 1))))
        chain = decompose_complement(G, 6)
        assert chain.exponents() == (2, 1)
        assert len(chain.members) == 27
        assert chain.members == frozenset(range(27))
        assert "members: 27" in chain.lines()

    def test_chain_is_monotone(self) -> None:
        """Test that every A_j is contained in A_(j+1)."""
        G = build_from_iso_type(IsoTypeSpec(3, divisible_rank=1, cyclic_finite=((2, 1), (1, 1))))
        chain = decompose_complement(G, 6)
        subgroups = [chain.subgroup(j) for j in range(len(chain.examined))]
        for earlier, later in zip(subgroups, subgroups[1:]):
            assert all(later.contains(y) for y, _ in earlier.image_rows())
            assert earlier.rank <= later.rank

    def test_membership(self) -> None:
        """Test membership decisions read off the chain."""
        G = build_from_iso_type(IsoTypeSpec(3, divisible_rank=1, cyclic_finite=((2, 1), (1, 1))))
        chain = decompose_complement(G, 6)
        members = chain.members
        assert chain.membership(0) == Verdict.yes
        assert chain.membership(5) == Verdict.yes
        assert chain.membership(G.universe_size(6)) == Verdict.unknown
        for x in range(1, chain.examined[-1]):
            assert chain.membership(x) == (Verdict.yes if x in members else Verdict.no)

    @pytest.mark.parametrize(
        "t, schedule",
        [
            (IsoTypeSpec(3, divisible_rank=1, cyclic_finite=((2, 1), (1, 1))), GrowthSchedule()),
            (IsoTypeSpec(2, divisible_rank=2, cyclic_infinite=frozenset({1})), GrowthSchedule(kind=ScheduleKind.shuffled, seed=7)),
            (IsoTypeSpec(2, divisible_rank=1, cyclic_infinite=frozenset({2}), cyclic_finite=((1, 1),)), GrowthSchedule(kind=ScheduleKind.shuffled, seed=2)),
        ],
    )
    def test_complement_is_exhaustive_and_pure(self, t: IsoTypeSpec, schedule: GrowthSchedule) -> None:
        """Test that A meets the divisible part in 0, A + D is the whole stage group and A is its reduced part."""
        stage = 8
        G = build_from_iso_type(t, schedule)
        chain = decompose_complement(G, stage)
        decoder = reveal(G)
        assert all(chain.in_sum(x) for x in range(G.universe_size(stage)))
        assert not any(decoder.in_divisible_part(x) for x in chain.members if x)
        assert chain.exponents() == decoder.settled_finite_spec(stage).exponents
        assert chain.id_limit is None

    def test_id_limit_bounds_the_search(self) -> None:
        """Test that an explicit id limit leaves later ids undecided."""
        G = build_from_iso_type(IsoTypeSpec(3, divisible_rank=1, cyclic_finite=((2, 1), (1, 1))))
        chain = decompose_complement(G, 6, id_limit=2)
        assert chain.examined[-1] <= 3
        assert chain.membership(5) == Verdict.unknown
        with pytest.raises(LimitwiseError):
            chain.in_sum(G.universe_size(6))

    def test_sigma1_refused(self) -> None:
        """Test that an enumerated divisible part is refused."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1), inf_mode=InfMode.sigma1)
        with pytest.raises(DivisiblePartError):
            decompose_complement(G, 4)

    def test_bad_arguments(self) -> None:
        """Test argument validation."""
        G = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1))
        with pytest.raises(LimitwiseError):
            decompose_complement(G, -1)
        with pytest.raises(LimitwiseError):
            decompose_complement(G, 3, id_limit=0)


class TestDelta2Isomorphism:
    """Test cases for stagewise isomorphism approximation."""

    def test_identity(self) -> None:
        """Test a presentation against itself."""
        G = build_from_iso_type(Z4_Z2)
        limit_map = delta2_isomorphism(G, G, 8)
        assert limit_map.status == STATUS_STABILIZED
        assert limit_map.total_mind_changes == 0
        assert limit_map.stabilized_prefix() == 8

    def test_delayed_copy_forces_retraction(self) -> None:
        """Test that a copy growing late makes an early image wrong."""
        G1 = build_from_iso_type(Z4_Z2)
        G2 = build_from_iso_type(Z4_Z2, GrowthSchedule(kind=ScheduleKind.delayed, delay=5))
        limit_map = delta2_isomorphism(G1, G2, 12)
        second_summand = reveal(G1).id_of({1: Fraction(1, 2)})
        assert limit_map.mind_changes.get(second_summand, 0) >= 1
        assert limit_map.status == STATUS_STABILIZED
        assert any(retract for _, g, _, retract in limit_map.changes if g == second_summand)

    def test_shuffled_infinite_pair_is_injective_homomorphism(self) -> None:
        """Test that the approximation between shuffled copies of omega Z(2) + omega Z(4) is an injective homomorphism."""
        t = IsoTypeSpec(2, cyclic_infinite=frozenset({1, 2}))
        G1 = build_from_iso_type(t)
        G2 = build_from_iso_type(t, GrowthSchedule(kind=ScheduleKind.shuffled, seed=3))
        limit_map = delta2_isomorphism(G1, G2, 8, prefix=16)
        images = {x: y for x, y in limit_map.current.items() if y is not None}
        assert images
        assert len(set(images.values())) == len(images)
        for x in images:
            for y in images:
                z = G1.add(x, y)
                if z in images:
                    assert images[z] == G2.add(images[x], images[y])

    def test_heights_are_preserved_on_mapped_generators(self) -> None:
        """Test that the final pairs of Z(4) + Z(2) against its delayed copy match orders and heights."""
        G1 = build_from_iso_type(Z4_Z2)
        G2 = build_from_iso_type(Z4_Z2, GrowthSchedule(kind=ScheduleKind.delayed, delay=5))
        limit_map = delta2_isomorphism(G1, G2, 12)
        for x in range(1, 8):
            y = limit_map.image(x)
            assert y is not None
            assert order_of(G1, x) == order_of(G2, y)
            assert height_at_least(G1, x, 1, 12).value == height_at_least(G2, y, 1, 12).value
        assert limit_map.mind_changes[4] == 1

    def test_finite_mismatch(self) -> None:
        """Test that Z(4) and Z(2) + Z(2) are told apart."""
        G1 = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((2, 1),)))
        G2 = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((1, 2),)))
        limit_map = delta2_isomorphism(G1, G2, 4)
        assert limit_map.status == STATUS_MISMATCH
        assert "differ" in limit_map.reason

    def test_different_primes(self) -> None:
        """Test that different primes are a mismatch."""
        G1 = build_from_iso_type(IsoTypeSpec(2, cyclic_finite=((1, 1),)))
        G2 = build_from_iso_type(IsoTypeSpec(3, cyclic_finite=((1, 1),)))
        assert delta2_isomorphism(G1, G2, 4).status == STATUS_MISMATCH

    def test_sigma1_refused(self) -> None:
        """Test that an enumerated divisible part is refused."""
        G1 = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1))
        G2 = build_from_iso_type(IsoTypeSpec(2, divisible_rank=1), inf_mode=InfMode.sigma1)
        with pytest.raises(DivisiblePartError):
            delta2_isomorphism(G1, G2, 4)

    def test_report_lines(self) -> None:
        """Test the report and dump forms."""
        G = build_from_iso_type(Z4_Z2)
        limit_map = delta2_isomorphism(G, G, 8)
        lines = limit_map.lines()
        assert lines[0] == "status: stabilized"
        assert "total_mind_changes: 0" in lines
        dump = limit_map.dump_lines()
        assert dump[0] == "stage 0"
        assert "h 1 -> 1" in dump


class TestLimitMap:
    """Test cases for the LimitMap record."""

    def test_record_counts_retractions(self) -> None:
        """Test that only revisions of defined images count."""
        limit_map = LimitMap(prefix=4, budget=10, stable_from=8)
        limit_map.record(0, 1, None)
        limit_map.record(1, 1, 3)
        limit_map.record(2, 1, 3)
        limit_map.record(5, 1, 2)
        assert limit_map.mind_changes == {1: 1}
        assert limit_map.last_change[1] == 5
        assert [retract for _, _, _, retract in limit_map.changes] == [False, True]

    def test_mind_change_census(self) -> None:
        """Test the per-id census."""
        limit_map = LimitMap(prefix=3, budget=10)
        limit_map.record(0, 2, 1)
        limit_map.record(1, 2, 0)
        assert mind_change_census(limit_map) == {0: 0, 1: 0, 2: 1}
        assert mind_change_census(limit_map, 2) == {0: 0, 1: 0}
        with pytest.raises(LimitwiseError):
            mind_change_census(limit_map, 5)
