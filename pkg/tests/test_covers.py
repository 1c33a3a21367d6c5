"""
Покрытия: число Лебега, кратность, разбиения и переход к покрытиям Лебега
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings

from nagata.core.errors import CoverIndexError, InvalidParameterError, MalformedInputError, PreconditionError
from nagata.core.numeric import INF, leq
from nagata.models.cover import Cover, FamilyDecomposition
from nagata.services import corpus, covers
from nagata.services.sphere_ext import chain_components
from tests.strategies import covers_of


@pytest.fixture
def halves(path5) -> Cover:
    return Cover.from_labels(path5, [["0", "1", "2"], ["2", "3", "4"]])


@pytest.fixture
def chain_decomposition() -> FamilyDecomposition:
    """Цепь {0, 1, 3, 4}: два элемента одного семейства на расстоянии 2"""
    space = corpus.line_space([0, 1, 3, 4])
    cover = Cover.from_labels(space, [["0", "1"], ["3", "4"]])
    return FamilyDecomposition(cover=cover, family_of=(0, 0), r=1, k=1)


class TestCoverModel:
    def test_uncovered_points_are_reported(self, path5):
        with pytest.raises(MalformedInputError) as info:
            Cover.from_labels(path5, [["0", "1"], ["3"]])
        assert info.value.details["uncovered"] == ["2", "4"]

    def test_empty_element_is_rejected(self, path5):
        with pytest.raises(MalformedInputError):
            Cover.from_sets(path5, [set(path5.points), set()])

    def test_family_indices_are_bounded(self, halves):
        with pytest.raises(MalformedInputError):
            FamilyDecomposition(cover=halves, family_of=(0, 2), r=1, k=2)

    def test_scale_must_be_positive(self, halves):
        with pytest.raises(InvalidParameterError):
            FamilyDecomposition(cover=halves, family_of=(0, 1), r=0, k=2)

    def test_containing(self, halves):
        assert halves.containing(2) == [0, 1]
        assert halves.containing(4) == [1]


class TestLebesgue:
    def test_profile_of_halves(self, halves):
        profile = covers.lebesgue_profile(halves)
        assert profile.local == (3, 2, 1, 2, 3)
        assert profile.lebesgue == 1
        assert profile.mesh == 2
        assert profile.multiplicity == 2
        assert profile.multiplicity_plus_one == 3

    def test_whole_space_has_infinite_lebesgue_number(self, path5):
        assert covers.lebesgue_number(Cover.whole(path5)) == INF

    def test_boundary_distance(self, halves):
        assert covers.boundary_distance(halves, 0, 0) == 3
        assert covers.boundary_distance(halves, 0, 4) == 0
        with pytest.raises(CoverIndexError):
            covers.boundary_distance(halves, 2, 0)

    def test_is_r_lebesgue(self, halves):
        assert covers.is_r_lebesgue(halves, 1)
        assert not covers.is_r_lebesgue(halves, Fraction(3, 2))
        with pytest.raises(InvalidParameterError):
            covers.is_r_lebesgue(halves, 0)

    @settings(max_examples=40, deadline=None)
    @given(covers_of())
    def test_every_ball_of_radius_lebesgue_fits(self, cover):
        lebesgue = covers.lebesgue_number(cover)
        if lebesgue == INF:
            return
        for x in cover.space.points:
            ball = cover.space.ball(x, lebesgue)
            assert any(ball <= e for e in cover.elements)


class TestDecompositions:
    def test_chain_components_at_scale_one(self):
        space = corpus.line_space([0, 1, 3, 4])
        components = chain_components(space, 1)
        assert sorted(sorted(space.labels[x] for x in c) for c in components) == [["0", "1"], ["3", "4"]]

    def test_valid_decomposition(self, chain_decomposition):
        report = covers.check_decomposition(chain_decomposition)
        assert report.is_valid
        assert report.mesh == 1
        assert report.bound_ratio == 1

    def test_violating_pair(self, chain_decomposition):
        tight = chain_decomposition.model_copy(update={"r": Fraction(3)})
        report = covers.check_decomposition(tight)
        assert not report.is_valid
        assert report.violating_pair == (0, 1)
        assert report.violating_distance == 2

    def test_conversion_checks_pass(self, chain_decomposition):
        report = covers.lebesgue_conversion(chain_decomposition, Fraction(1, 4))
        assert report.all_passed
        assert report.radius == Fraction(1, 4)
        assert report.profile.multiplicity == 1
        assert report.profile.lebesgue >= Fraction(1, 4)

    def test_conversion_needs_disjoint_families(self, chain_decomposition):
        tight = chain_decomposition.model_copy(update={"r": Fraction(3)})
        with pytest.raises(PreconditionError):
            covers.decomposition_to_lebesgue_cover(tight)

    @pytest.mark.parametrize("shrink", [0, Fraction(1, 2), 1])
    def test_shrink_range(self, chain_decomposition, shrink):
        with pytest.raises(InvalidParameterError):
            covers.lebesgue_conversion(chain_decomposition, shrink)


class TestRefinements:
    def test_merging_keeps_parents(self, path5, halves):
        fine = Cover.singletons(path5)
        refinement = covers.refinement_by_merging(fine, halves)
        assert refinement.is_consistent()
        assert refinement.parent == (0, 1)
        assert refinement.cover.labelled() == [["0", "1", "2"], ["3", "4"]]

    def test_merging_needs_refinement(self, path5, halves):
        with pytest.raises(PreconditionError):
            covers.refinement_by_merging(halves, Cover.singletons(path5))

    def test_shrink_to_multiplicity(self, halves):
        refinement = covers.shrink_to_multiplicity(halves, 1)
        assert covers.multiplicity(refinement.cover) == 1
        assert refinement.is_consistent()

    def test_ball_cover_and_trace(self, path5):
        balls = covers.ball_cover(path5, Fraction(3, 2))
        assert covers.refines(Cover.singletons(path5), balls)
        assert covers.ball_multiplicity(balls, Fraction(1, 2)) == 3
        restricted = covers.restrict_cover(balls, ["0", "4"])
        assert restricted.space.labels == ("0", "4")
        assert restricted.labelled() == [["0"], ["0"], ["4"], ["4"]]

    @settings(max_examples=40, deadline=None)
    @given(covers_of())
    def test_shrinking_never_raises_multiplicity(self, cover):
        refinement = covers.shrink_to_multiplicity(cover, 1)
        assert covers.multiplicity(refinement.cover) <= 1
        assert refinement.is_consistent()
        assert leq(covers.mesh(refinement.cover), covers.mesh(cover))
