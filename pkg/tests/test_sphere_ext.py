"""
Конструкции со сферами: вписанные покрытия из продолжений, продолжения из
вписанных покрытий, подъём кратности, хирургия нерва и размерность 0
"""

from fractions import Fraction

import pytest

from nagata.core.errors import BoundViolationError, InvalidParameterError, OutsideBodyError, PreconditionError
from nagata.models.cover import Cover, FamilyDecomposition
from nagata.models.maps import PartialMap, TargetSpec
from nagata.services import corpus, dimension, sphere_ext
from nagata.services.oracles import FixedCoverRefinementOracle, NearestPointSphereOracle

ONE, ZERO = Fraction(1), Fraction(0)


@pytest.fixture
def halves(path5) -> Cover:
    return Cover.from_labels(path5, [["0", "1", "2"], ["2", "3", "4"]])


@pytest.fixture
def endpoint_vertices(path5) -> PartialMap:
    """Концы пути в разные вершины ∂Δ¹"""
    return PartialMap(
        space=path5, domain=(0, 4), target=TargetSpec.simplex(2, boundary=True),
        values=((ONE, ZERO), (ZERO, ONE)),
    )


class TestConstants:
    def test_shrink_factor(self):
        assert sphere_ext.refinement_shrink_factor(Fraction(1), 0) == Fraction(1, 16)

    def test_extension_constant(self):
        assert sphere_ext.extension_constant_from_refinement(4, Fraction(1, 2), 0) == 154400

    @pytest.mark.parametrize("z, expected", [
        (ZERO, ZERO), (Fraction(1, 3), ZERO), (Fraction(1, 2), Fraction(1, 2)),
        (Fraction(2, 3), ONE), (ONE, ONE),
    ])
    def test_cutoff(self, z, expected):
        assert sphere_ext.beta(z) == expected

    def test_on_boundary(self):
        assert sphere_ext.on_boundary((ONE, ZERO, ZERO))
        assert not sphere_ext.on_boundary((Fraction(1, 3),) * 3)
        assert not sphere_ext.on_boundary((ONE, ONE, ZERO))


class TestRefinementFromExtension:
    def test_nearest_point_oracle(self, halves):
        oracle = NearestPointSphereOracle(0, 1)
        result = sphere_ext.refinement_from_extension(oracle, halves, 1)
        assert result.all_passed
        assert result.t == Fraction(1, 16)
        assert result.cover.labelled() == [["0", "1", "2"], ["3", "4"]]
        assert result.details["lambda"] == 16

    def test_cover_must_be_r_lebesgue(self, halves):
        with pytest.raises(PreconditionError):
            sphere_ext.refinement_from_extension(NearestPointSphereOracle(0, 1), halves, 2)

    def test_forced_run_does_not_enforce_lebesgue(self, halves):
        result = sphere_ext.refinement_from_extension(NearestPointSphereOracle(0, 1), halves, 2, force=True)
        assert not result.check("lebesgue").enforced

    def test_oracle_level_must_match(self, halves):
        with pytest.raises(PreconditionError):
            sphere_ext.refinement_from_extension(NearestPointSphereOracle(1, 1), halves, 1)

    def test_window_is_checked(self, halves):
        oracle = NearestPointSphereOracle(0, 1, window=(0, 10))
        with pytest.raises(PreconditionError):
            sphere_ext.refinement_from_extension(oracle, halves, 1)


class TestExtensionFromRefinement:
    def test_singleton_oracle_extension(self, path5, endpoint_vertices):
        oracle = FixedCoverRefinementOracle.singletons(path5)
        result = sphere_ext.extension_from_refinement(oracle, endpoint_vertices)
        assert result.all_passed
        assert result.map(0) == (1, 0)
        assert result.map(4) == (0, 1)
        assert all(sphere_ext.on_boundary(result.map(x)) for x in path5.points)
        assert result.details["r"] == Fraction(1, 48)

    def test_constant_map_skips_the_oracle(self, path5):
        f = PartialMap(
            space=path5, domain=(1, 3), target=TargetSpec.simplex(2, boundary=True),
            values=((ONE, ZERO), (ONE, ZERO)),
        )
        result = sphere_ext.extension_from_refinement(FixedCoverRefinementOracle.singletons(path5), f)
        assert result.details == {"oracle_called": False}
        assert set(result.map.values) == {(1, 0)}

    def test_values_must_lie_on_the_sphere(self, path5):
        f = PartialMap(
            space=path5, domain=(0,), target=TargetSpec.simplex(2, boundary=True),
            values=((Fraction(1, 2), Fraction(1, 2)),),
        )
        with pytest.raises(OutsideBodyError):
            sphere_ext.extension_from_refinement(FixedCoverRefinementOracle.singletons(path5), f)

    def test_lambda_outside_window(self, path5, endpoint_vertices):
        oracle = FixedCoverRefinementOracle.singletons(path5, upper=Fraction(1, 100))
        with pytest.raises(PreconditionError):
            sphere_ext.extension_from_refinement(oracle, endpoint_vertices, 1)


class TestLift:
    def test_lift_with_singleton_base(self, path5):
        cover = Cover.from_labels(path5, [["0", "1", "2"], ["1", "2", "3"], ["2", "3", "4"]])
        result = sphere_ext.lift_refinement(FixedCoverRefinementOracle.singletons(path5), cover, 2)
        assert result.all_passed
        assert result.profile.multiplicity <= 2
        assert result.t == Fraction(1, 36)
        assert result.refinement.parent == (0, 2)

    def test_lift_needs_s_lebesgue(self, path5):
        cover = Cover.from_labels(path5, [["0", "1", "2"], ["1", "2", "3"], ["2", "3", "4"]])
        with pytest.raises(PreconditionError):
            sphere_ext.lift_refinement(FixedCoverRefinementOracle.singletons(path5), cover, 3)


class TestSurgery:
    def test_surgery_on_two_families(self):
        space = corpus.path_space(7)
        cover = Cover.from_labels(space, [["0", "1"], ["2", "3"], ["4", "5"], ["6"]])
        decomp = FamilyDecomposition(cover=cover, family_of=(0, 1, 0, 1), r=3, k=2)
        result = sphere_ext.nerve_surgery_refine(NearestPointSphereOracle(0, 100), decomp, Fraction(2, 5))
        assert result.all_passed
        assert result.profile.multiplicity == 1
        assert result.details["r"] == Fraction(6, 5)

    def test_surgery_needs_matching_oracle(self):
        space = corpus.path_space(3)
        cover = Cover.from_labels(space, [["0"], ["1"], ["2"]])
        decomp = FamilyDecomposition(cover=cover, family_of=(0, 1, 0), r=1, k=2)
        with pytest.raises(PreconditionError):
            sphere_ext.nerve_surgery_refine(NearestPointSphereOracle(1, 100), decomp)


class TestDimensionZero:
    def test_two_clusters_are_bounded(self, two_clusters):
        report = sphere_ext.dim_zero_certificate(two_clusters, 2, [1, 99, 100, 101])
        assert report.bounded
        assert report.all_passed

    def test_long_chain_fails_non_strict(self):
        space = corpus.path_space(10)
        report = sphere_ext.dim_zero_certificate(space, 2, [1])
        assert not report.bounded
        assert report.scales[0].max_diameter == 9
        assert report.scales[0].witness == list(range(10))
        with pytest.raises(BoundViolationError):
            report.raise_for_failures()

    def test_long_chain_passes_strict(self):
        report = sphere_ext.dim_zero_certificate(corpus.path_space(10), 2, [1], strict=True)
        assert report.bounded
        assert report.scales[0].components == 10

    def test_constant_must_exceed_one(self, two_clusters):
        with pytest.raises(InvalidParameterError):
            sphere_ext.dim_zero_certificate(two_clusters, 1, [1])

    def test_certificate_agrees_with_search_at_a_tied_scale(self):
        space = corpus.line_space(["0", "13/5", "26/5"])
        r, C = Fraction(13, 5), Fraction(3, 2)
        certificate = sphere_ext.dim_zero_certificate(space, C, [r], strict=True)
        search = dimension.scale_range_dimension(space, C, [r], exact=True, max_n=0)
        assert certificate.scales[0].components == 3
        assert certificate.bounded
        assert search.per_scale[0].n_upper == 0
        assert len(dimension.strict_components(space, space.points, r)) == 3

    def test_strict_chains_split_at_the_scale(self):
        space = corpus.line_space([0, 1, 3, 4])
        assert len(sphere_ext.chain_components(space, 1)) == 2
        assert len(sphere_ext.chain_components(space, 1, strict=True)) == 4
        assert len(sphere_ext.chain_components(space, 2)) == 1
