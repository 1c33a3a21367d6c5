"""
Продолжения МакШейна и Уитни, продолжения в симплекс и куб
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nagata.core.errors import DishonestLipschitzError, MalformedInputError, OutsideBodyError
from nagata.core.numeric import leq
from nagata.models.maps import ConvexBody, PartialMap, TargetKind, TargetSpec
from nagata.models.metric import NormTag
from nagata.services import corpus, extension
from tests.strategies import real_maps, simplex_maps


@pytest.fixture
def endpoints(path5) -> PartialMap:
    """f(0) = 0, f(4) = 4 на пути из пяти точек"""
    return PartialMap(
        space=path5, domain=(0, 4), target=TargetSpec.real(), values=(Fraction(0), Fraction(4))
    )


class TestScalarExtension:
    def test_mcshane_fills_the_path_linearly(self, endpoints):
        result = extension.mcshane_extend(endpoints)
        assert result.map.values == (0, 1, 2, 3, 4)
        assert result.lam_effective == 1
        assert result.all_passed

    def test_whitney_gives_the_same_here(self, endpoints):
        assert extension.whitney_extend(endpoints).map.values == (0, 1, 2, 3, 4)

    def test_mcshane_is_the_largest_extension(self, endpoints):
        f = endpoints.restrict([0])
        upper = extension.mcshane_extend(f, 1).map.values
        lower = extension.whitney_extend(f, 1).map.values
        assert upper == (0, 1, 2, 3, 4)
        assert lower == (0, -1, -2, -3, -4)

    def test_dishonest_lambda_warns(self, endpoints):
        result = extension.mcshane_extend(endpoints, Fraction(1, 2))
        assert result.lam_effective == 1
        assert result.warnings

    def test_dishonest_lambda_strict(self, endpoints):
        with pytest.raises(DishonestLipschitzError):
            extension.mcshane_extend(endpoints, Fraction(1, 2), strict=True)

    def test_declared_lambda_is_kept_when_honest(self, endpoints):
        result = extension.mcshane_extend(endpoints, 3)
        assert result.lam_effective == 3
        assert result.measured_lip <= 3

    def test_measured_constant_equal_to_the_bound_holds(self):
        space = corpus.line_space(["0", "51/100", "1"])
        f = PartialMap(space=space, domain=(0, 1), target=TargetSpec.real(), values=(Fraction(0), Fraction(1)))
        result = extension.mcshane_extend(f)
        assert result.lam_effective == Fraction(100, 51)
        assert result.map.values[2] == Fraction(100, 51)
        assert result.measured_lip == Fraction(100, 51)
        assert result.all_passed

    def test_vector_map_is_rejected(self, path5):
        g = PartialMap(
            space=path5, domain=(0,), target=TargetSpec.simplex(2), values=((Fraction(1), Fraction(0)),)
        )
        with pytest.raises(MalformedInputError):
            extension.mcshane_extend(g)

    @settings(max_examples=60, deadline=None)
    @given(real_maps())
    def test_both_formulas_are_honest_extensions(self, f):
        for extend in (extension.mcshane_extend, extension.whitney_extend):
            result = extend(f)
            assert result.all_passed
            assert all(result.map(a) == f(a) for a in f.domain)


class TestProjection:
    def test_projection_of_interior_point(self):
        assert extension.project_to_simplex([Fraction(1, 4), Fraction(3, 4)]).weights == (Fraction(1, 4), Fraction(3, 4))

    def test_projection_is_exact(self):
        assert extension.project_to_simplex([2, 0]).weights == (1, 0)
        assert extension.project_to_simplex([1, 1, 1]).weights == (Fraction(1, 3),) * 3

    def test_projection_checks_dimension(self):
        with pytest.raises(MalformedInputError):
            extension.project_to_simplex([1, 0], n=3)

    @given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=5))
    def test_projection_lands_in_simplex(self, v):
        point = extension.project_to_simplex(v)
        assert sum(point.weights) == 1
        assert all(w >= 0 for w in point.weights)

    def test_box_projection(self):
        assert extension.project_to_box([-1, 2, Fraction(1, 2)], 0, 1) == (0, 1, Fraction(1, 2))


class TestConvexExtension:
    def test_extension_constants(self):
        assert extension.extension_constant(4, NormTag.L2) == 2
        assert extension.extension_constant(3, NormTag.L1) == 9
        with pytest.raises(MalformedInputError):
            extension.extension_constant(0, NormTag.L1)

    def test_values_outside_body(self, path5):
        f = PartialMap(
            space=path5, domain=(0,), target=TargetSpec(kind=TargetKind.VECTOR, coords=2),
            values=((Fraction(2), Fraction(0)),),
        )
        with pytest.raises(OutsideBodyError):
            extension.extend_into_convex(f)

    def test_box_extension(self, path5):
        f = PartialMap(
            space=path5, domain=(0, 4), target=TargetSpec(kind=TargetKind.VECTOR, coords=2),
            values=((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))),
        )
        result = extension.extend_into_convex(f, body=ConvexBody.box(0, 1))
        assert result.map(0) == (0, 1)
        assert result.map(4) == (1, 0)
        assert result.check("inside_body").holds
        assert result.all_passed

    @settings(max_examples=60, deadline=None)
    @given(simplex_maps())
    def test_simplex_extension_keeps_its_guarantees(self, f):
        result = extension.extend_into_convex(f)
        assert result.all_passed
        assert leq(result.measured_lip, result.bound)
        assert result.map.is_total

    @settings(max_examples=30, deadline=None)
    @given(simplex_maps())
    def test_l2_simplex_extension(self, f):
        f2 = f.model_copy(update={"target": TargetSpec.simplex(f.target.coords, NormTag.L2)})
        assert extension.extend_into_convex(f2).all_passed
