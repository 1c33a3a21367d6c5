"""
Пространства, аксиомы метрики, функторы max/min и константы Липшица
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nagata.core.errors import InvalidParameterError, LabelMismatchError, MalformedInputError
from nagata.core.numeric import INF
from nagata.models.maps import PartialMap, TargetSpec
from nagata.models.metric import Axiom, FiniteMetricSpace, NormTag, VectorPoint
from nagata.services import corpus, metric_core
from tests.strategies import spaces


class TestFiniteMetricSpace:
    def test_rational_entries_are_exact(self, path5):
        assert path5.exact
        assert path5.d(0, 4) == Fraction(4)
        assert path5.diameter == 4
        assert path5.min_positive_distance == 1

    def test_float_entry_makes_table_float(self):
        space = FiniteMetricSpace(labels=["a", "b"], dist=[[0, 0.5], [0.5, 0]])
        assert not space.exact
        assert isinstance(space.d(0, 0), float)

    def test_single_point(self):
        space = FiniteMetricSpace(labels=["x"], dist=[[0]])
        assert space.diameter == 0
        assert space.min_positive_distance == INF

    def test_ball_is_open(self, path5):
        assert path5.ball(2, Fraction(1)) == frozenset({2})
        assert path5.ball(2, Fraction(3, 2)) == frozenset({1, 2, 3})

    def test_set_geometry(self, path5):
        assert path5.set_distance({0, 1}, {3, 4}) == 2
        assert path5.set_distance({0}, []) == INF
        assert path5.set_diameter({1, 3, 4}) == 3
        assert path5.point_to_set(0, {2, 4}) == 2

    @pytest.mark.parametrize("labels, dist", [
        ([], []),
        (["a", "a"], [[0, 1], [1, 0]]),
        (["a", "b"], [[0, 1]]),
        (["a", "b"], [[0, 1], [1]]),
    ])
    def test_malformed_tables(self, labels, dist):
        with pytest.raises(MalformedInputError):
            FiniteMetricSpace(labels=labels, dist=dist)

    def test_unknown_label(self, path5):
        with pytest.raises(MalformedInputError):
            path5.index("missing")


class TestValidate:
    def test_metric_has_no_violations(self, grid3):
        assert metric_core.validate(grid3) == []

    def test_triangle_violation_is_witnessed(self, broken_triangle):
        violations = metric_core.validate(broken_triangle)
        assert [v.axiom for v in violations] == [Axiom.TRIANGLE]
        assert violations[0].points == ("a", "b", "c")

    def test_each_axiom_is_reported(self):
        space = FiniteMetricSpace(
            labels=["a", "b", "c"],
            dist=[[1, 0, 2], [0, 0, -1], [3, -1, 0]],
        )
        axioms = {v.axiom for v in metric_core.validate(space)}
        assert {Axiom.ZERO_DIAGONAL, Axiom.POSITIVITY, Axiom.NONNEGATIVE, Axiom.SYMMETRY} <= axioms

    @settings(max_examples=40, deadline=None)
    @given(spaces())
    def test_corpus_spaces_are_metrics(self, space):
        assert metric_core.validate(space) == []


class TestTransforms:
    def test_max_raises_small_distances(self, path5):
        lifted = metric_core.transform_max(path5, 2)
        assert lifted.d(0, 1) == 2
        assert lifted.d(0, 4) == 4
        assert lifted.d(3, 3) == 0

    def test_min_caps_large_distances(self, path5):
        capped = metric_core.transform_min(path5, 2)
        assert capped.d(0, 4) == 2
        assert capped.d(0, 1) == 1

    @pytest.mark.parametrize("epsilon", [0, -1, "inf"])
    def test_epsilon_must_be_positive_and_finite(self, path5, epsilon):
        with pytest.raises(InvalidParameterError):
            metric_core.transform_max(path5, epsilon)
        with pytest.raises(InvalidParameterError):
            metric_core.transform_min(path5, epsilon)

    @settings(max_examples=40, deadline=None)
    @given(spaces(), st.integers(1, 6))
    def test_transforms_stay_metrics(self, space, epsilon):
        assert metric_core.validate(metric_core.transform_max(space, epsilon)) == []
        assert metric_core.validate(metric_core.transform_min(space, epsilon)) == []

    def test_bilipschitz_bounds_of_max(self, path5):
        mu, lam = metric_core.bilipschitz_bounds(path5, metric_core.transform_max(path5, 2))
        assert mu == 1
        assert lam == 2

    def test_bilipschitz_single_point(self):
        space = FiniteMetricSpace(labels=["x"], dist=[[0]])
        assert metric_core.bilipschitz_bounds(space, space) == (1, 1)

    def test_bilipschitz_needs_same_labels(self, path5, grid3):
        with pytest.raises(LabelMismatchError):
            metric_core.bilipschitz_bounds(path5, grid3)


class TestGeometry:
    def test_l1_and_l2_distances(self):
        assert metric_core.coords_distance([0, 0], [3, 4], NormTag.L1) == 7
        assert metric_core.coords_distance([Fraction(0), Fraction(0)], [Fraction(3), Fraction(4)], NormTag.L2) == 5

    def test_dimension_mismatch(self):
        with pytest.raises(MalformedInputError):
            metric_core.coords_distance([0], [1, 2], NormTag.L1)

    def test_vector_points(self):
        p = VectorPoint(coords=("0", "0"), norm=NormTag.L2)
        q = VectorPoint(coords=(3, 4), norm=NormTag.L2)
        assert metric_core.vector_distance(p, q) == 5
        with pytest.raises(MalformedInputError):
            metric_core.vector_distance(p, VectorPoint(coords=(3, 4)))
        with pytest.raises(MalformedInputError):
            VectorPoint(coords=(1, 2), dimension=3)

    def test_space_from_points_labels(self):
        space = metric_core.space_from_points([[0, 0], [1, 1]], NormTag.L1, ["p", "q"])
        assert space.distance("p", "q") == 2

    def test_subspace_keeps_order(self, path5):
        sub = metric_core.subspace(path5, ["4", "1"])
        assert sub.labels == ("1", "4")
        assert sub.d(0, 1) == 3


class TestLipschitz:
    def test_measured_constant_and_witness(self, path5):
        f = PartialMap(
            space=path5, domain=(0, 1, 4), target=TargetSpec.real(),
            values=(Fraction(0), Fraction(3), Fraction(4)),
        )
        lam, witness = metric_core.lipschitz_witness(f)
        assert lam == 3
        assert witness == (0, 1)

    def test_constant_map_has_zero_constant(self, path5):
        f = PartialMap(space=path5, domain=(0, 2), target=TargetSpec.real(), values=(Fraction(5), Fraction(5)))
        assert metric_core.lipschitz_constant(f) == 0

    def test_identity_then_compose(self, path5):
        scaled = corpus.path_space(5, step=2)
        ident = metric_core.identity_map(path5, scaled)
        assert metric_core.lipschitz_constant(ident) == 2
        back = metric_core.identity_map(scaled, path5)
        assert metric_core.lipschitz_constant(metric_core.compose(ident, back)) == 1
