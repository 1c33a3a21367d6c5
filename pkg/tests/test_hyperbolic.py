"""
Башни покрытий, метрика d_h и её гиперболичность
"""

from fractions import Fraction

import pytest

from nagata.core.errors import InvalidParameterError, MalformedInputError, TowerConstructionError
from nagata.models.cover import Cover, CoverTower
from nagata.services import corpus, hyperbolic


@pytest.fixture
def path_tower(path5):
    return hyperbolic.build_tower(path5, 1, 4)


class TestTower:
    def test_path_collapses_in_two_levels(self, path_tower):
        tower = path_tower.tower
        assert tower.height == 2
        assert tower.level(1).labelled() == [["0"], ["1"], ["2"], ["3"], ["4"]]
        assert len(tower.level(2).elements) == 1
        assert tower.scales == (Fraction(1, 2), 2)
        assert path_tower.all_passed

    def test_clusters_keep_a_middle_level(self, two_clusters):
        report = hyperbolic.build_tower(two_clusters, 0, 4)
        assert report.tower.height == 3
        assert report.tower.level(2).labelled() == [["0", "1"], ["100", "101"]]
        assert report.dropped_scales == [8, 32]
        assert report.profiles[1].lebesgue == 99
        assert report.all_passed

    def test_single_point(self):
        report = hyperbolic.build_tower(corpus.line_space([7]), 0, 1)
        assert report.tower.height == 1

    def test_missing_decomposition_stops_the_tower(self, path5):
        with pytest.raises(TowerConstructionError):
            hyperbolic.build_tower(path5, 0, 1)

    def test_growth_must_exceed_one(self, path5):
        with pytest.raises(InvalidParameterError):
            hyperbolic.build_tower(path5, 1, 4, growth=1)


class TestHyperbolicMetric:
    def test_dh_levels(self, two_clusters):
        tower = hyperbolic.build_tower(two_clusters, 0, 4).tower
        dh = hyperbolic.dh_metric(tower)
        assert dh.distance("0", "1") == 2
        assert dh.distance("1", "100") == 3
        assert dh.distance("100", "100") == 0

    def test_path_dh_is_uniform(self, path_tower):
        dh = hyperbolic.dh_metric(path_tower.tower)
        assert {dh.d(x, y) for x, y in dh.pairs()} == {2}

    def test_gromov_products(self, path5):
        products = hyperbolic.gromov_products(path5, 0)
        assert products[1, 1] == 1
        assert products[2, 4] == 2
        assert products[0, 3] == 0

    def test_certificate_for_path_tower(self, path_tower):
        dh = hyperbolic.dh_metric(path_tower.tower)
        report = hyperbolic.hyperbolicity_certificate(dh)
        assert report.basepoint == 0
        assert report.all_passed
        assert report.side_defect == 0
        assert report.delta_measured <= hyperbolic.HYPERBOLICITY_DELTA

    def test_certificate_flags_non_metric(self, broken_triangle):
        report = hyperbolic.hyperbolicity_certificate(broken_triangle)
        assert not report.check("metric").holds
        assert not report.check("side_property").holds
        assert report.side_defect == 4

    def test_every_basepoint(self, two_clusters):
        dh = hyperbolic.dh_metric(hyperbolic.build_tower(two_clusters, 0, 4).tower)
        reports = hyperbolic.hyperbolicity_all_basepoints(dh)
        assert [r.basepoint for r in reports] == [0, 1, 2, 3]
        assert all(r.all_passed for r in reports)

    def test_named_basepoint(self, path_tower):
        dh = hyperbolic.dh_metric(path_tower.tower)
        assert hyperbolic.hyperbolicity_certificate(dh, "3").basepoint == 3


class TestCoarseEquivalence:
    def test_clusters(self, two_clusters):
        tower = hyperbolic.build_tower(two_clusters, 0, 4).tower
        dh = hyperbolic.dh_metric(tower)
        report = hyperbolic.coarse_equivalence_profile(two_clusters, dh, tower)
        assert report.all_passed
        assert [row.level for row in report.rows] == [1, 2, 3]

    def test_distance_equal_to_lebesgue_is_not_co_contained(self):
        pair = corpus.path_space(2)
        tower = CoverTower(levels=(Cover.singletons(pair), Cover.whole(pair)), n=0)
        dh = hyperbolic.dh_metric(tower)
        report = hyperbolic.coarse_equivalence_profile(pair, dh, tower)
        assert report.rows[0].lebesgue == 1
        assert pair.d(0, 1) == 1
        assert dh.d(0, 1) == 2
        assert report.rows[0].lower_violations == 0
        assert report.all_passed

    def test_labels_must_match(self, path5, path_tower, two_clusters):
        dh = hyperbolic.dh_metric(path_tower.tower)
        with pytest.raises(MalformedInputError):
            hyperbolic.coarse_equivalence_profile(two_clusters, dh, path_tower.tower)

    def test_scale_covers(self, path_tower):
        dh = hyperbolic.dh_metric(path_tower.tower)
        report = hyperbolic.dh_scale_covers(path_tower.tower, dh)
        assert [row.r for row in report.rows] == [1, 2, 3, 4, 5]
        assert report.rows[-1].level == 2
        assert report.all_passed
