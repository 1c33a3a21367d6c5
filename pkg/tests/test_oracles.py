"""
Оракулы вписанных покрытий и продолжений в сферу
"""

from fractions import Fraction

import pytest

from nagata.core.errors import NagataError, OracleRefusalError, PreconditionError
from nagata.core.numeric import INF
from nagata.models.cover import Cover
from nagata.models.maps import PartialMap, TargetSpec
from nagata.services import corpus, covers
from nagata.services.oracles import (
    ConstructiveSphereOracle,
    DecompositionRefinementOracle,
    FixedCoverRefinementOracle,
    LiftedRefinementOracle,
    NearestPointSphereOracle,
    ShrinkingRefinementOracle,
    build_refinement_oracle,
)


@pytest.fixture
def halves(path5) -> Cover:
    return Cover.from_labels(path5, [["0", "1", "2"], ["2", "3", "4"]])


class TestFixedCoverOracle:
    def test_singleton_window(self, path5):
        oracle = FixedCoverRefinementOracle.singletons(path5)
        assert oracle.window == (0, 9)
        assert oracle.t == Fraction(1, 9)
        assert oracle.multiplicity == 1

    def test_refines_and_verifies(self, path5, halves):
        oracle = FixedCoverRefinementOracle.singletons(path5)
        refinement = oracle(halves, 1)
        assert all(check.holds for check in oracle.verify(halves, 1, refinement))

    def test_works_on_subspaces(self, path5):
        oracle = FixedCoverRefinementOracle.singletons(path5)
        sub = corpus.line_space([1, 2])
        refinement = oracle.refine(Cover.whole(sub), 1)
        assert refinement.cover.labelled() == [["1", "2"]]

    def test_refuses_foreign_space(self, path5, grid3):
        oracle = FixedCoverRefinementOracle.singletons(path5)
        with pytest.raises(OracleRefusalError):
            oracle.refine(Cover.whole(grid3), 1)

    def test_refuses_when_fixed_cover_is_too_coarse(self, path5):
        oracle = FixedCoverRefinementOracle(Cover.whole(path5))
        with pytest.raises(OracleRefusalError):
            oracle.refine(Cover.singletons(path5), 1)


class TestOtherRefinementOracles:
    def test_decomposition_oracle(self, grid3):
        oracle = DecompositionRefinementOracle(4, 1)
        assert oracle.t == Fraction(1, 4) / (4 + Fraction(1, 2) + 1)
        cover = Cover.whole(grid3)
        refinement = oracle.refine(cover, 8)
        checks = oracle.verify(cover, 8, refinement)
        assert all(check.holds for check in checks)

    def test_shrinking_oracle(self, halves):
        oracle = ShrinkingRefinementOracle(1, Fraction(1, 16))
        refinement = oracle.refine(halves, 1)
        assert covers.multiplicity(refinement.cover) == 1

    def test_shrinking_oracle_refuses(self, halves):
        oracle = ShrinkingRefinementOracle(1, 2)
        with pytest.raises(OracleRefusalError):
            oracle.refine(halves, 1)

    def test_lifted_window(self, path5):
        base = FixedCoverRefinementOracle.singletons(path5)
        lifted = LiftedRefinementOracle(base)
        assert lifted.window == (0, 36)
        assert lifted.t == Fraction(1, 36)
        assert lifted.multiplicity == 2

    def test_bad_window(self):
        with pytest.raises(PreconditionError):
            ShrinkingRefinementOracle(1, Fraction(1, 2), window=(3, 1))

    def test_builder(self, path5):
        assert build_refinement_oracle("fixed_cover", path5).name == "fixed_cover"
        macro = build_refinement_oracle("decomposition", C=2, n=0, window=(5, "inf"))
        assert macro.window == (5, INF)
        assert macro.in_window(6)
        assert not macro.in_window(5)
        assert build_refinement_oracle("shrinking", multiplicity=2).t == Fraction(1, 16)
        with pytest.raises(PreconditionError):
            build_refinement_oracle("fixed_cover")
        with pytest.raises(NagataError):
            build_refinement_oracle("unknown")


class TestSphereOracles:
    def test_constructive_constant_and_window(self, path5):
        base = FixedCoverRefinementOracle.singletons(path5)
        oracle = ConstructiveSphereOracle(base, 0)
        assert oracle.C == 50 * 4 * 4 + 150 * 16 * 32 * 9
        assert oracle.window == (Fraction(1, 96 * 9), INF)

    def test_nearest_point_refuses_large_constant(self, path5):
        f = PartialMap(
            space=path5, domain=(0, 1), target=TargetSpec.simplex(2, boundary=True),
            values=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        )
        with pytest.raises(OracleRefusalError):
            NearestPointSphereOracle(0, 1).extend(f, Fraction(1))

    def test_nearest_point_extension(self, path5):
        f = PartialMap(
            space=path5, domain=(0, 4), target=TargetSpec.simplex(2, boundary=True),
            values=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        )
        oracle = NearestPointSphereOracle(0, 4)
        g = oracle.extend(f, Fraction(1, 2))
        assert g.values == ((1, 0), (1, 0), (1, 0), (0, 1), (0, 1))
        assert all(check.holds for check in oracle.verify(f, Fraction(1, 2), g))
