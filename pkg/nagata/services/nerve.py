"""
Сервис нерва покрытия

Нерв, барицентрическое отображение φ: X → N(U), метрики l₁/l₂ на симплексе
и проверка оценки Lip(φ) ≤ 4m²/L.
"""

from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, FrozenSet, List, Sequence, Tuple

import structlog

from nagata.core.config import settings
from nagata.core.errors import MalformedInputError, NerveTooLargeError
from nagata.core.logging import log_check
from nagata.core.numeric import Number, safe_ratio, tolerance_for, to_json_number
from nagata.models.cover import Cover
from nagata.models.maps import NerveComplex, PartialMap, SimplexPoint, TargetSpec
from nagata.models.metric import FiniteMetricSpace, NormTag
from nagata.models.schemas import BarycentricBoundReport, CheckResult
from nagata.services import covers, metric_core

logger = structlog.get_logger(__name__)


def build_nerve(cover: Cover) -> NerveComplex:
    """Все подсемейства элементов с общей точкой"""
    memberships = {frozenset(cover.containing(x)) for x in cover.space.points}
    top = max(len(m) for m in memberships) - 1
    if top > settings.MAX_NERVE_DIMENSION:
        raise NerveTooLargeError(
            f"Nerve has a simplex of dimension {top}, limit is {settings.MAX_NERVE_DIMENSION}"
        )
    simplices = set()
    for members in memberships:
        ordered = sorted(members)
        for size in range(1, len(ordered) + 1):
            simplices.update(frozenset(c) for c in combinations(ordered, size))
    ordered_simplices = sorted(simplices, key=lambda s: (len(s), sorted(s)))
    return NerveComplex(
        vertices=tuple(range(len(cover.elements))),
        simplices=tuple(ordered_simplices),
        dimension=top,
    )


def nerve_to_json(nerve: NerveComplex) -> Dict[str, Any]:
    return {
        "vertices": list(nerve.vertices),
        "simplices": [sorted(s) for s in nerve.simplices],
        "dimension": nerve.dimension,
    }


def barycentric_weights(cover: Cover) -> List[Tuple[Number, ...]]:
    """
    φ_s(x) = f_s(x) / Σ_t f_t(x) для каждой точки

    Если один из элементов равен X, то f_s ≡ inf и φ
    отображает всё в вершину первого такого элемента.
    """
    table = covers.boundary_table(cover)
    size = len(cover.elements)
    whole = next((s for s, e in enumerate(cover.elements) if len(e) == cover.space.size), None)
    zero, one = (Fraction(0), Fraction(1)) if cover.space.exact else (0.0, 1.0)

    if whole is not None:
        vertex = tuple(one if s == whole else zero for s in range(size))
        return [vertex for _ in cover.space.points]

    weights = []
    for x in cover.space.points:
        column = [table[s][x] for s in range(size)]
        total = sum(column, zero)
        weights.append(tuple(v / total for v in column))
    return weights


def barycentric_points(cover: Cover, norm: NormTag = NormTag.L1) -> List[SimplexPoint]:
    """Образы точек X как SimplexPoint"""
    return [simplex_point(weights, norm) for weights in barycentric_weights(cover)]


def barycentric_map(cover: Cover, norm: NormTag = NormTag.L1) -> PartialMap:
    """Барицентрическое отображение X → Δ^{|S|-1} как тотальное отображение"""
    points = barycentric_points(cover, norm)
    return PartialMap(
        space=cover.space,
        domain=tuple(cover.space.points),
        target=TargetSpec.simplex(len(cover.elements), norm),
        values=tuple(p.weights for p in points),
    )


def simplex_point(weights: Sequence[Number], norm: NormTag = NormTag.L1) -> SimplexPoint:
    return SimplexPoint(weights=tuple(weights), norm=norm)


def simplex_distance(p: SimplexPoint, q: SimplexPoint) -> Number:
    """Расстояние l₁ или l₂ между точками симплекса"""
    if p.norm != q.norm:
        raise MalformedInputError("Simplex points carry different metrics")
    if len(p.weights) != len(q.weights):
        raise MalformedInputError("Simplex points are indexed by different vertex sets")
    return metric_core.coords_distance(p.weights, q.weights, p.norm)


def in_nerve(weights: Sequence[Number], nerve: NerveComplex) -> bool:
    """Носитель точки является симплексом нерва"""
    tol = tolerance_for(*weights)
    support = frozenset(i for i, w in enumerate(weights) if w > tol)
    return nerve.contains(support)


def verify_barycentric_bound(cover: Cover, norm: NormTag = NormTag.L1) -> BarycentricBoundReport:
    """
    Измеренная Lip(φ) против 4m²/L при обеих кратностях

    Обязательная проверка использует кратность 1 + |T(x)|;
    оценка с обычной кратностью пишется в отчёт без принуждения.
    """
    profile = covers.lebesgue_profile(cover)
    phi = barycentric_map(cover, norm)
    measured, witness = metric_core.lipschitz_witness(phi)
    lebesgue = profile.lebesgue

    stated_bound = safe_ratio(4 * profile.multiplicity_plus_one ** 2, lebesgue)
    open_bound = safe_ratio(4 * profile.multiplicity ** 2, lebesgue)

    checks = [
        CheckResult.at_most(
            "barycentric_lipschitz",
            "phi is 4m(U)^2/L(U)-Lipschitz with m = 1 + |T(x)|",
            measured, stated_bound, witness=witness
        ),
        CheckResult.at_most(
            "barycentric_lipschitz_open",
            "phi is 4m(U)^2/L(U)-Lipschitz with m = |T(x)|",
            measured, open_bound, enforced=False, witness=witness
        ),
    ]
    for check in checks:
        log_check(logger, check, norm=norm.value)

    report = BarycentricBoundReport(
        norm=norm,
        measured_lip=measured,
        lebesgue=lebesgue,
        multiplicity=profile.multiplicity,
        multiplicity_plus_one=profile.multiplicity_plus_one,
        stated_bound=stated_bound,
        open_bound=open_bound,
        holds=checks[0].holds,
        open_holds=checks[1].holds,
        witness=witness,
        checks=checks,
    )
    logger.info(
        "Barycentric bound verified",
        measured=str(measured),
        stated_bound=str(stated_bound),
        open_bound=str(open_bound),
        holds=report.holds,
        open_holds=report.open_holds
    )
    return report


def star_preimage_sets(g: PartialMap) -> List[FrozenSet[int]]:
    """{x : g_v(x) > 0} для каждой вершины v, пустые множества сохраняются"""
    if not g.target.is_simplicial:
        raise MalformedInputError("Star preimages need a map into a simplex")
    tol = tolerance_for(*(w for value in g.values for w in value))
    sets = [set() for _ in range(g.target.coords)]
    for x, weights in g.items():
        for v, w in enumerate(weights):
            if w > tol:
                sets[v].add(x)
    return [frozenset(s) for s in sets]


def star_preimages(g: PartialMap) -> Cover:
    """Покрытие прообразами открытых звёзд вершин; пустые прообразы отбрасываются"""
    if not g.is_total:
        raise MalformedInputError("Star preimages need a total map")
    kept = [s for s in star_preimage_sets(g) if s]
    return Cover(space=g.space, elements=tuple(kept))


def simplex_metric_comparison(points: Sequence[Sequence[Number]]) -> Tuple[Number, Number]:
    """
    Границы отношения d₁/d₂ по парам точек симплекса

    Для n координат отношение лежит в [1, √n].
    """
    ratios = []
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            d2 = metric_core.coords_distance(points[a], points[b], NormTag.L2)
            if d2 == 0:
                continue
            d1 = metric_core.coords_distance(points[a], points[b], NormTag.L1)
            ratios.append(float(d1) / float(d2))
    if not ratios:
        return 1.0, 1.0
    return min(ratios), max(ratios)


def points_json(space: FiniteMetricSpace, weights: Sequence[Sequence[Number]], exact: bool = True) -> Dict[str, List]:
    return {
        space.labels[x]: [to_json_number(w, exact) for w in row]
        for x, row in zip(space.points, weights)
    }
