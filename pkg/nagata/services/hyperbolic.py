"""
Сервис гиперболизации

Башня покрытий, целочисленная метрика d_h (наименьший уровень, на котором
две точки лежат в общем элементе), произведения Громова, 4-точечное
условие с δ = 4, свойство сторон треугольника и крупномасштабная
эквивалентность d и d_h.
"""

from fractions import Fraction
from itertools import combinations
from typing import Any, List, Optional, Sequence

import numpy as np
import structlog

from nagata.core.config import settings
from nagata.core.errors import InvalidParameterError, MalformedInputError, TowerConstructionError
from nagata.core.logging import log_check, log_pipeline_event
from nagata.core.numeric import leq, lt, parse_number
from nagata.models.cover import Cover, CoverTower
from nagata.models.metric import FiniteMetricSpace
from nagata.models.schemas import (
    CheckResult,
    CoarseEquivalenceReport,
    CoarseRow,
    HyperbolicReport,
    ScaleCoverReport,
    ScaleCoverRow,
    TowerReport,
)
from nagata.services import covers, dimension, metric_core

logger = structlog.get_logger(__name__)

HYPERBOLICITY_DELTA = 4
MAX_TOWER_SCALES = 64


def build_tower(
    space: FiniteMetricSpace,
    n: int,
    C: Any,
    growth: Any = None,
    shrink: Any = None
) -> TowerReport:
    """
    Башня покрытий на геометрически растущих масштабах

    r₀ = δ/2, r_{i+1} = growth·r_i; уровень: покрытие окрестностями
    разбиения на n+1 семейство. Кандидат принимается, если
    2·mesh(предыдущего) < L(кандидата) и mesh, L не убывают,
    иначе масштаб отбрасывается. Верхний уровень: {X}.
    """
    C = parse_number(C)
    growth = parse_number(settings.DEFAULT_GROWTH if growth is None else growth)
    if not growth > 1:
        raise InvalidParameterError(f"growth must exceed 1, got {growth}")
    if isinstance(growth, float) and growth.is_integer():
        growth = Fraction(int(growth))

    whole = Cover.whole(space)
    if space.size == 1:
        tower = CoverTower(levels=(whole,), n=n)
        profile = covers.lebesgue_profile(whole)
        return TowerReport(tower=tower, profiles=[profile], dropped_scales=[], checks=[])

    levels: List[Cover] = []
    profiles = []
    scales = []
    dropped = []
    r = space.min_positive_distance / 2

    for _ in range(MAX_TOWER_SCALES):
        search = dimension.find_decomposition(space, r, C, n)
        if not search.found:
            raise TowerConstructionError(
                f"No decomposition into {n + 1} families at scale {r}",
                {"r": str(r), "status": search.status.value}
            )
        candidate = covers.decomposition_to_lebesgue_cover(search.decomposition, shrink)
        profile = covers.lebesgue_profile(candidate)
        if levels:
            prev = profiles[-1]
            fits = (
                lt(2 * prev.mesh, profile.lebesgue)
                and leq(prev.mesh, profile.mesh)
                and leq(prev.lebesgue, profile.lebesgue)
                and candidate.elements != levels[-1].elements
            )
        else:
            fits = True
        if fits:
            levels.append(candidate)
            profiles.append(profile)
            scales.append(r)
        else:
            dropped.append(r)
            logger.debug("Tower scale dropped", r=str(r), lebesgue=str(profile.lebesgue))
        if any(len(e) == space.size for e in candidate.elements) and fits:
            break
        r = r * growth
    else:
        raise TowerConstructionError(
            "Gap condition 2*mesh < L never closed the tower",
            {"levels": len(levels), "last_mesh": str(profiles[-1].mesh), "dropped": len(dropped)}
        )

    if not any(len(e) == space.size for e in levels[-1].elements):
        levels.append(whole)
        profiles.append(covers.lebesgue_profile(whole))
        scales.append(r)
    elif len(levels[-1].elements) > 1:
        # верхний уровень должен быть ровно {X}
        levels[-1] = whole
        profiles[-1] = covers.lebesgue_profile(whole)

    checks = []
    for i, profile in enumerate(profiles, start=1):
        checks.append(CheckResult.at_most(
            f"multiplicity@{i}", "level multiplicity is at most n+1",
            profile.multiplicity, n + 1
        ))
        if i > 1:
            prev = profiles[i - 2]
            checks.append(CheckResult.that(
                f"gap@{i}", "2*mesh(U_{i-1}) < L(U_i)",
                lt(2 * prev.mesh, profile.lebesgue),
                witness={"mesh": prev.mesh, "lebesgue": profile.lebesgue}
            ))
            checks.append(CheckResult.that(
                f"monotone@{i}", "mesh and Lebesgue number do not decrease",
                leq(prev.mesh, profile.mesh) and leq(prev.lebesgue, profile.lebesgue)
            ))
    for check in checks:
        log_check(logger, check, construction="tower")

    tower = CoverTower(levels=tuple(levels), n=n, scales=tuple(scales))
    log_pipeline_event(
        logger, "Cover tower built",
        points=space.size, levels=tower.height, dropped=len(dropped), growth=str(growth)
    )
    return TowerReport(tower=tower, profiles=profiles, dropped_scales=dropped, checks=checks)


def dh_metric(tower: CoverTower) -> FiniteMetricSpace:
    """d_h(x, y): наименьший номер уровня с элементом, содержащим x и y"""
    space = tower.space
    n = space.size
    dist = [[Fraction(0)] * n for _ in range(n)]
    for x, y in space.pairs():
        level = next(
            (i for i, cover in enumerate(tower.levels, start=1)
             if any(x in e and y in e for e in cover.elements)),
            None
        )
        if level is None:
            raise TowerConstructionError(
                "Tower is not total: a pair is never co-contained",
                {"pair": [space.labels[x], space.labels[y]]}
            )
        dist[x][y] = dist[y][x] = Fraction(level)
    return FiniteMetricSpace(labels=space.labels, dist=dist)


def gromov_products(space: FiniteMetricSpace, basepoint: int) -> np.ndarray:
    """(x|y) = (d(x, x₀) + d(y, x₀) − d(x, y)) / 2"""
    D = space.array()
    to_base = D[:, basepoint]
    return (to_base[:, None] + to_base[None, :] - D) / 2


def hyperbolicity_certificate(space: FiniteMetricSpace, basepoint: Optional[str] = None) -> HyperbolicReport:
    """
    Полный перебор троек: δ = max(min((x|y), (y|z)) − (x|z)),
    разность двух наибольших сторон и граничное неравенство
    2(x|y) ≥ min(d(x, x₀), d(y, x₀)) − 2
    """
    x0 = space.index(basepoint) if basepoint is not None else space.labels.index(min(space.labels))
    D = space.array()
    P = gromov_products(space, x0)

    # defect[x, y, z] = min((x|y), (y|z)) − (x|z)
    defect = np.minimum(P[:, :, None], P[None, :, :]) - P[:, None, :]
    flat = np.asarray(defect, dtype=float)
    delta_index = tuple(int(i) for i in np.unravel_index(np.argmax(flat), flat.shape))
    delta_measured = defect[delta_index]

    side_defect = space.zero
    side_witness = None
    for triple in combinations(space.points, 3):
        i, j, k = triple
        sides = sorted([D[i, j], D[j, k], D[i, k]], reverse=True)
        if sides[0] - sides[1] > side_defect:
            side_defect, side_witness = sides[0] - sides[1], triple

    to_base = D[:, x0]
    boundary = np.minimum(to_base[:, None], to_base[None, :]) - 2 - 2 * P
    boundary_defect = boundary.flat[int(np.argmax(np.asarray(boundary, dtype=float)))]

    violations = metric_core.validate(space)
    checks = [
        CheckResult.that(
            "metric", "d_h is a metric", not violations,
            witness=violations[0].points if violations else None
        ),
        CheckResult.at_most(
            "side_property", "two largest sides differ by at most 1",
            side_defect, 1, witness=side_witness
        ),
        CheckResult.at_most(
            "four_point", "(x|z) >= min((x|y),(y|z)) - 4",
            delta_measured, HYPERBOLICITY_DELTA, witness=delta_index
        ),
        CheckResult.at_most(
            "boundary_proxy", "2(x|y) >= min(d(x,x0), d(y,x0)) - 2",
            boundary_defect, 0
        ),
    ]
    for check in checks:
        log_check(logger, check, basepoint=space.labels[x0])

    logger.info(
        "Hyperbolicity certificate computed",
        points=space.size,
        basepoint=space.labels[x0],
        delta=str(delta_measured),
        side_defect=str(side_defect)
    )
    return HyperbolicReport(
        basepoint=x0,
        products=tuple(tuple(row) for row in P.tolist()),
        delta_measured=delta_measured,
        side_defect=side_defect,
        boundary_defect=boundary_defect,
        delta_witness=delta_index,
        side_witness=side_witness,
        checks=checks,
    )


def hyperbolicity_all_basepoints(space: FiniteMetricSpace) -> List[HyperbolicReport]:
    return [hyperbolicity_certificate(space, label) for label in space.labels]


def coarse_equivalence_profile(
    space: FiniteMetricSpace,
    dh: FiniteMetricSpace,
    tower: CoverTower
) -> CoarseEquivalenceReport:
    """
    Для каждого уровня i: d_h ≤ i ⟹ d ≤ mesh(U_i) и d < L(U_i) ⟹ d_h ≤ i
    по всем парам
    """
    if space.labels != dh.labels or space.labels != tower.space.labels:
        raise MalformedInputError("Metric, d_h and tower must share labels in the same order")
    rows = []
    checks = []
    for i, level in enumerate(tower.levels, start=1):
        profile = covers.lebesgue_profile(level)
        upper = [(x, y) for x, y in space.pairs() if dh.d(x, y) <= i and not leq(space.d(x, y), profile.mesh)]
        lower = [(x, y) for x, y in space.pairs() if lt(space.d(x, y), profile.lebesgue) and dh.d(x, y) > i]
        witness = (upper or lower or [None])[0]
        rows.append(CoarseRow(
            level=i,
            mesh=profile.mesh,
            lebesgue=profile.lebesgue,
            upper_violations=len(upper),
            lower_violations=len(lower),
            witness=witness,
        ))
        checks.append(CheckResult.that(
            f"coarse@{i}", "d_h <= i implies d <= mesh(U_i) and d < L(U_i) implies d_h <= i",
            not upper and not lower, witness=witness
        ))
    for check in checks:
        log_check(logger, check, construction="coarse_equivalence")
    return CoarseEquivalenceReport(rows=rows, checks=checks)


def dh_scale_covers(
    tower: CoverTower,
    dh: FiniteMetricSpace,
    scales: Optional[Sequence[Any]] = None
) -> ScaleCoverReport:
    """
    Покрытия (X, d_h): одноточечные при r ≤ 4, уровень ⌊r⌋ (не выше
    верхнего) при r > 4; mesh ≤ r, L ≥ r/4, кратность ≤ n+1
    """
    if dh.labels != tower.space.labels:
        raise MalformedInputError("d_h and tower must share labels")
    if scales is None:
        scales = list(range(1, max(tower.height, 4) + 2))
    rows, checks = [], []
    for raw in scales:
        r = parse_number(raw)
        if r <= 4:
            level, cover = 0, Cover.singletons(dh)
        else:
            level = min(int(r), tower.height)
            cover = Cover(space=dh, elements=tower.level(level).elements)
        profile = covers.lebesgue_profile(cover)
        rows.append(ScaleCoverRow(
            r=r, level=level, mesh=profile.mesh,
            lebesgue=profile.lebesgue, multiplicity=profile.multiplicity,
        ))
        checks.extend([
            CheckResult.at_most(f"mesh@{r}", "mesh(V_r) <= r in d_h", profile.mesh, r),
            CheckResult.at_least(f"lebesgue@{r}", "L(V_r) >= r/4 in d_h", profile.lebesgue, r / 4),
            CheckResult.at_most(
                f"multiplicity@{r}", "multiplicity of V_r is at most n+1",
                profile.multiplicity, tower.n + 1
            ),
        ])
    for check in checks:
        log_check(logger, check, construction="dh_scale_covers")
    return ScaleCoverReport(rows=rows, checks=checks)
