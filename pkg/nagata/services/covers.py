"""
Сервис покрытий конечных метрических пространств

Числа Лебега, кратность, mesh, разбиения на r-дизъюнктные семейства
и проверка вписанности.
"""

from fractions import Fraction
from typing import Any, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import structlog

from nagata.core.config import settings
from nagata.core.errors import CoverIndexError, InvalidParameterError, MalformedInputError, PreconditionError
from nagata.core.logging import log_check
from nagata.core.numeric import Number, leq, lt, parse_number, safe_ratio
from nagata.models.cover import Cover, FamilyDecomposition, LebesgueProfile, Refinement, nonempty
from nagata.models.metric import FiniteMetricSpace
from nagata.models.schemas import CheckResult, ConversionReport, DecompositionReport
from nagata.services import metric_core

logger = structlog.get_logger(__name__)


def boundary_distance(cover: Cover, s: int, x: int) -> Number:
    """f_s(x) = dist(x, X∖U_s); inf если U_s = X, 0 если x ∉ U_s"""
    if not 0 <= s < len(cover.elements):
        raise CoverIndexError(f"Cover has no element {s}")
    if not 0 <= x < cover.space.size:
        raise MalformedInputError(f"Unknown point index {x}")
    element = cover.elements[s]
    complement = [y for y in cover.space.points if y not in element]
    return cover.space.point_to_set(x, complement)


def boundary_table(cover: Cover) -> List[List[Number]]:
    """Таблица f_s(x), индексы [s][x]"""
    space = cover.space
    table = []
    for element in cover.elements:
        complement = [y for y in space.points if y not in element]
        table.append([space.point_to_set(x, complement) for x in space.points])
    return table


def mesh(cover: Cover) -> Number:
    return max(cover.space.set_diameter(e) for e in cover.elements)


def multiplicity(cover: Cover) -> int:
    """Наибольшее число элементов, содержащих одну точку"""
    counts = [0] * cover.space.size
    for element in cover.elements:
        for x in element:
            counts[x] += 1
    return max(counts)


def lebesgue_profile(cover: Cover) -> LebesgueProfile:
    """Локальные и глобальное числа Лебега, mesh и обе кратности"""
    table = boundary_table(cover)
    space = cover.space
    local = [max(row[x] for row in table) for x in space.points]
    open_local = [sum(1 for row in table if row[x] > 0) for x in space.points]
    plus_one_local = [1 + m for m in open_local]

    profile = LebesgueProfile(
        local=tuple(local),
        lebesgue=min(local),
        mesh=mesh(cover),
        multiplicity_local=tuple(open_local),
        multiplicity=max(open_local),
        multiplicity_plus_one_local=tuple(plus_one_local),
        multiplicity_plus_one=max(plus_one_local),
    )
    logger.debug(
        "Lebesgue profile computed",
        points=space.size,
        elements=len(cover.elements),
        lebesgue=str(profile.lebesgue),
        mesh=str(profile.mesh),
        multiplicity=profile.multiplicity
    )
    return profile


def lebesgue_number(cover: Cover) -> Number:
    return lebesgue_profile(cover).lebesgue


def is_r_lebesgue(cover: Cover, r: Any) -> bool:
    """r ≤ L(U)"""
    r = parse_number(r)
    if not r > 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    return leq(r, lebesgue_number(cover))


def check_decomposition(decomp: FamilyDecomposition) -> DecompositionReport:
    """
    Проверка r-дизъюнктности каждого семейства

    Нарушения не бросают исключений: отчёт содержит первую
    пару элементов одного семейства на расстоянии меньше r.
    """
    space = decomp.space
    elements = decomp.cover.elements
    violating_pair: Optional[Tuple[int, int]] = None
    violating_distance = None

    for family in decomp.families():
        for a in range(len(family)):
            for b in range(a + 1, len(family)):
                s, u = family[a], family[b]
                gap = space.set_distance(elements[s], elements[u])
                if lt(gap, decomp.r):
                    violating_pair, violating_distance = (s, u), gap
                    break
            if violating_pair:
                break
        if violating_pair:
            break

    cover_mesh = mesh(decomp.cover)
    report = DecompositionReport(
        is_valid=violating_pair is None,
        violating_pair=violating_pair,
        violating_distance=violating_distance,
        mesh=cover_mesh,
        bound_ratio=safe_ratio(cover_mesh, decomp.r),
    )
    logger.debug(
        "Decomposition checked",
        families=decomp.k,
        elements=len(elements),
        valid=report.is_valid,
        bound_ratio=str(report.bound_ratio)
    )
    return report


def refines(fine: Cover, coarse: Cover) -> bool:
    """Каждый элемент fine лежит в некотором элементе coarse"""
    if fine.space.labels != coarse.space.labels:
        raise MalformedInputError("Covers live on different spaces")
    return all(any(v <= u for u in coarse.elements) for v in fine.elements)


def neighborhood(space: FiniteMetricSpace, subset: Iterable[int], radius: Number) -> FrozenSet[int]:
    """Открытая окрестность {x : dist(x, U) < radius}"""
    subset = list(subset)
    return frozenset(x for x in space.points if space.point_to_set(x, subset) < radius)


def _shrink_fraction(shrink: Any) -> Number:
    sigma = settings.DEFAULT_SHRINK if shrink is None else parse_number(shrink)
    if not 0 < sigma < Fraction(1, 2):
        raise InvalidParameterError(f"shrink must lie in (0, 1/2), got {sigma}")
    return sigma


def decomposition_to_lebesgue_cover(decomp: FamilyDecomposition, shrink: Any = None) -> Cover:
    """
    Покрытие (σ·r)-окрестностями элементов разбиения

    Окрестности внутри одного семейства остаются непересекающимися,
    поэтому кратность не превосходит числа семейств.
    """
    sigma = _shrink_fraction(shrink)
    report = check_decomposition(decomp)
    if not report.is_valid:
        raise PreconditionError(
            "Decomposition is not r-disjoint",
            {"violating_pair": report.violating_pair}
        )
    radius = sigma * decomp.r
    space = decomp.space
    return Cover(
        space=space,
        elements=tuple(neighborhood(space, e, radius) for e in decomp.cover.elements)
    )


def lebesgue_conversion(decomp: FamilyDecomposition, shrink: Any = None) -> ConversionReport:
    """Покрытие окрестностями вместе с проверкой заявленных границ"""
    sigma = _shrink_fraction(shrink)
    cover = decomposition_to_lebesgue_cover(decomp, sigma)
    profile = lebesgue_profile(cover)
    radius = sigma * decomp.r
    original_mesh = mesh(decomp.cover)

    checks = [
        CheckResult.that(
            "contains_original",
            "each neighborhood contains its decomposition element",
            all(u <= n for u, n in zip(decomp.cover.elements, cover.elements)),
        ),
        CheckResult.at_most(
            "multiplicity", "multiplicity is at most the family count",
            profile.multiplicity, decomp.k
        ),
        CheckResult.at_least(
            "lebesgue", "Lebesgue number is at least shrink*r",
            profile.lebesgue, radius
        ),
        CheckResult.at_most(
            "mesh", "mesh is at most original mesh + 2*shrink*r",
            profile.mesh, original_mesh + 2 * radius
        ),
    ]
    for check in checks:
        log_check(logger, check)
    return ConversionReport(cover=cover, profile=profile, radius=radius, checks=checks)


def ball_cover(space: FiniteMetricSpace, radius: Any) -> Cover:
    """Покрытие открытыми шарами B(x, radius) без повторов"""
    radius = parse_number(radius)
    if not radius > 0:
        raise InvalidParameterError(f"radius must be positive, got {radius}")
    seen, elements = set(), []
    for x in space.points:
        ball = space.ball(x, radius)
        if ball not in seen:
            seen.add(ball)
            elements.append(ball)
    return Cover(space=space, elements=tuple(elements))


def ball_multiplicity(cover: Cover, radius: Any) -> int:
    """Наибольшее число элементов, пересекающих открытый шар радиуса radius"""
    radius = parse_number(radius)
    space = cover.space
    return max(
        sum(1 for e in cover.elements if e & space.ball(x, radius))
        for x in space.points
    )


def trace(cover: Cover, subset: Iterable[int]) -> List[FrozenSet[int]]:
    """Следы элементов на подмножестве, в исходной индексации (могут быть пустыми)"""
    subset = frozenset(subset)
    return [e & subset for e in cover.elements]


def restrict_cover(cover: Cover, labels: Sequence[str]) -> Cover:
    """След покрытия на подпространстве; пустые следы отбрасываются"""
    sub = metric_core.subspace(cover.space, labels)
    position = {cover.space.index(label): i for i, label in enumerate(sub.labels)}
    kept, _ = nonempty(trace(cover, position))
    return Cover(
        space=sub,
        elements=tuple(frozenset(position[x] for x in e) for e in kept)
    )


def refinement_by_merging(fine: Cover, coarse: Cover) -> Refinement:
    """
    Каждый элемент fine приписывается первому содержащему его элементу coarse,
    элементы с общим родителем объединяются

    Объединение не уменьшает число Лебега и не увеличивает кратность.
    """
    groups = [set() for _ in coarse.elements]
    for v in fine.elements:
        parent = next((p for p, u in enumerate(coarse.elements) if v <= u), None)
        if parent is None:
            raise PreconditionError(
                "Fine cover does not refine the coarse cover",
                {"element": sorted(v)}
            )
        groups[parent] |= v
    kept, parents = nonempty([frozenset(g) for g in groups])
    return Refinement(
        cover=Cover(space=coarse.space, elements=tuple(kept)),
        parent=tuple(parents),
        refined=coarse,
    )


def shrink_to_multiplicity(cover: Cover, m: int) -> Refinement:
    """
    Жадное сжатие до кратности не больше m

    Точка, лежащая в слишком многих элементах, остаётся в m элементах
    с наибольшими f_s(x) (при равенстве в элементах с меньшим индексом)
    и удаляется из остальных.
    """
    if m < 1:
        raise InvalidParameterError(f"Target multiplicity must be at least 1, got {m}")
    table = boundary_table(cover)
    shrunk = [set(e) for e in cover.elements]
    for x in cover.space.points:
        members = [s for s, e in enumerate(cover.elements) if x in e]
        if len(members) <= m:
            continue
        members.sort(key=lambda s: (-table[s][x], s))
        for s in members[m:]:
            shrunk[s].discard(x)
    kept, parents = nonempty([frozenset(e) for e in shrunk])
    return Refinement(
        cover=Cover(space=cover.space, elements=tuple(kept)),
        parent=tuple(parents),
        refined=cover,
    )
