"""
Сервис размерности Нагаты-Ассуада на диапазоне масштабов

Точный перебор раскрасок для маленьких пространств, жадная эвристика
по сетям для больших, три эквивалентные формы определения и
макро/микро размерность через функторы max(d, M) и min(d, M).
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import structlog

from nagata.core.config import settings
from nagata.core.errors import InvalidParameterError, MalformedInputError
from nagata.core.logging import log_check
from nagata.core.numeric import Number, leq, lt, parse_number, safe_ratio
from nagata.models.cover import Cover, FamilyDecomposition
from nagata.models.metric import FiniteMetricSpace
from nagata.models.schemas import (
    CharacterizationResult,
    CheckResult,
    DecompositionSearch,
    DimensionReport,
    FunctorDimensionReport,
    ScaleWitness,
    SearchStatus,
    UnionReport,
)
from nagata.services import covers, metric_core
from nagata.services.union_find import UnionFind

logger = structlog.get_logger(__name__)

MODES = ("full", "macro", "micro")


def strict_components(
    space: FiniteMetricSpace,
    subset: Iterable[int],
    r: Number
) -> List[frozenset]:
    """Компоненты отношения d < r внутри подмножества"""
    members = sorted(subset)
    uf = UnionFind()
    for x in members:
        uf.find(x)
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            if lt(space.d(members[a], members[b]), r):
                uf.union(members[a], members[b])
    return uf.components()


def _decomposition_from_colors(
    space: FiniteMetricSpace,
    colors: Sequence[int],
    r: Number,
    k: int
) -> FamilyDecomposition:
    elements, family_of = [], []
    for c in range(k):
        members = [x for x in space.points if colors[x] == c]
        for component in strict_components(space, members, r):
            elements.append(component)
            family_of.append(c)
    return FamilyDecomposition(
        cover=Cover(space=space, elements=tuple(elements)),
        family_of=tuple(family_of),
        r=r,
        k=k,
    )


def _exact_colors(space: FiniteMetricSpace, r: Number, C: Number, k: int) -> Optional[List[int]]:
    """
    Перебор раскрасок точек в k цветов с отсечением

    Цвет задаёт семейство, элементы семейства: компоненты d < r
    одного цвета; раскраска допустима, если все компоненты имеют
    диаметр ≤ C·r. Компоненты только растут при добавлении точек,
    поэтому проверяется лишь компонента новой точки.
    """
    n = space.size
    limit = C * r
    colors = [-1] * n

    def component_ok(x: int) -> bool:
        members = [y for y in range(n) if colors[y] == colors[x]]
        component, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for z in members:
                if z not in component and lt(space.d(y, z), r):
                    component.add(z)
                    stack.append(z)
        return leq(space.set_diameter(component), limit)

    def place(i: int, used: int) -> bool:
        if i == n:
            return True
        # новые цвета вводятся по порядку
        for c in range(min(used + 1, k)):
            colors[i] = c
            if component_ok(i) and place(i + 1, max(used, c + 1)):
                return True
        colors[i] = -1
        return False

    return colors if place(0, 0) else None


def _index_order(graph, colors):
    return sorted(graph)


def color_conflicts(elements: Sequence[frozenset], space: FiniteMetricSpace, r: Number) -> dict:
    """Жадная раскраска графа элементов на расстоянии меньше r (первый подходящий цвет по индексу)"""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(elements)))
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            if lt(space.set_distance(elements[a], elements[b]), r):
                graph.add_edge(a, b)
    return nx.greedy_color(graph, strategy=_index_order)


def greedy_clusters(space: FiniteMetricSpace, r: Number, C: Number) -> List[frozenset]:
    """
    Кластеры вокруг максимальной (C·r/2)-сети

    Центры попарно на расстоянии ≥ C·r/2, точка приписывается ближайшему
    центру (при равенстве центру с меньшим индексом), диаметр кластера < C·r.
    """
    radius = C * r / 2
    centers: List[int] = []
    for x in space.points:
        if all(not lt(space.d(x, c), radius) for c in centers):
            centers.append(x)
    groups = {c: set() for c in centers}
    for x in space.points:
        nearest = min(centers, key=lambda c: (space.d(x, c), c))
        groups[nearest].add(x)
    return [frozenset(groups[c]) for c in centers]


def _greedy_decomposition(space: FiniteMetricSpace, r: Number, C: Number, k: int) -> Optional[FamilyDecomposition]:
    clusters = greedy_clusters(space, r, C)
    coloring = color_conflicts(clusters, space, r)
    if max(coloring.values()) + 1 > k:
        return None
    return FamilyDecomposition(
        cover=Cover(space=space, elements=tuple(clusters)),
        family_of=tuple(coloring[i] for i in range(len(clusters))),
        r=r,
        k=k,
    )


def find_decomposition(
    space: FiniteMetricSpace,
    r: Any,
    C: Any,
    n: int,
    exact: Optional[bool] = None
) -> DecompositionSearch:
    """
    Разбиение на n+1 семейство r-дизъюнктных множеств диаметра ≤ C·r

    exact=None выбирает точный перебор для |X| ≤ EXACT_THRESHOLD.
    Для n = 0 ответ точен при любом размере: компоненты d < r
    образуют самое мелкое r-дизъюнктное разбиение. Жадная эвристика
    при неудаче возвращает статус unknown.
    """
    r, C = parse_number(r), parse_number(C)
    if not r > 0 or not C > 0:
        raise InvalidParameterError(f"r and C must be positive, got r={r}, C={C}")
    if n < 0:
        raise InvalidParameterError(f"n must be non-negative, got {n}")
    k = n + 1
    use_exact = space.size <= settings.EXACT_THRESHOLD if exact is None else exact

    if n == 0:
        components = strict_components(space, space.points, r)
        bounded = all(leq(space.set_diameter(c), C * r) for c in components)
        decomposition = FamilyDecomposition(
            cover=Cover(space=space, elements=tuple(components)),
            family_of=tuple(0 for _ in components),
            r=r,
            k=1,
        ) if bounded else None
        status, is_exact = (SearchStatus.FOUND if bounded else SearchStatus.IMPOSSIBLE), True
    elif use_exact:
        colors = _exact_colors(space, r, C, k)
        decomposition = None if colors is None else _decomposition_from_colors(space, colors, r, k)
        status = SearchStatus.IMPOSSIBLE if colors is None else SearchStatus.FOUND
        is_exact = True
    else:
        decomposition = _greedy_decomposition(space, r, C, k)
        status = SearchStatus.UNKNOWN if decomposition is None else SearchStatus.FOUND
        is_exact = False

    logger.debug(
        "Decomposition search finished",
        points=space.size,
        r=str(r),
        C=str(C),
        n=n,
        status=status.value,
        exact=is_exact
    )
    return DecompositionSearch(status=status, exact=is_exact, r=r, n=n, decomposition=decomposition)


def default_scales(space: FiniteMetricSpace) -> List[Number]:
    """Различные положительные расстояния по возрастанию"""
    return sorted({space.d(i, j) for i, j in space.pairs()})


def _in_mode(r: Number, mode: str, M: Optional[Number]) -> bool:
    if mode == "macro":
        return r > M
    if mode == "micro":
        return r < M
    return True


def _scale_witness(
    space: FiniteMetricSpace,
    r: Number,
    C: Number,
    max_n: int,
    exact: Optional[bool]
) -> ScaleWitness:
    lower = 0
    for n in range(max_n + 1):
        search = find_decomposition(space, r, C, n, exact)
        if search.found:
            return ScaleWitness(
                r=r, n_lower=lower, n_upper=n, exact=lower == n, witness=search.decomposition
            )
        if search.status == SearchStatus.IMPOSSIBLE and lower == n:
            lower = n + 1
    return ScaleWitness(r=r, n_lower=lower, n_upper=None, exact=False)


def scale_range_dimension(
    space: FiniteMetricSpace,
    C: Any,
    scales: Optional[Sequence[Any]] = None,
    mode: str = "full",
    M: Any = None,
    exact: Optional[bool] = None,
    max_n: Optional[int] = None
) -> DimensionReport:
    """
    Наименьшее n, при котором разбиение находится на каждом масштабе режима

    Режим macro оставляет масштабы r > M, micro: r < M.
    Без точного перебора возвращаются нижняя и верхняя оценки.
    """
    C = parse_number(C)
    if not C > 0:
        raise InvalidParameterError(f"C must be positive, got {C}")
    if mode not in MODES:
        raise MalformedInputError(f"Unknown mode {mode!r}, expected one of {MODES}")
    if mode != "full":
        if M is None:
            raise InvalidParameterError(f"Mode {mode} needs a threshold M")
        M = parse_number(M)
        if not M > 0:
            raise InvalidParameterError(f"M must be positive, got {M}")
    if exact and space.size > settings.EXACT_THRESHOLD:
        logger.warning("Exact search requested above threshold", points=space.size)

    raw = default_scales(space) if scales is None else [parse_number(r) for r in scales]
    if any(not r > 0 for r in raw):
        raise InvalidParameterError("Scales must be positive")
    in_scope = sorted(r for r in set(raw) if _in_mode(r, mode, M))
    limit = max(space.size - 1, 0) if max_n is None else max_n

    with ThreadPoolExecutor(max_workers=max(settings.THREADS, 1)) as pool:
        rows = list(pool.map(lambda r: _scale_witness(space, r, C, limit, exact), in_scope))

    n_lower = max((row.n_lower for row in rows), default=0)
    uppers = [row.n_upper for row in rows]
    n_upper = None if any(u is None for u in uppers) else max(uppers, default=0)

    report = DimensionReport(
        C=C, mode=mode, M=M, scales=in_scope, n_lower=n_lower, n_upper=n_upper, per_scale=rows
    )
    logger.info(
        "Scale range dimension computed",
        points=space.size,
        mode=mode,
        scales=len(in_scope),
        n_lower=n_lower,
        n_upper=n_upper
    )
    return report


def _per_scale(report: DimensionReport) -> dict:
    return {row.r: row for row in report.per_scale}


def macro_dimension(
    space: FiniteMetricSpace,
    C: Any,
    scales: Optional[Sequence[Any]],
    M: Any,
    exact: Optional[bool] = None
) -> FunctorDimensionReport:
    """
    Размерность (X, d) на масштабах r > M против размерности (X, max(d, M))

    При r > M и C ≥ 1 разбиения двух метрик совпадают, при r ≤ M
    пространство (X, max(d, M)) разбивается на одноточечные множества.
    """
    C, M = parse_number(C), parse_number(M)
    transformed_space = metric_core.transform_max(space, M)
    scale_list = default_scales(space) if scales is None else [parse_number(r) for r in scales]
    original = scale_range_dimension(space, C, scale_list, "macro", M, exact)
    transformed = scale_range_dimension(transformed_space, C, scale_list, "full", None, exact)

    checks = []
    rows = _per_scale(transformed)
    for row in original.per_scale:
        other = rows[row.r]
        if row.exact and other.exact:
            checks.append(CheckResult.that(
                f"macro_agreement@{row.r}",
                "dimension of (X, d) at r > M equals dimension of (X, max(d, M))",
                row.n_upper == other.n_upper, enforced=C >= 1,
                witness={"original": row.n_upper, "transformed": other.n_upper}
            ))
    for row in transformed.per_scale:
        if row.r <= M:
            checks.append(CheckResult.at_most(
                f"macro_small_scale@{row.r}", "(X, max(d, M)) has dimension 0 at r <= M",
                row.n_upper if row.n_upper is not None else row.n_lower, 0
            ))
    for check in checks:
        log_check(logger, check, mode="macro")
    return FunctorDimensionReport(
        mode="macro", M=M, original=original, transformed=transformed,
        transformed_space=transformed_space, checks=checks,
    )


def micro_dimension(
    space: FiniteMetricSpace,
    C: Any,
    scales: Optional[Sequence[Any]],
    M: Any,
    exact: Optional[bool] = None
) -> FunctorDimensionReport:
    """
    Размерность (X, d) на масштабах r < M против размерности (X, min(d, M))

    При r < M размерность min(d, M) не больше исходной и равна ей при C·r < M,
    при r ≥ M и C ≥ 1 всё пространство является одним элементом.
    """
    C, M = parse_number(C), parse_number(M)
    transformed_space = metric_core.transform_min(space, M)
    scale_list = default_scales(space) if scales is None else [parse_number(r) for r in scales]
    original = scale_range_dimension(space, C, scale_list, "micro", M, exact)
    transformed = scale_range_dimension(transformed_space, C, scale_list, "full", None, exact)

    checks = []
    rows = _per_scale(transformed)
    for row in original.per_scale:
        other = rows.get(row.r)
        if other is None or not (row.exact and other.exact):
            continue
        checks.append(CheckResult.at_most(
            f"micro_monotone@{row.r}",
            "dimension of (X, min(d, M)) at r < M is at most that of (X, d)",
            other.n_upper, row.n_upper
        ))
        if C * row.r < M:
            checks.append(CheckResult.that(
                f"micro_agreement@{row.r}",
                "dimensions agree at r < M when C*r < M",
                row.n_upper == other.n_upper,
                witness={"original": row.n_upper, "transformed": other.n_upper}
            ))
    for row in transformed.per_scale:
        if row.r >= M:
            checks.append(CheckResult.at_most(
                f"micro_large_scale@{row.r}", "(X, min(d, M)) has dimension 0 at r >= M",
                row.n_upper if row.n_upper is not None else row.n_lower, 0, enforced=C >= 1
            ))
    for check in checks:
        log_check(logger, check, mode="micro")
    return FunctorDimensionReport(
        mode="micro", M=M, original=original, transformed=transformed,
        transformed_space=transformed_space, checks=checks,
    )


def transport_decomposition(
    decomp: FamilyDecomposition,
    target_space: FiniteMetricSpace,
    C: Any
) -> Tuple[FamilyDecomposition, Number]:
    """
    Перенос разбиения через тождественное отображение меток

    При μ·d₁ ≤ d₂ ≤ λ·d₁ разбиение масштаба r с диаметрами ≤ C·r
    становится разбиением масштаба μ·r с константой C·λ/μ.
    """
    C = parse_number(C)
    mu, lam = metric_core.bilipschitz_bounds(decomp.space, target_space)
    position = [target_space.index(label) for label in decomp.space.labels]
    elements = tuple(frozenset(position[x] for x in e) for e in decomp.cover.elements)
    moved = FamilyDecomposition(
        cover=Cover(space=target_space, elements=elements),
        family_of=decomp.family_of,
        r=mu * decomp.r,
        k=decomp.k,
    )
    return moved, C * lam / mu


def characterization_convert(
    obj: Any,
    direction: str,
    r: Any = None,
    shrink: Any = None
) -> CharacterizationResult:
    """
    Переходы между формами определения размерности

    1->2: разбиение → покрытие окрестностями с числом Лебега;
    2->3: покрытие остаётся тем же, измеряется число элементов,
    пересекающих шары радиуса L/2;
    3->1: жадная раскраска элементов по конфликтам на расстоянии меньше r.
    Все константы измеряются.
    """
    if direction == "1->2":
        if not isinstance(obj, FamilyDecomposition):
            raise MalformedInputError("Direction 1->2 needs a family decomposition")
        conversion = covers.lebesgue_conversion(obj, shrink)
        profile = conversion.profile
        return CharacterizationResult(
            direction=direction,
            cover=conversion.cover,
            constants={
                "lebesgue": profile.lebesgue,
                "mesh": profile.mesh,
                "multiplicity": profile.multiplicity,
                "C1": safe_ratio(profile.mesh, profile.lebesgue),
                "passed": conversion.all_passed,
            },
        )

    if not isinstance(obj, Cover):
        raise MalformedInputError(f"Direction {direction} needs a cover")
    profile = covers.lebesgue_profile(obj)

    if direction == "2->3":
        radius = profile.lebesgue / 2
        return CharacterizationResult(
            direction=direction,
            cover=obj,
            constants={
                "radius": radius,
                "ball_multiplicity": covers.ball_multiplicity(obj, radius),
                "multiplicity": profile.multiplicity,
                "mesh": profile.mesh,
                "C2": safe_ratio(profile.mesh, radius),
            },
        )

    if direction == "3->1":
        if r is None:
            raise InvalidParameterError("Direction 3->1 needs a scale r")
        r = parse_number(r)
        coloring = color_conflicts(obj.elements, obj.space, r)
        k = max(coloring.values()) + 1
        decomposition = FamilyDecomposition(
            cover=obj,
            family_of=tuple(coloring[i] for i in range(len(obj.elements))),
            r=r,
            k=k,
        )
        report = covers.check_decomposition(decomposition)
        return CharacterizationResult(
            direction=direction,
            decomposition=decomposition,
            constants={
                "families": k,
                "ball_multiplicity": covers.ball_multiplicity(obj, r),
                "mesh": report.mesh,
                "C": report.bound_ratio,
                "valid": report.is_valid,
            },
        )

    raise MalformedInputError(f"Unknown direction {direction!r}, expected 1->2, 2->3 or 3->1")


def union_harness(
    space: FiniteMetricSpace,
    part_a: Sequence[str],
    part_b: Sequence[str],
    C: Any,
    scales: Optional[Sequence[Any]] = None,
    exact: Optional[bool] = None
) -> UnionReport:
    """Размерности A, B и A ∪ B на общих масштабах, без утверждений"""
    scale_list = default_scales(space) if scales is None else scales
    sub_a = metric_core.subspace(space, part_a)
    sub_b = metric_core.subspace(space, part_b)
    sub_union = metric_core.subspace(space, list(part_a) + list(part_b))
    reports = [
        scale_range_dimension(sub, C, scale_list, exact=exact)
        for sub in (sub_a, sub_b, sub_union)
    ]
    a, b, union = reports
    agrees = None
    if a.exact and b.exact and union.exact:
        agrees = union.n_exact == max(a.n_exact, b.n_exact)
    logger.info(
        "Union harness measured",
        a=a.n_upper, b=b.n_upper, union=union.n_upper, agrees=agrees
    )
    return UnionReport(part_a=a, part_b=b, union=union, agrees=agrees)
