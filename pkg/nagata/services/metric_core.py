"""
Сервис конечных метрических пространств

Проверка аксиом, подпространства, функторы min(d, ε) и max(d, ε),
константы Липшица и геометрия l₁/l₂ на ℝⁿ.
"""

from fractions import Fraction
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from nagata.core.config import settings
from nagata.core.errors import InvalidParameterError, LabelMismatchError, MalformedInputError
from nagata.core.numeric import (
    INF,
    Number,
    all_exact,
    parse_number,
    safe_ratio,
    sqrt,
)
from nagata.models.maps import PartialMap, TargetKind, TargetSpec
from nagata.models.metric import Axiom, FiniteMetricSpace, NormTag, VectorPoint, Violation

logger = structlog.get_logger(__name__)


def validate(space: FiniteMetricSpace) -> List[Violation]:
    """
    Проверка аксиом метрики

    Возвращает все нарушения со свидетелями; пустой список
    означает, что таблица задаёт метрику.
    """
    D = space.array()
    n = space.size
    tol = 0 if space.exact else settings.TOLERANCE
    labels = space.labels
    violations: List[Violation] = []

    for i in range(n):
        if abs(D[i, i]) > tol:
            violations.append(Violation(axiom=Axiom.ZERO_DIAGONAL, points=(labels[i],)))

    for i, j in space.pairs():
        pair = (labels[i], labels[j])
        if D[i, j] < -tol or D[j, i] < -tol:
            violations.append(Violation(axiom=Axiom.NONNEGATIVE, points=pair))
        elif abs(D[i, j]) <= tol or abs(D[j, i]) <= tol:
            violations.append(Violation(axiom=Axiom.POSITIVITY, points=pair))
        if abs(D[i, j] - D[j, i]) > tol:
            violations.append(Violation(axiom=Axiom.SYMMETRY, points=pair))

    if n >= 3:
        # through[i, j, k] = d(i, j) + d(j, k)
        through = D[:, :, None] + D[None, :, :]
        broken = np.asarray(D[:, None, :] > through + tol, dtype=bool)
        for i, j, k in np.argwhere(broken):
            if i < k and j != i and j != k:
                violations.append(
                    Violation(axiom=Axiom.TRIANGLE, points=(labels[i], labels[j], labels[k]))
                )

    logger.debug("Metric validated", points=n, violations=len(violations))
    return violations


def _transform(space: FiniteMetricSpace, epsilon: Any, pick: Callable) -> FiniteMetricSpace:
    eps = parse_number(epsilon)
    if not eps > 0 or eps == INF:
        raise InvalidParameterError(f"epsilon must be a positive finite number, got {epsilon!r}")
    n = space.size
    dist = [
        [space.d(i, j) if i == j else pick(space.d(i, j), eps) for j in range(n)]
        for i in range(n)
    ]
    return FiniteMetricSpace(labels=space.labels, dist=dist)


def transform_max(space: FiniteMetricSpace, epsilon: Any) -> FiniteMetricSpace:
    """Метрика max(d, ε) вне диагонали; диагональ не меняется"""
    return _transform(space, epsilon, max)


def transform_min(space: FiniteMetricSpace, epsilon: Any) -> FiniteMetricSpace:
    """Метрика min(d, ε) вне диагонали; диагональ не меняется"""
    return _transform(space, epsilon, min)


def coords_distance(u: Sequence[Number], v: Sequence[Number], norm: NormTag) -> Number:
    """Расстояние l₁ или l₂ между наборами координат"""
    if len(u) != len(v):
        raise MalformedInputError(f"Dimension mismatch: {len(u)} vs {len(v)}")
    if norm == NormTag.L1:
        return sum((abs(a - b) for a, b in zip(u, v)), Fraction(0))
    return sqrt(sum(((a - b) ** 2 for a, b in zip(u, v)), Fraction(0)))


def vector_distance(p: VectorPoint, q: VectorPoint) -> Number:
    if p.norm != q.norm:
        raise MalformedInputError("Vectors carry different norms")
    return coords_distance(p.coords, q.coords, p.norm)


def target_distance(target: TargetSpec) -> Callable[[Any, Any], Number]:
    """Функция расстояния в пространстве значений"""
    if target.kind == TargetKind.REAL:
        return lambda a, b: abs(a - b)
    if target.kind == TargetKind.SPACE:
        return target.space.d
    return lambda a, b: coords_distance(a, b, target.norm)


def measured_lipschitz(
    space: FiniteMetricSpace,
    points: Sequence[int],
    values: Sequence[Any],
    distance: Callable[[Any, Any], Number]
) -> Tuple[Number, Optional[Tuple[int, int]]]:
    """
    Точный максимум d_Y(f(x), f(y)) / d_X(x, y) по парам различных точек

    Возвращает константу и пару, на которой она достигается
    (None для одноточечной области или постоянного отображения).
    """
    best: Number = Fraction(0) if space.exact else 0.0
    witness = None
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            ratio = safe_ratio(distance(values[a], values[b]), space.d(points[a], points[b]))
            if ratio > best:
                best, witness = ratio, (points[a], points[b])
    return best, witness


def lipschitz_constant(f: PartialMap) -> Number:
    """Lip(f): 0 для одноточечной области и постоянных отображений"""
    lip, _ = lipschitz_witness(f)
    return lip


def lipschitz_witness(f: PartialMap) -> Tuple[Number, Optional[Tuple[int, int]]]:
    return measured_lipschitz(f.space, f.domain, f.values, target_distance(f.target))


def identity_map(source: FiniteMetricSpace, target: FiniteMetricSpace) -> PartialMap:
    """Тождественное отображение меток source → target"""
    _require_same_labels(source, target)
    return PartialMap(
        space=source,
        domain=tuple(source.points),
        target=TargetSpec(kind=TargetKind.SPACE, space=target),
        values=tuple(target.index(label) for label in source.labels),
    )


def compose(f: PartialMap, g: PartialMap) -> PartialMap:
    """Композиция g∘f; образ f должен лежать в области g"""
    if f.target.kind != TargetKind.SPACE or f.target.space != g.space:
        raise MalformedInputError("Cannot compose: target of f is not the source of g")
    missing = [y for y in f.values if y not in g]
    if missing:
        raise MalformedInputError("Image of f leaves the domain of g", {"points": missing})
    return PartialMap(
        space=f.space,
        domain=f.domain,
        target=g.target,
        values=tuple(g(y) for y in f.values),
    )


def _require_same_labels(d1: FiniteMetricSpace, d2: FiniteMetricSpace) -> None:
    if set(d1.labels) != set(d2.labels):
        raise LabelMismatchError(
            "Metrics are defined on different label sets",
            {"only_first": sorted(set(d1.labels) - set(d2.labels)),
             "only_second": sorted(set(d2.labels) - set(d1.labels))}
        )


def bilipschitz_bounds(d1: FiniteMetricSpace, d2: FiniteMetricSpace) -> Tuple[Number, Number]:
    """
    Наибольшее μ и наименьшее λ с μ·d1 ≤ d2 ≤ λ·d1

    Для одноточечного пространства возвращает (1, 1).
    """
    _require_same_labels(d1, d2)
    position = [d2.index(label) for label in d1.labels]
    ratios = [
        safe_ratio(d2.d(position[i], position[j]), d1.d(i, j)) for i, j in d1.pairs()
    ]
    if not ratios:
        return Fraction(1), Fraction(1)
    return min(ratios), max(ratios)


def space_from_points(
    points: Sequence[Sequence[Any]],
    norm: NormTag = NormTag.L1,
    labels: Optional[Sequence[str]] = None
) -> FiniteMetricSpace:
    """Таблица расстояний l₁ или l₂ для облака точек"""
    if not points:
        raise MalformedInputError("Point cloud is empty")
    coords = [[parse_number(c) for c in p] for p in points]
    if len({len(p) for p in coords}) != 1:
        raise MalformedInputError("All points must have the same number of coordinates")
    if not all_exact(c for p in coords for c in p):
        coords = [[float(c) for c in p] for p in coords]
    if labels is None:
        labels = [str(i) for i in range(len(coords))]
    n = len(coords)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dist[i][j] = dist[j][i] = coords_distance(coords[i], coords[j], NormTag(norm))
    return FiniteMetricSpace(labels=tuple(labels), dist=dist)


def subspace(space: FiniteMetricSpace, labels: Iterable[str]) -> FiniteMetricSpace:
    """Подпространство на заданных метках (порядок исходного пространства)"""
    wanted = set(space.indices(labels))
    if not wanted:
        raise MalformedInputError("Subspace must contain at least one point")
    keep = [i for i in space.points if i in wanted]
    return FiniteMetricSpace(
        labels=tuple(space.labels[i] for i in keep),
        dist=[[space.d(i, j) for j in keep] for i in keep],
    )


def delta_discreteness(space: FiniteMetricSpace) -> Number:
    """Точный минимум положительных расстояний"""
    return space.min_positive_distance


def diameter(space: FiniteMetricSpace) -> Number:
    return space.diameter
