"""
Генераторы тестовых пространств, покрытий и отображений

Все генераторы принимают явный random.Random, поэтому корпус
воспроизводим по зерну.
"""

import random
from fractions import Fraction
from typing import List, Optional, Sequence

import networkx as nx

from nagata.models.cover import Cover
from nagata.models.maps import PartialMap, TargetSpec
from nagata.models.metric import FiniteMetricSpace, NormTag
from nagata.services import metric_core


def path_space(n: int, step: int = 1) -> FiniteMetricSpace:
    """Точки 0, step, 2·step, ... на прямой"""
    return metric_core.space_from_points([[i * step] for i in range(n)])


def line_space(coords: Sequence) -> FiniteMetricSpace:
    """Точки прямой с заданными координатами, метки: сами координаты"""
    return metric_core.space_from_points([[c] for c in coords], labels=[str(c) for c in coords])


def grid_space(width: int, height: int, norm: NormTag = NormTag.L1) -> FiniteMetricSpace:
    """Целочисленная решётка width × height, метки "i,j" """
    points = [[i, j] for i in range(width) for j in range(height)]
    labels = [f"{i},{j}" for i, j in points]
    return metric_core.space_from_points(points, norm, labels)


def uniform_space(n: int, value=1) -> FiniteMetricSpace:
    """Все попарные расстояния равны value"""
    value = Fraction(value)
    dist = [[Fraction(0) if i == j else value for j in range(n)] for i in range(n)]
    return FiniteMetricSpace(labels=[str(i) for i in range(n)], dist=dist)


def tree_space(n: int, rng: random.Random, max_weight: int = 3) -> FiniteMetricSpace:
    """Метрика кратчайших путей случайного дерева с целыми весами рёбер"""
    graph = nx.Graph()
    graph.add_node(0)
    for v in range(1, n):
        graph.add_edge(rng.randrange(v), v, weight=rng.randint(1, max_weight))
    lengths = dict(nx.all_pairs_dijkstra_path_length(graph))
    dist = [[Fraction(lengths[i][j]) for j in range(n)] for i in range(n)]
    return FiniteMetricSpace(labels=[str(i) for i in range(n)], dist=dist)


def perturbed_cloud(
    n: int,
    rng: random.Random,
    dim: int = 2,
    norm: NormTag = NormTag.L1,
    spread: int = 10
) -> FiniteMetricSpace:
    """
    Различные точки решётки со случайным рациональным сдвигом

    Координаты кратны 1/10, поэтому в l₁ пространство точное.
    """
    seen = set()
    points: List[List[Fraction]] = []
    while len(points) < n:
        p = tuple(Fraction(rng.randint(0, spread)) + Fraction(rng.randint(0, 9), 10) for _ in range(dim))
        if p not in seen:
            seen.add(p)
            points.append(list(p))
    return metric_core.space_from_points(points, norm)


def random_space(rng: random.Random, max_size: int = 12) -> FiniteMetricSpace:
    """Пространство одного из видов: путь, решётка, дерево, облако, равномерное"""
    kind = rng.choice(["path", "grid", "tree", "cloud", "uniform"])
    if kind == "path":
        return path_space(rng.randint(1, max_size), rng.randint(1, 3))
    if kind == "grid":
        width = rng.randint(1, max(1, min(4, max_size)))
        return grid_space(width, rng.randint(1, max(1, max_size // width)))
    if kind == "tree":
        return tree_space(rng.randint(1, max_size), rng)
    if kind == "cloud":
        return perturbed_cloud(rng.randint(1, max_size), rng)
    return uniform_space(rng.randint(1, max_size), rng.randint(1, 3))


def random_subset(space: FiniteMetricSpace, rng: random.Random, size: Optional[int] = None) -> List[int]:
    """Непустое случайное подмножество индексов по возрастанию"""
    size = rng.randint(1, space.size) if size is None else size
    return sorted(rng.sample(list(space.points), size))


def random_cover(space: FiniteMetricSpace, rng: random.Random, elements: Optional[int] = None) -> Cover:
    """
    Случайное покрытие: каждая точка попадает в случайный непустой
    набор из elements элементов, пустые элементы отбрасываются
    """
    k = rng.randint(1, 4) if elements is None else elements
    sets = [set() for _ in range(k)]
    for x in space.points:
        for s in rng.sample(range(k), rng.randint(1, k)):
            sets[s].add(x)
    return Cover.from_sets(space, [s for s in sets if s])


def random_real_map(space: FiniteMetricSpace, rng: random.Random, spread: int = 10) -> PartialMap:
    """Целочисленные значения на случайном подмножестве"""
    domain = random_subset(space, rng)
    return PartialMap(
        space=space,
        domain=tuple(domain),
        target=TargetSpec.real(),
        values=tuple(Fraction(rng.randint(-spread, spread)) for _ in domain),
    )


def random_simplex_map(
    space: FiniteMetricSpace,
    rng: random.Random,
    coords: int,
    norm: NormTag = NormTag.L1
) -> PartialMap:
    """Рациональные точки симплекса Δ^{coords-1} на случайном подмножестве"""
    domain = random_subset(space, rng)
    values = []
    for _ in domain:
        raw = [rng.randint(0, 6) for _ in range(coords)]
        if sum(raw) == 0:
            raw[rng.randrange(coords)] = 1
        total = sum(raw)
        values.append(tuple(Fraction(c, total) for c in raw))
    return PartialMap(
        space=space,
        domain=tuple(domain),
        target=TargetSpec.simplex(coords, norm),
        values=tuple(values),
    )


def random_boundary_map(space: FiniteMetricSpace, rng: random.Random, coords: int) -> PartialMap:
    """Вершины ∂Δ^{coords-1} на случайном подмножестве"""
    domain = random_subset(space, rng)
    values = []
    for _ in domain:
        vertex = rng.randrange(coords)
        values.append(tuple(Fraction(int(i == vertex)) for i in range(coords)))
    return PartialMap(
        space=space,
        domain=tuple(domain),
        target=TargetSpec.simplex(coords, boundary=True),
        values=tuple(values),
    )
