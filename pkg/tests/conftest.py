"""
Общие фикстуры тестов Nagata Toolkit
"""

import json

import pytest

from nagata.models.metric import FiniteMetricSpace
from nagata.services import corpus


@pytest.fixture
def path5() -> FiniteMetricSpace:
    """Точки 0..4 на прямой"""
    return corpus.path_space(5)


@pytest.fixture
def broken_triangle() -> FiniteMetricSpace:
    """d(a, c) = 5 > d(a, b) + d(b, c) = 2"""
    return FiniteMetricSpace(
        labels=["a", "b", "c"],
        dist=[[0, 1, 5], [1, 0, 1], [5, 1, 0]],
    )


@pytest.fixture
def two_clusters() -> FiniteMetricSpace:
    """Две пары точек: расстояние 1 внутри пары, 99 между парами"""
    return corpus.line_space([0, 1, 100, 101])


@pytest.fixture
def grid3() -> FiniteMetricSpace:
    return corpus.grid_space(3, 3)


@pytest.fixture
def write_json(tmp_path):
    """Запись JSON во временный файл, возвращает путь строкой"""

    def _write(name: str, data) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write
