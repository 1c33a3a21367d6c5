"""
Стратегии hypothesis поверх генераторов корпуса
"""

from hypothesis import strategies as st

from nagata.models.metric import FiniteMetricSpace
from nagata.services import corpus


def space_json(space: FiniteMetricSpace) -> dict:
    """Пространство в формате входного JSON, числа строками p/q"""
    return {
        "labels": list(space.labels),
        "dist": [[str(x) for x in row] for row in space.dist],
    }


@st.composite
def spaces(draw, max_size: int = 8):
    """Случайное конечное пространство: путь, решётка, дерево, облако или равномерное"""
    rng = draw(st.randoms(use_true_random=False))
    return corpus.random_space(rng, max_size)


@st.composite
def line_points(draw, min_size: int = 1, max_size: int = 10):
    """Различные целые точки прямой"""
    coords = draw(st.lists(st.integers(-30, 30), min_size=min_size, max_size=max_size, unique=True))
    return corpus.line_space(sorted(coords))


@st.composite
def covers_of(draw, max_size: int = 8):
    rng = draw(st.randoms(use_true_random=False))
    space = corpus.random_space(rng, max_size)
    return corpus.random_cover(space, rng)


@st.composite
def real_maps(draw, max_size: int = 8):
    rng = draw(st.randoms(use_true_random=False))
    space = corpus.random_space(rng, max_size)
    return corpus.random_real_map(space, rng)


@st.composite
def simplex_maps(draw, max_size: int = 8, max_coords: int = 4):
    rng = draw(st.randoms(use_true_random=False))
    space = corpus.random_space(rng, max_size)
    coords = draw(st.integers(2, max_coords))
    return corpus.random_simplex_map(space, rng, coords)
