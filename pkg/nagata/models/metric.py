"""
Pydantic модели конечных метрических пространств
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from nagata.core.errors import MalformedInputError
from nagata.core.numeric import INF, Number, NumberValue, all_exact, as_array, parse_number


class NormTag(str, Enum):
    """Метрика на ℝⁿ и на симплексах"""
    L1 = "l1"
    L2 = "l2"


class Axiom(str, Enum):
    """Аксиомы метрики"""
    ZERO_DIAGONAL = "zero_diagonal"
    NONNEGATIVE = "nonnegative"
    POSITIVITY = "positivity"
    SYMMETRY = "symmetry"
    TRIANGLE = "triangle"


class Violation(BaseModel):
    """Нарушение аксиомы метрики со свидетелями"""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"axiom": "triangle", "points": ["a", "b", "c"]}}
    )

    axiom: Axiom = Field(..., description="Нарушенная аксиома")
    points: Tuple[str, ...] = Field(..., description="Точки-свидетели")


class FiniteMetricSpace(BaseModel):
    """
    Конечное метрическое пространство: метки точек и полная таблица расстояний

    Таблица хранится как есть; аксиомы проверяет metric_core.validate.
    Структурные ошибки (пустое пространство, не квадратная таблица,
    повторяющиеся метки) отклоняются при создании.
    """

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {"labels": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}
        }
    )

    labels: Tuple[str, ...] = Field(..., description="Метки точек")
    dist: Tuple[Tuple[Any, ...], ...] = Field(..., description="Симметричная таблица расстояний")

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)
    _exact: bool = PrivateAttr(default=True)

    @field_validator("labels", mode="before")
    @classmethod
    def normalize_labels(cls, v):
        return tuple(str(label) for label in v)

    @field_validator("dist", mode="before")
    @classmethod
    def normalize_dist(cls, v):
        """Fraction для рациональных записей; при наличии float вся таблица во float"""
        try:
            rows = [[parse_number(x) for x in row] for row in v]
        except TypeError:
            raise MalformedInputError("Distance table must be a list of rows")
        flat = [x for row in rows for x in row]
        if not all_exact(flat):
            rows = [[float(x) for x in row] for row in rows]
        return tuple(tuple(row) for row in rows)

    @model_validator(mode="after")
    def validate_shape(self):
        """Проверка структуры: непустое множество, уникальные метки, квадратная таблица"""
        if not self.labels:
            raise MalformedInputError("Empty metric space is not allowed")
        if len(set(self.labels)) != len(self.labels):
            raise MalformedInputError("Point labels must be unique")
        n = len(self.labels)
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise MalformedInputError(
                f"Distance table must be {n}x{n}",
                {"rows": len(self.dist), "row_lengths": [len(row) for row in self.dist]}
            )
        return self

    def model_post_init(self, __context: Any) -> None:
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._exact = all_exact(x for row in self.dist for x in row)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def points(self) -> range:
        return range(len(self.labels))

    @property
    def exact(self) -> bool:
        return self._exact

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise MalformedInputError(f"Unknown point label: {label!r}")

    def indices(self, labels: Iterable[str]) -> List[int]:
        return [self.index(label) for label in labels]

    def d(self, i: int, j: int) -> Number:
        return self.dist[i][j]

    def distance(self, a: str, b: str) -> Number:
        return self.dist[self.index(a)][self.index(b)]

    def array(self):
        """Таблица расстояний как numpy массив (dtype=object для Fraction)"""
        return as_array(self.dist)

    def pairs(self) -> Iterable[Tuple[int, int]]:
        """Неупорядоченные пары различных точек"""
        n = self.size
        for i in range(n):
            for j in range(i + 1, n):
                yield i, j

    @property
    def diameter(self) -> Number:
        return max((self.dist[i][j] for i, j in self.pairs()), default=self.zero)

    @property
    def min_positive_distance(self) -> Number:
        """δ: точный минимум положительных расстояний (inf для одноточечного)"""
        return min((self.dist[i][j] for i, j in self.pairs()), default=INF)

    @property
    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    def ball(self, center: int, radius: Number) -> FrozenSet[int]:
        """Открытый шар B(x, r) = {y : d(x, y) < r}"""
        row = self.dist[center]
        return frozenset(j for j in self.points if row[j] < radius)

    def set_distance(self, a: Iterable[int], b: Iterable[int]) -> Number:
        """Расстояние между множествами; inf если одно из них пусто"""
        b = list(b)
        return min((self.dist[i][j] for i in a for j in b), default=INF)

    def set_diameter(self, subset: Iterable[int]) -> Number:
        items = sorted(subset)
        return max(
            (self.dist[items[i]][items[j]] for i in range(len(items)) for j in range(i + 1, len(items))),
            default=self.zero
        )

    def point_to_set(self, x: int, subset: Iterable[int]) -> Number:
        """dist(x, A), inf для пустого A"""
        row = self.dist[x]
        return min((row[j] for j in subset), default=INF)


class VectorPoint(BaseModel):
    """Точка ℝⁿ с метрикой l₁ или l₂"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coords: Tuple[NumberValue, ...] = Field(..., description="Координаты")
    norm: NormTag = Field(NormTag.L1, description="Метрика")
    dimension: Optional[int] = Field(None, ge=1, description="Объявленная размерность n")

    @model_validator(mode="after")
    def validate_dimension(self):
        if self.dimension is not None and len(self.coords) != self.dimension:
            raise MalformedInputError(
                f"Vector has {len(self.coords)} coordinates, declared dimension {self.dimension}"
            )
        return self


class ScaleParams(BaseModel):
    """Параметры функторов min(d, ε) и max(d, ε)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    epsilon: NumberValue = Field(..., description="ε функторов")
    delta: NumberValue = Field(..., description="δ дискретности/ограниченности")

    @field_validator("epsilon", "delta")
    @classmethod
    def validate_positive(cls, v):
        """Проверка положительного значения"""
        if not v > 0:
            raise ValueError("Значение должно быть больше нуля")
        return v
