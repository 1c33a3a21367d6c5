"""
Pydantic модели частичных отображений, точек симплекса и нерва
"""

from enum import Enum
from typing import Any, Dict, FrozenSet, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from nagata.core.errors import MalformedInputError
from nagata.core.numeric import NumberValue, tolerance_for
from nagata.models.metric import FiniteMetricSpace, NormTag


class TargetKind(str, Enum):
    """Тип пространства значений"""
    REAL = "real"
    VECTOR = "vector"
    SIMPLEX = "simplex"
    SIMPLEX_BOUNDARY = "simplex_boundary"
    SPACE = "space"


class TargetSpec(BaseModel):
    """
    Пространство значений частичного отображения

    Для симплекса Δ^{m+1} поле coords равно m + 2 (число вершин),
    для ℝⁿ равно n.
    """

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={"example": {"kind": "simplex_boundary", "coords": 2, "norm": "l1"}}
    )

    kind: TargetKind = Field(..., description="Тип пространства значений")
    coords: Optional[int] = Field(None, ge=1, description="Число координат")
    norm: NormTag = Field(NormTag.L1, description="Метрика l1 или l2")
    space: Optional[FiniteMetricSpace] = Field(None, description="Конечное пространство значений")

    @model_validator(mode="after")
    def validate_kind(self):
        if self.kind in (TargetKind.VECTOR, TargetKind.SIMPLEX, TargetKind.SIMPLEX_BOUNDARY):
            if self.coords is None:
                raise MalformedInputError(f"Target {self.kind.value} needs a coordinate count")
        if self.kind == TargetKind.SPACE and self.space is None:
            raise MalformedInputError("Target space is missing")
        return self

    @classmethod
    def real(cls) -> "TargetSpec":
        return cls(kind=TargetKind.REAL)

    @classmethod
    def simplex(cls, coords: int, norm: NormTag = NormTag.L1, boundary: bool = False) -> "TargetSpec":
        kind = TargetKind.SIMPLEX_BOUNDARY if boundary else TargetKind.SIMPLEX
        return cls(kind=kind, coords=coords, norm=norm)

    @property
    def is_simplicial(self) -> bool:
        return self.kind in (TargetKind.SIMPLEX, TargetKind.SIMPLEX_BOUNDARY)


class PartialMap(BaseModel):
    """
    Отображение f: A → Y, A ⊆ X, с заявленной константой Липшица λ

    values выровнены с domain: values[k] есть образ точки domain[k].
    Для векторных и симплициальных целей значение: кортеж координат,
    для конечного пространства: индекс точки в нём.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: FiniteMetricSpace = Field(..., description="Пространство X")
    domain: Tuple[int, ...] = Field(..., min_length=1, description="Индексы точек A")
    target: TargetSpec = Field(..., description="Пространство значений")
    values: Tuple[Any, ...] = Field(..., description="Образы точек A")
    lam: Optional[NumberValue] = Field(None, description="Заявленная константа Липшица")

    _lookup: Dict[int, Any] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def validate_map(self):
        if len(self.values) != len(self.domain):
            raise MalformedInputError("Map values must align with its domain")
        if len(set(self.domain)) != len(self.domain):
            raise MalformedInputError("Map domain has repeated points")
        if any(not 0 <= x < self.space.size for x in self.domain):
            raise MalformedInputError("Map domain is not a subset of the space")
        if self.target.coords is not None and self.target.kind != TargetKind.REAL:
            if any(len(v) != self.target.coords for v in self.values):
                raise MalformedInputError(
                    f"Map values must have {self.target.coords} coordinates"
                )
        return self

    def model_post_init(self, __context: Any) -> None:
        self._lookup = dict(zip(self.domain, self.values))

    def __call__(self, x: int) -> Any:
        return self._lookup[x]

    def __contains__(self, x: int) -> bool:
        return x in self._lookup

    @property
    def is_total(self) -> bool:
        return len(self.domain) == self.space.size

    def items(self) -> List[Tuple[int, Any]]:
        return list(zip(self.domain, self.values))

    def restrict(self, subset) -> "PartialMap":
        keep = [x for x in self.domain if x in set(subset)]
        return PartialMap(
            space=self.space,
            domain=tuple(keep),
            target=self.target,
            values=tuple(self._lookup[x] for x in keep),
            lam=self.lam,
        )

    def with_lambda(self, lam) -> "PartialMap":
        return self.model_copy(update={"lam": lam})


class SimplexPoint(BaseModel):
    """Барицентрические координаты, индексированные элементами покрытия"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: Tuple[NumberValue, ...] = Field(..., min_length=1, description="Барицентрические координаты")
    norm: NormTag = Field(NormTag.L1, description="Метрика симплекса")

    @model_validator(mode="after")
    def validate_weights(self):
        """Веса неотрицательны и в сумме дают единицу"""
        tol = tolerance_for(*self.weights)
        if any(w < -tol for w in self.weights):
            raise MalformedInputError("Barycentric weights must be nonnegative")
        if abs(sum(self.weights) - 1) > tol * len(self.weights):
            raise MalformedInputError("Barycentric weights must sum to 1")
        return self

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, w in enumerate(self.weights) if w > 0)


class NerveComplex(BaseModel):
    """Нерв покрытия: вершина на элемент, симплекс на каждое пересекающееся подсемейство"""

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[int, ...] = Field(..., description="Вершины (индексы элементов покрытия)")
    simplices: Tuple[FrozenSet[int], ...] = Field(..., description="Все симплексы, замкнутые вниз")
    dimension: int = Field(..., ge=0, description="Максимальная размерность симплекса")

    def top_simplices(self, size: int) -> List[FrozenSet[int]]:
        """Симплексы с заданным числом вершин"""
        return [s for s in self.simplices if len(s) == size]

    def contains(self, simplex) -> bool:
        return frozenset(simplex) in set(self.simplices)


class ConvexBody(BaseModel):
    """Выпуклое тело для продолжений: стандартный симплекс или куб [lower, upper]ⁿ"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["simplex", "box"] = Field("simplex", description="Тип тела")
    lower: Optional[NumberValue] = Field(None, description="Нижняя граница куба")
    upper: Optional[NumberValue] = Field(None, description="Верхняя граница куба")

    @model_validator(mode="after")
    def validate_box(self):
        if self.kind == "box":
            if self.lower is None or self.upper is None or not self.lower <= self.upper:
                raise MalformedInputError("Box body needs lower <= upper")
        return self

    @classmethod
    def simplex(cls) -> "ConvexBody":
        return cls(kind="simplex")

    @classmethod
    def box(cls, lower, upper) -> "ConvexBody":
        return cls(kind="box", lower=lower, upper=upper)
