"""
Pydantic модели покрытий, разбиений на семейства и башен покрытий
"""

from typing import Any, FrozenSet, Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nagata.core.errors import InvalidParameterError, MalformedInputError
from nagata.core.numeric import NumberValue
from nagata.models.metric import FiniteMetricSpace


class Cover(BaseModel):
    """
    Покрытие конечного пространства индексированными непустыми подмножествами

    Элементы хранятся как множества индексов точек пространства.
    """

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={"example": {"elements": [["0", "1", "2"], ["1", "2", "3"]]}}
    )

    space: FiniteMetricSpace = Field(..., description="Покрываемое пространство")
    elements: Tuple[FrozenSet[int], ...] = Field(..., description="Элементы U_s")

    @model_validator(mode="after")
    def validate_cover(self):
        """Элементы непусты, индексы корректны, объединение равно всему пространству"""
        n = self.space.size
        if not self.elements:
            raise MalformedInputError("Cover has no elements")
        covered = set()
        for s, element in enumerate(self.elements):
            if not element:
                raise MalformedInputError(f"Cover element {s} is empty")
            if any(not 0 <= x < n for x in element):
                raise MalformedInputError(f"Cover element {s} references unknown points")
            covered |= element
        if len(covered) != n:
            missing = [self.space.labels[x] for x in self.space.points if x not in covered]
            raise MalformedInputError("Cover does not cover the space", {"uncovered": missing})
        return self

    @classmethod
    def from_labels(cls, space: FiniteMetricSpace, elements: Iterable[Iterable[str]]) -> "Cover":
        return cls(space=space, elements=tuple(frozenset(space.indices(e)) for e in elements))

    @classmethod
    def from_sets(cls, space: FiniteMetricSpace, elements: Iterable[Iterable[int]]) -> "Cover":
        return cls(space=space, elements=tuple(frozenset(e) for e in elements))

    @classmethod
    def whole(cls, space: FiniteMetricSpace) -> "Cover":
        return cls(space=space, elements=(frozenset(space.points),))

    @classmethod
    def singletons(cls, space: FiniteMetricSpace) -> "Cover":
        return cls(space=space, elements=tuple(frozenset([x]) for x in space.points))

    def __len__(self) -> int:
        return len(self.elements)

    def labelled(self) -> List[List[str]]:
        return [[self.space.labels[x] for x in sorted(e)] for e in self.elements]

    def containing(self, x: int) -> List[int]:
        """Индексы элементов, содержащих точку x"""
        return [s for s, e in enumerate(self.elements) if x in e]


class FamilyDecomposition(BaseModel):
    """
    Покрытие, разбитое на k семейств (кандидат на r-дизъюнктность)

    Дизъюнктность не проверяется при создании: нарушения сообщает
    covers.check_decomposition.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cover: Cover = Field(..., description="Покрытие")
    family_of: Tuple[int, ...] = Field(..., description="Номер семейства каждого элемента")
    r: NumberValue = Field(..., description="Масштаб дизъюнктности")
    k: int = Field(..., ge=1, description="Объявленное число семейств")

    @model_validator(mode="after")
    def validate_families(self):
        if len(self.family_of) != len(self.cover.elements):
            raise MalformedInputError("family_of must assign every cover element")
        if any(not 0 <= f < self.k for f in self.family_of):
            raise MalformedInputError(f"Family indices must lie in [0, {self.k})")
        if not self.r > 0:
            raise InvalidParameterError("Disjointness scale r must be positive")
        return self

    @property
    def space(self) -> FiniteMetricSpace:
        return self.cover.space

    def families(self) -> List[List[int]]:
        groups: List[List[int]] = [[] for _ in range(self.k)]
        for s, f in enumerate(self.family_of):
            groups[f].append(s)
        return groups


class LebesgueProfile(BaseModel):
    """Локальные и глобальные числа Лебега, mesh и обе кратности"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    local: Tuple[Any, ...] = Field(..., description="L_U(x) для каждой точки")
    lebesgue: Any = Field(..., description="Глобальное число Лебега L(U)")
    mesh: Any = Field(..., description="Максимальный диаметр элемента")
    multiplicity_local: Tuple[int, ...] = Field(..., description="|{s : f_s(x) > 0}|")
    multiplicity: int = Field(..., description="Максимум multiplicity_local")
    multiplicity_plus_one_local: Tuple[int, ...] = Field(..., description="1 + |T(x)|")
    multiplicity_plus_one: int = Field(..., description="Максимум multiplicity_plus_one_local")


class Refinement(BaseModel):
    """
    Вписанное покрытие с индексами родителей: V_j ⊆ U_{parent[j]}

    Родители сохраняют соответствие координат с исходным покрытием,
    что нужно при склейке барицентрических отображений.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cover: Cover = Field(..., description="Вписанное покрытие V")
    parent: Tuple[int, ...] = Field(..., description="Индекс родителя для каждого элемента V")
    refined: Cover = Field(..., description="Исходное покрытие U")

    @model_validator(mode="after")
    def validate_parents(self):
        if len(self.parent) != len(self.cover.elements):
            raise MalformedInputError("Every refinement element needs a parent")
        if any(not 0 <= p < len(self.refined.elements) for p in self.parent):
            raise MalformedInputError("Parent index out of range")
        return self

    def is_consistent(self) -> bool:
        return all(
            v <= self.refined.elements[p] for v, p in zip(self.cover.elements, self.parent)
        )

    def grouped(self) -> List[FrozenSet[int]]:
        """Объединение элементов V по родителям, в индексации U (пустые множества допустимы)"""
        groups = [set() for _ in self.refined.elements]
        for v, p in zip(self.cover.elements, self.parent):
            groups[p] |= v
        return [frozenset(g) for g in groups]


class CoverTower(BaseModel):
    """Возрастающая последовательность покрытий U_1, ..., U_k одного пространства"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    levels: Tuple[Cover, ...] = Field(..., min_length=1, description="Уровни башни")
    n: int = Field(..., ge=0, description="Объявленная размерность")
    scales: Tuple[NumberValue, ...] = Field(default=(), description="Масштабы r_i уровней")

    @model_validator(mode="after")
    def validate_space(self):
        space = self.levels[0].space
        if any(level.space != space for level in self.levels):
            raise MalformedInputError("All tower levels must cover the same space")
        if self.scales and len(self.scales) != len(self.levels):
            raise MalformedInputError("Tower scales must match the number of levels")
        return self

    @property
    def space(self) -> FiniteMetricSpace:
        return self.levels[0].space

    @property
    def height(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> Cover:
        """Уровень с номером i, нумерация с единицы"""
        return self.levels[i - 1]


def as_frozensets(elements: Sequence[Iterable[int]]) -> Tuple[FrozenSet[int], ...]:
    return tuple(frozenset(e) for e in elements)


def nonempty(elements: Sequence[FrozenSet[int]]) -> Tuple[List[FrozenSet[int]], List[int]]:
    """Непустые элементы и их исходные индексы"""
    kept, index = [], []
    for s, e in enumerate(elements):
        if e:
            kept.append(e)
            index.append(s)
    return kept, index

