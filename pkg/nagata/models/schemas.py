"""
Pydantic схемы отчётов: проверки неравенств, результаты конструкций, отчёт CLI
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from nagata.core.errors import BoundViolationError
from nagata.core.numeric import leq
from nagata.models.cover import Cover, CoverTower, FamilyDecomposition, LebesgueProfile, Refinement
from nagata.models.maps import PartialMap
from nagata.models.metric import FiniteMetricSpace, NormTag


class CheckResult(BaseModel):
    """
    Результат проверки одного неравенства

    claim содержит формулировку проверяемого утверждения,
    enforced=False означает, что проверка только измеряет
    (например, вне окна масштабов в режиме --force).
    """

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {
                "name": "multiplicity",
                "claim": "multiplicity of V is at most m+1",
                "measured": 2,
                "bound": 2,
                "holds": True,
                "enforced": True,
                "witness": None
            }
        }
    )

    name: str = Field(..., description="Короткое имя проверки")
    claim: str = Field(..., description="Проверяемое утверждение")
    measured: Any = Field(None, description="Измеренное значение")
    bound: Any = Field(None, description="Граница")
    holds: bool = Field(..., description="Выполнено ли неравенство")
    enforced: bool = Field(True, description="Влияет ли провал на код возврата")
    witness: Any = Field(None, description="Свидетель нарушения")

    @classmethod
    def at_most(cls, name: str, claim: str, measured, bound, enforced: bool = True, witness=None) -> "CheckResult":
        return cls(
            name=name, claim=claim, measured=measured, bound=bound,
            holds=leq(measured, bound), enforced=enforced,
            witness=None if leq(measured, bound) else witness
        )

    @classmethod
    def at_least(cls, name: str, claim: str, measured, bound, enforced: bool = True, witness=None) -> "CheckResult":
        return cls(
            name=name, claim=claim, measured=measured, bound=bound,
            holds=leq(bound, measured), enforced=enforced,
            witness=None if leq(bound, measured) else witness
        )

    @classmethod
    def that(cls, name: str, claim: str, holds: bool, enforced: bool = True, witness=None) -> "CheckResult":
        return cls(
            name=name, claim=claim, measured=holds, bound=True,
            holds=bool(holds), enforced=enforced, witness=None if holds else witness
        )

    @property
    def failed(self) -> bool:
        return self.enforced and not self.holds


class CheckedResult(BaseModel):
    """Базовый класс результатов, несущих список проверок"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    checks: List[CheckResult] = Field(default_factory=list, description="Проверки неравенств")

    @property
    def all_passed(self) -> bool:
        return not any(check.failed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if check.failed]

    def check(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def raise_for_failures(self) -> None:
        failed = self.failures()
        if failed:
            raise BoundViolationError(
                f"{len(failed)} enforced checks failed: {', '.join(c.name for c in failed)}",
                {"checks": [c.name for c in failed]}
            )


class DecompositionReport(BaseModel):
    """Результат проверки разбиения на r-дизъюнктные семейства"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    is_valid: bool = Field(..., description="Все семейства r-дизъюнктны")
    violating_pair: Optional[Tuple[int, int]] = Field(None, description="Пара элементов одного семейства ближе r")
    violating_distance: Any = Field(None, description="Расстояние нарушающей пары")
    mesh: Any = Field(..., description="Максимальный диаметр элемента")
    bound_ratio: Any = Field(..., description="mesh / r (эмпирическое C)")


class ConversionReport(CheckedResult):
    """Переход от разбиения к покрытию Лебега"""

    cover: Cover = Field(..., description="Покрытие окрестностями")
    profile: LebesgueProfile = Field(..., description="Профиль полученного покрытия")
    radius: Any = Field(..., description="Радиус окрестностей σ·r")


class BarycentricBoundReport(CheckedResult):
    """
    Проверка оценки Lip(φ) ≤ 4m²/L

    stated_bound использует кратность 1 + |T(x)|, open_bound
    использует обычную кратность; оба значения пишутся в отчёт.
    """

    norm: NormTag = Field(..., description="Метрика симплекса")
    measured_lip: Any = Field(..., description="Измеренная константа Липшица φ")
    lebesgue: Any = Field(..., description="L(U)")
    multiplicity: int = Field(..., description="Обычная кратность")
    multiplicity_plus_one: int = Field(..., description="Кратность 1 + |T(x)|")
    stated_bound: Any = Field(None, description="4·m²/L с кратностью 1 + |T(x)|")
    open_bound: Any = Field(None, description="4·m²/L с обычной кратностью")
    holds: bool = Field(..., description="measured_lip ≤ stated_bound")
    open_holds: bool = Field(..., description="measured_lip ≤ open_bound")
    witness: Optional[Tuple[int, int]] = Field(None, description="Пара с наибольшим отношением")


class ExtensionResult(CheckedResult):
    """Результат продолжения отображения на всё пространство"""

    map: PartialMap = Field(..., description="Тотальное отображение")
    lam_effective: Any = Field(..., description="Использованная константа Липшица")
    measured_lip: Any = Field(..., description="Измеренная константа продолжения")
    bound: Any = Field(None, description="Гарантированная граница константы")
    warnings: List[str] = Field(default_factory=list, description="Предупреждения")
    details: Dict[str, Any] = Field(default_factory=dict, description="Промежуточные величины")


class RefinementResult(CheckedResult):
    """Результат вписывания покрытия"""

    refinement: Refinement = Field(..., description="Вписанное покрытие с родителями")
    profile: LebesgueProfile = Field(..., description="Профиль вписанного покрытия")
    t: Any = Field(..., description="Гарантированный коэффициент сжатия")
    details: Dict[str, Any] = Field(default_factory=dict, description="Промежуточные величины")

    @property
    def cover(self) -> Cover:
        return self.refinement.cover


class SurgeryResult(CheckedResult):
    """Результат хирургии нерва"""

    cover: Cover = Field(..., description="Покрытие прообразами звёзд")
    profile: LebesgueProfile = Field(..., description="Профиль покрытия")
    details: Dict[str, Any] = Field(default_factory=dict, description="Промежуточные величины")


class DimZeroScale(BaseModel):
    """Проверка компонент цепей на одном масштабе"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: Any = Field(..., description="Масштаб")
    components: int = Field(..., description="Число компонент")
    max_diameter: Any = Field(..., description="Максимальный диаметр компоненты")
    components_bounded: bool = Field(..., description="Все диаметры ≤ C·r")
    witness: Optional[List[int]] = Field(None, description="Компонента диаметра больше C·r")


class DimZeroReport(CheckedResult):
    """Сертификат размерности ноль по списку масштабов"""

    C: Any = Field(..., description="Константа C")
    strict: bool = Field(..., description="Строгие цепи (шаг < r)")
    scales: List[DimZeroScale] = Field(default_factory=list, description="Результаты по масштабам")

    @property
    def bounded(self) -> bool:
        return all(s.components_bounded for s in self.scales)


class SearchStatus(str, Enum):
    """Статус поиска разбиения"""
    FOUND = "found"
    IMPOSSIBLE = "impossible"
    UNKNOWN = "unknown"


class DecompositionSearch(BaseModel):
    """Результат поиска разбиения на масштабе r"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: SearchStatus = Field(..., description="found, impossible или unknown")
    exact: bool = Field(..., description="Результат точного перебора")
    r: Any = Field(..., description="Масштаб")
    n: int = Field(..., description="Проверяемая размерность")
    decomposition: Optional[FamilyDecomposition] = Field(None, description="Найденное разбиение")

    @property
    def found(self) -> bool:
        return self.status == SearchStatus.FOUND


class ScaleWitness(BaseModel):
    """Результат оценки размерности на одном масштабе"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: Any = Field(..., description="Масштаб")
    n_lower: int = Field(..., description="Нижняя оценка на этом масштабе")
    n_upper: Optional[int] = Field(None, description="Верхняя оценка (None если разбиение не найдено)")
    exact: bool = Field(..., description="Оценка точная")
    witness: Optional[FamilyDecomposition] = Field(None, description="Разбиение для n_upper")


class DimensionReport(BaseModel):
    """Оценка размерности Нагаты-Ассуада по диапазону масштабов"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    C: Any = Field(..., description="Константа C")
    mode: str = Field(..., description="full, macro или micro")
    M: Any = Field(None, description="Порог режима")
    scales: List[Any] = Field(default_factory=list, description="Масштабы в рабочей области режима")
    n_lower: int = Field(..., description="Нижняя оценка размерности")
    n_upper: Optional[int] = Field(None, description="Верхняя оценка размерности")
    per_scale: List[ScaleWitness] = Field(default_factory=list, description="Свидетели по масштабам")

    @property
    def exact(self) -> bool:
        return self.n_upper is not None and self.n_lower == self.n_upper

    @property
    def n_exact(self) -> Optional[int]:
        return self.n_lower if self.exact else None


class CharacterizationResult(BaseModel):
    """Результат перехода между формами определения размерности"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    direction: str = Field(..., description="1->2, 2->3 или 3->1")
    cover: Optional[Cover] = Field(None, description="Покрытие (формы 2 и 3)")
    decomposition: Optional[FamilyDecomposition] = Field(None, description="Разбиение (форма 1)")
    constants: Dict[str, Any] = Field(default_factory=dict, description="Измеренные константы")


class FunctorDimensionReport(CheckedResult):
    """Сравнение размерности в режиме macro/micro и на преобразованной метрике"""

    mode: str = Field(..., description="macro или micro")
    M: Any = Field(..., description="Порог")
    original: DimensionReport = Field(..., description="Размерность (X, d) в режиме")
    transformed: DimensionReport = Field(..., description="Размерность преобразованного пространства")
    transformed_space: FiniteMetricSpace = Field(..., description="(X, max(d,M)) или (X, min(d,M))")


class UnionReport(BaseModel):
    """Измерения для объединения двух подпространств"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    part_a: DimensionReport
    part_b: DimensionReport
    union: DimensionReport
    agrees: Optional[bool] = Field(None, description="Совпадает ли D(A∪B) с max(D(A), D(B)), если всё точно")


class TowerReport(CheckedResult):
    """Башня покрытий и измеренные условия на уровнях"""

    tower: CoverTower = Field(..., description="Башня")
    profiles: List[LebesgueProfile] = Field(default_factory=list, description="Профили уровней")
    dropped_scales: List[Any] = Field(default_factory=list, description="Масштабы, отброшенные из-за условия зазора")


class HyperbolicReport(CheckedResult):
    """Гиперболичность метрики d_h по четырёхточечному условию"""

    basepoint: int = Field(..., description="Базовая точка x₀")
    products: Tuple[Tuple[Any, ...], ...] = Field(..., description="Произведения Громова (x|y)")
    delta_measured: Any = Field(..., description="max по тройкам min((x|y),(y|z)) − (x|z)")
    side_defect: Any = Field(..., description="max по тройкам (наибольшая сторона − вторая)")
    boundary_defect: Any = Field(..., description="max по парам min(d(x,x₀), d(y,x₀)) − 2 − 2(x|y)")
    delta_witness: Optional[Tuple[int, int, int]] = Field(None, description="Тройка с наибольшим дефектом")
    side_witness: Optional[Tuple[int, int, int]] = Field(None, description="Тройка с наибольшей разностью сторон")


class CoarseRow(BaseModel):
    """Строка таблицы грубой эквивалентности для уровня i"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    level: int
    mesh: Any
    lebesgue: Any
    upper_violations: int = Field(..., description="Пары с d_h ≤ i и d > mesh(U_i)")
    lower_violations: int = Field(..., description="Пары с d < L(U_i) и d_h > i")
    witness: Optional[Tuple[int, int]] = None


class CoarseEquivalenceReport(CheckedResult):
    """Таблица монотонных функций контроля d через d_h и обратно"""

    rows: List[CoarseRow] = Field(default_factory=list)


class ScaleCoverRow(BaseModel):
    """Покрытие (X, d_h) на масштабе r"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: Any
    level: int = Field(..., description="Уровень башни (0 для одноточечных множеств)")
    mesh: Any
    lebesgue: Any
    multiplicity: int


class ScaleCoverReport(CheckedResult):
    """Сохранение размерности при переходе к (X, d_h)"""

    rows: List[ScaleCoverRow] = Field(default_factory=list)


class SuiteReport(CheckedResult):
    """Итог прогона свойств на случайном корпусе: одна проверка на критерий"""

    seed: int = Field(..., description="Зерно корпуса")
    scale: float = Field(1.0, description="Множитель числа экземпляров")
    instances: Dict[str, int] = Field(default_factory=dict, description="Проверенные экземпляры по критериям")
    skipped: Dict[str, int] = Field(default_factory=dict, description="Экземпляры без выполненных предусловий")


class RunReport(BaseModel):
    """
    Отчёт одного запуска CLI

    Без REPORT_TIMING поле wall_time отсутствует, и отчёт
    полностью определяется входными данными и зерном.
    """

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "command": "validate",
                "argv": ["validate", "--space", "space.json"],
                "input_digests": {"space": "sha256:..."},
                "seed": 0,
                "exact": True,
                "passed": True,
                "checks": [],
                "result": {"violations": []}
            }
        }
    )

    command: str = Field(..., description="Подкоманда")
    argv: List[str] = Field(..., description="Аргументы командной строки")
    input_digests: Dict[str, str] = Field(default_factory=dict, description="sha256 входных файлов")
    seed: int = Field(..., description="Зерно генераторов")
    exact: bool = Field(..., description="Числа выводятся как p/q")
    passed: bool = Field(..., description="Все обязательные проверки выполнены")
    checks: List[Dict[str, Any]] = Field(default_factory=list, description="Проверки")
    result: Dict[str, Any] = Field(default_factory=dict, description="Результат команды")
    wall_time: Optional[float] = Field(None, description="Время выполнения, секунды")
