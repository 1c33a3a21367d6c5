"""
Оракулы для конструкций со сферами

RefinementOracle вписывает в r-лебегово покрытие покрытие кратности
не больше m+1 с числом Лебега t·r, SphereExtensionOracle продолжает
C·λ-липшицево отображение A → ∂Δ^{m+1} на всё пространство.
Оба работают в открытом окне параметров.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import structlog

from nagata.core.errors import NagataError, OracleRefusalError, PreconditionError
from nagata.core.numeric import INF, Number, leq, parse_number, safe_ratio
from nagata.models.cover import Cover, Refinement
from nagata.models.maps import PartialMap, TargetSpec
from nagata.models.metric import NormTag
from nagata.models.schemas import CheckResult
from nagata.services import covers, dimension, extension, metric_core, sphere_ext

logger = structlog.get_logger(__name__)

Window = Tuple[Number, Number]


def _window(window: Optional[Tuple[Any, Any]]) -> Window:
    if window is None:
        return Fraction(0), INF
    lo, hi = (parse_number(w) for w in window)
    if not 0 <= lo < hi:
        raise PreconditionError(f"Window must satisfy 0 <= lower < upper, got ({lo}, {hi})")
    return lo, hi


class RefinementOracle(ABC):
    """Вписанные покрытия кратности не больше multiplicity с числом Лебега t·r"""

    name = "refinement"

    def __init__(self, t: Any, window: Optional[Tuple[Any, Any]] = None, multiplicity: Optional[int] = None):
        self.t = parse_number(t)
        self.window = _window(window)
        self.multiplicity = multiplicity

    def in_window(self, r: Number) -> bool:
        lo, hi = self.window
        return lo < r < hi

    @abstractmethod
    def refine(self, cover: Cover, r: Number) -> Refinement:
        ...

    def __call__(self, cover: Cover, r: Number) -> Refinement:
        return self.refine(cover, r)

    def verify(
        self,
        cover: Cover,
        r: Number,
        refinement: Refinement,
        enforced: bool = True
    ) -> List[CheckResult]:
        """Контракт оракула на конкретном ответе"""
        profile = covers.lebesgue_profile(refinement.cover)
        checks = [
            CheckResult.that(
                "refines", "oracle output refines the cover",
                refinement.is_consistent() and covers.refines(refinement.cover, cover)
            ),
            CheckResult.at_least(
                "lebesgue", "oracle output is t*r-Lebesgue",
                profile.lebesgue, self.t * r, enforced=enforced
            ),
        ]
        if self.multiplicity is not None:
            checks.append(CheckResult.at_most(
                "multiplicity", "oracle output multiplicity is bounded",
                profile.multiplicity, self.multiplicity
            ))
        return checks

    def describe(self) -> dict:
        return {
            "oracle": self.name,
            "t": self.t,
            "window": list(self.window),
            "multiplicity": self.multiplicity,
        }


class FixedCoverRefinementOracle(RefinementOracle):
    """
    Фиксированное покрытие W, склеенное по элементам входного покрытия

    Если mesh(W) < r ≤ L(U), каждый элемент W лежит в элементе U;
    склейка сохраняет L(W) и кратность W, поэтому t = L(W)/r₂.
    На подпространствах используется след W.
    """

    name = "fixed_cover"

    def __init__(self, fixed: Cover, upper: Any = None):
        profile = covers.lebesgue_profile(fixed)
        if upper is None:
            upper = 2 * max(profile.mesh, fixed.space.diameter) + 1
        upper = parse_number(upper)
        t = min(safe_ratio(profile.lebesgue, upper), Fraction(1, 2))
        super().__init__(t, (profile.mesh, upper), profile.multiplicity)
        self.fixed = fixed

    @classmethod
    def singletons(cls, space, upper: Any = None) -> "FixedCoverRefinementOracle":
        return cls(Cover.singletons(space), upper)

    def _fixed_on(self, cover: Cover) -> Cover:
        if cover.space.labels == self.fixed.space.labels:
            return self.fixed
        if not set(cover.space.labels) <= set(self.fixed.space.labels):
            raise OracleRefusalError("Cover lives outside the space of the fixed cover")
        return covers.restrict_cover(self.fixed, cover.space.labels)

    def refine(self, cover: Cover, r: Number) -> Refinement:
        fixed = self._fixed_on(cover)
        try:
            return covers.refinement_by_merging(fixed, cover)
        except PreconditionError as e:
            raise OracleRefusalError(
                "Fixed cover does not refine the input cover",
                {"r": str(r), **e.details}
            )


class DecompositionRefinementOracle(RefinementOracle):
    """
    Разбиение на n+1 семейство на масштабе ρ = r/(C+2σ+1), покрытие
    σρ-окрестностями и склейка по элементам входного покрытия

    mesh ≤ (C+2σ)ρ < r, число Лебега ≥ σρ, откуда t = σ/(C+2σ+1).
    """

    name = "decomposition"

    def __init__(self, C: Any, n: int, shrink: Any = None, window: Optional[Tuple[Any, Any]] = None):
        C = parse_number(C)
        sigma = covers._shrink_fraction(shrink)
        self.C = C
        self.n = n
        self.sigma = sigma
        self.denominator = C + 2 * sigma + 1
        super().__init__(sigma / self.denominator, window, n + 1)

    def refine(self, cover: Cover, r: Number) -> Refinement:
        rho = r / self.denominator
        search = dimension.find_decomposition(cover.space, rho, self.C, self.n)
        if not search.found:
            raise OracleRefusalError(
                f"No decomposition into {self.n + 1} families at scale {rho}",
                {"rho": str(rho), "status": search.status.value}
            )
        neighborhoods = covers.decomposition_to_lebesgue_cover(search.decomposition, self.sigma)
        try:
            return covers.refinement_by_merging(neighborhoods, cover)
        except PreconditionError as e:
            raise OracleRefusalError("Neighborhood cover does not refine the input cover", e.details)


class ShrinkingRefinementOracle(RefinementOracle):
    """Жадное сжатие до заданной кратности с отказом, если число Лебега меньше t·r"""

    name = "shrinking"

    def __init__(self, multiplicity: int, t: Any, window: Optional[Tuple[Any, Any]] = None):
        super().__init__(t, window, multiplicity)

    def refine(self, cover: Cover, r: Number) -> Refinement:
        refinement = covers.shrink_to_multiplicity(cover, self.multiplicity)
        lebesgue = covers.lebesgue_number(refinement.cover)
        if not leq(self.t * r, lebesgue):
            raise OracleRefusalError(
                "Shrunk cover is not t*r-Lebesgue",
                {"lebesgue": str(lebesgue), "required": str(self.t * r)}
            )
        return refinement


class LiftedRefinementOracle(RefinementOracle):
    """Оракул уровня n+1 из оракула уровня n: окно (4r₁, 4r₂), t/4"""

    name = "lifted"

    def __init__(self, base: RefinementOracle):
        lo, hi = base.window
        multiplicity = None if base.multiplicity is None else base.multiplicity + 1
        super().__init__(base.t / 4, (4 * lo, 4 * hi), multiplicity)
        self.base = base

    def refine(self, cover: Cover, r: Number) -> Refinement:
        try:
            result = sphere_ext.lift_refinement(self.base, cover, r)
        except PreconditionError as e:
            raise OracleRefusalError(e.message, e.details)
        if not result.all_passed:
            raise OracleRefusalError(
                "Lifted refinement failed its checks",
                {"checks": [c.name for c in result.failures()]}
            )
        return result.refinement


class SphereExtensionOracle(ABC):
    """Продолжения в ∂Δ^{m+1} с константой C·λ для λ из окна"""

    name = "sphere"

    def __init__(self, m: int, C: Any, window: Optional[Tuple[Any, Any]] = None, norm: NormTag = NormTag.L1):
        if m < 0:
            raise PreconditionError(f"Sphere dimension must be non-negative, got {m}")
        self.m = m
        self.C = parse_number(C)
        self.window = _window(window)
        self.norm = NormTag(norm)

    def in_window(self, lam: Number) -> bool:
        lo, hi = self.window
        return lo < lam < hi

    @abstractmethod
    def extend(self, f: PartialMap, lam: Number) -> PartialMap:
        ...

    def __call__(self, f: PartialMap, lam: Number) -> PartialMap:
        return self.extend(f, lam)

    def verify(self, f: PartialMap, lam: Number, g: PartialMap) -> List[CheckResult]:
        measured, witness = metric_core.lipschitz_witness(g)
        return [
            CheckResult.that(
                "restriction", "extension agrees with f on A",
                all(sphere_ext._same_point(g(a), f(a)) for a in f.domain)
            ),
            CheckResult.that(
                "boundary", "extension maps into the boundary sphere",
                all(sphere_ext.on_boundary(g(x)) for x in g.space.points)
            ),
            CheckResult.at_most(
                "lipschitz", "extension is C*lambda-Lipschitz",
                measured, self.C * lam, witness=witness
            ),
        ]

    def describe(self) -> dict:
        return {"oracle": self.name, "m": self.m, "C": self.C, "window": list(self.window)}


class ConstructiveSphereOracle(SphereExtensionOracle):
    """
    Продолжения в сферу, построенные по оракулу вписанных покрытий

    C = 50(m+2)²s + 150s²(m+2)⁵/t, окно по λ:
    1/(12·s·r₂·(m+2)) < λ < 1/(12·s·r₁·(m+2)).
    """

    name = "constructive"

    def __init__(self, refinement_oracle: RefinementOracle, m: int, norm: NormTag = NormTag.L1):
        s = extension.extension_constant(m + 2, norm)
        C = sphere_ext.extension_constant_from_refinement(s, refinement_oracle.t, m)
        r1, r2 = refinement_oracle.window
        scale = 12 * s * (m + 2)
        window = (safe_ratio(1, scale * r2), safe_ratio(1, scale * r1))
        super().__init__(m, C, window, norm)
        self.refinement_oracle = refinement_oracle
        self.s = s

    def extend(self, f: PartialMap, lam: Number) -> PartialMap:
        try:
            result = sphere_ext.extension_from_refinement(self.refinement_oracle, f, lam)
        except (PreconditionError, OracleRefusalError) as e:
            raise OracleRefusalError(e.message, e.details)
        if not result.all_passed:
            raise OracleRefusalError(
                "Constructed extension failed its checks",
                {"checks": [c.name for c in result.failures()]}
            )
        return result.map


class NearestPointSphereOracle(SphereExtensionOracle):
    """
    Значение в ближайшей точке A (при равенстве расстояний точка
    с меньшим индексом)

    Константа не гарантирована: оракул отказывается, если измеренная
    константа больше C·λ.
    """

    name = "nearest_point"

    def extend(self, f: PartialMap, lam: Number) -> PartialMap:
        space = f.space
        fixed = dict(f.items())
        values = []
        for x in space.points:
            if x in fixed:
                values.append(fixed[x])
            else:
                nearest = min(f.domain, key=lambda a: (space.d(x, a), a))
                values.append(fixed[nearest])
        g = PartialMap(
            space=space,
            domain=tuple(space.points),
            target=TargetSpec.simplex(self.m + 2, self.norm, boundary=True),
            values=tuple(values),
            lam=lam,
        )
        measured = metric_core.lipschitz_constant(g)
        if not leq(measured, self.C * lam):
            raise OracleRefusalError(
                "Nearest point extension exceeds C*lambda",
                {"measured": str(measured), "bound": str(self.C * lam)}
            )
        return g


def build_refinement_oracle(kind: str, space=None, **params: Any) -> RefinementOracle:
    """
    Оракул по имени: fixed_cover (singletons), decomposition, shrinking

    window задаёт окно масштабов, например (M, inf) для крупных
    масштабов или (0, M) для мелких; fixed_cover вычисляет окно сам.
    """
    if kind == "fixed_cover":
        if space is None:
            raise PreconditionError("fixed_cover oracle needs a space")
        return FixedCoverRefinementOracle.singletons(space, params.get("upper"))
    if kind == "decomposition":
        return DecompositionRefinementOracle(
            params.get("C", 2), params.get("n", 0), params.get("shrink"), params.get("window")
        )
    if kind == "shrinking":
        return ShrinkingRefinementOracle(
            params.get("multiplicity", 1), params.get("t", Fraction(1, 16)), params.get("window")
        )
    raise NagataError(f"Unknown refinement oracle: {kind}")
