"""
Сервис липшицевых продолжений

Продолжение МакШейна вещественных функций, продолжение Уитни (sup-форма),
покоординатное продолжение в ℝⁿ с ретракцией на выпуклое тело.
"""

from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from nagata.core.errors import DishonestLipschitzError, MalformedInputError, OutsideBodyError
from nagata.core.logging import log_check
from nagata.core.numeric import Number, all_exact, leq, parse_number, sqrt, tolerance_for
from nagata.models.maps import ConvexBody, PartialMap, SimplexPoint, TargetKind, TargetSpec
from nagata.models.metric import FiniteMetricSpace, NormTag, VectorPoint
from nagata.models.schemas import CheckResult, ExtensionResult
from nagata.services import metric_core

logger = structlog.get_logger(__name__)


def extension_constant(n: int, norm: NormTag) -> Number:
    """Константа продолжения в выпуклое тело ℝⁿ: √n для l₂, n² для l₁"""
    if n < 1:
        raise MalformedInputError(f"Dimension must be positive, got {n}")
    if NormTag(norm) == NormTag.L2:
        return sqrt(Fraction(n))
    return Fraction(n * n)


def effective_lambda(
    f: PartialMap,
    lam: Any = None,
    strict: bool = False
) -> Tuple[Number, Number, List[str]]:
    """
    λ_eff = max(заявленная, измеренная на A)

    В строгом режиме заниженная заявленная константа является ошибкой.
    """
    measured = metric_core.lipschitz_constant(f)
    declared = f.lam if lam is None else parse_number(lam)
    warnings: List[str] = []
    if declared is None:
        return measured, measured, warnings
    if not leq(measured, declared):
        if strict:
            raise DishonestLipschitzError(
                f"Declared Lipschitz constant {declared} is below the measured {measured}",
                {"declared": str(declared), "measured": str(measured)}
            )
        warnings.append(f"declared lambda {declared} below measured {measured}; using measured")
        logger.warning(
            "Dishonest Lipschitz constant",
            declared=str(declared),
            measured=str(measured)
        )
        return measured, measured, warnings
    return declared, measured, warnings


def mcshane_values(
    space: FiniteMetricSpace,
    domain: Sequence[int],
    values: Sequence[Number],
    lam: Number
) -> List[Number]:
    """f̃(x) = min_{a∈A} (f(a) + λ·d(x, a)), на A значения f без изменений"""
    fixed = dict(zip(domain, values))
    result = []
    for x in space.points:
        if x in fixed:
            result.append(fixed[x])
        else:
            result.append(min(v + lam * space.d(x, a) for a, v in zip(domain, values)))
    return result


def whitney_values(
    space: FiniteMetricSpace,
    domain: Sequence[int],
    values: Sequence[Number],
    lam: Number
) -> List[Number]:
    """f̃(x) = max_{a∈A} (f(a) − λ·d(x, a))"""
    fixed = dict(zip(domain, values))
    result = []
    for x in space.points:
        if x in fixed:
            result.append(fixed[x])
        else:
            result.append(max(v - lam * space.d(x, a) for a, v in zip(domain, values)))
    return result


def _require_real(f: PartialMap) -> None:
    if f.target.kind != TargetKind.REAL:
        raise MalformedInputError("Scalar extension needs a real-valued map")


def _scalar_extension(f: PartialMap, lam: Any, strict: bool, formula) -> ExtensionResult:
    _require_real(f)
    lam_eff, measured_on_a, warnings = effective_lambda(f, lam, strict)
    values = formula(f.space, f.domain, f.values, lam_eff)
    total = PartialMap(
        space=f.space,
        domain=tuple(f.space.points),
        target=f.target,
        values=tuple(values),
        lam=lam_eff,
    )
    measured, witness = metric_core.lipschitz_witness(total)
    restriction = [a for a in f.domain if total(a) != f(a)]
    checks = [
        CheckResult.that(
            "restriction", "extension agrees with f on A",
            not restriction, witness=restriction[:1] or None
        ),
        CheckResult.at_most(
            "lipschitz", "extension is lambda-Lipschitz",
            measured, lam_eff, witness=witness
        ),
    ]
    for check in checks:
        log_check(logger, check)
    return ExtensionResult(
        map=total,
        lam_effective=lam_eff,
        measured_lip=measured,
        bound=lam_eff,
        warnings=warnings,
        details={"measured_on_domain": measured_on_a},
        checks=checks,
    )


def mcshane_extend(f: PartialMap, lam: Any = None, strict: bool = False) -> ExtensionResult:
    """Продолжение МакШейна вещественной функции с A на X"""
    result = _scalar_extension(f, lam, strict, mcshane_values)
    logger.info(
        "McShane extension built",
        domain=len(f.domain),
        points=f.space.size,
        lam=str(result.lam_effective),
        measured=str(result.measured_lip)
    )
    return result


def whitney_extend(f: PartialMap, lam: Any = None, strict: bool = False) -> ExtensionResult:
    """Продолжение через sup-форму; другое, но тоже λ-липшицево продолжение"""
    return _scalar_extension(f, lam, strict, whitney_values)


def project_to_simplex(v: Any, n: Optional[int] = None, norm: NormTag = NormTag.L1) -> SimplexPoint:
    """
    Ближайшая в l₂ точка стандартного симплекса

    Сортировка по убыванию и порог θ; для рациональных входов
    результат точный.
    """
    coords = v.coords if isinstance(v, VectorPoint) else tuple(parse_number(c) for c in v)
    if n is not None and len(coords) != n:
        raise MalformedInputError(f"Vector has {len(coords)} coordinates, simplex needs {n}")
    if not coords:
        raise MalformedInputError("Cannot project an empty vector")

    exact = all_exact(coords)
    y = np.asarray(coords, dtype=object if exact else float)
    u = np.sort(y)[::-1]
    u_cumsum = np.cumsum(u)
    one = Fraction(1) if exact else 1.0

    # rho = max{j : u_j − (Σ_{i≤j} u_i − 1)/j > 0}
    rho = 0
    for j in range(len(u)):
        if u[j] - (u_cumsum[j] - one) / (j + 1) > 0:
            rho = j
    theta = (u_cumsum[rho] - one) / (rho + 1)
    zero = Fraction(0) if exact else 0.0
    weights = [max(c - theta, zero) for c in y]

    if not exact:
        # нормировка против ошибок округления
        total = sum(weights)
        weights = [w / total for w in weights]
    return SimplexPoint(weights=tuple(weights), norm=norm)


def project_to_box(v: Sequence[Number], lower: Number, upper: Number) -> Tuple[Number, ...]:
    """Покоординатная проекция на куб [lower, upper]ⁿ"""
    return tuple(min(max(c, lower), upper) for c in v)


def in_body(value: Sequence[Number], body: ConvexBody) -> bool:
    tol = tolerance_for(*value)
    if body.kind == "box":
        return all(body.lower - tol <= c <= body.upper + tol for c in value)
    return all(c >= -tol for c in value) and abs(sum(value) - 1) <= tol * len(value)


def _retract(value: Sequence[Number], body: ConvexBody, norm: NormTag) -> Tuple[Number, ...]:
    if body.kind == "box":
        return project_to_box(value, body.lower, body.upper)
    return project_to_simplex(value, norm=norm).weights


def extend_into_convex(
    f: PartialMap,
    lam: Any = None,
    body: Optional[ConvexBody] = None,
    strict: bool = False
) -> ExtensionResult:
    """
    Продолжение в выпуклое тело: МакШейн по координатам, затем ретракция

    Гарантированные оценки: √n·λ для l₂ и n²·λ для l₁.
    Значения на A сохраняются точно.
    """
    if f.target.kind not in (TargetKind.VECTOR, TargetKind.SIMPLEX, TargetKind.SIMPLEX_BOUNDARY):
        raise MalformedInputError("Convex extension needs a vector or simplex valued map")
    body = body or ConvexBody.simplex()
    n = f.target.coords
    norm = f.target.norm

    outside = [x for x, value in f.items() if not in_body(value, body)]
    if outside:
        raise OutsideBodyError(
            "Map values lie outside the convex body",
            {"points": [f.space.labels[x] for x in outside]}
        )

    lam_eff, measured_on_a, warnings = effective_lambda(f, lam, strict)
    columns = [
        mcshane_values(f.space, f.domain, [value[i] for value in f.values], lam_eff)
        for i in range(n)
    ]
    fixed = dict(f.items())
    values = []
    for x in f.space.points:
        if x in fixed:
            values.append(tuple(fixed[x]))
        else:
            values.append(_retract([columns[i][x] for i in range(n)], body, norm))

    target_kind = TargetKind.VECTOR if f.target.kind == TargetKind.VECTOR else TargetKind.SIMPLEX
    total = PartialMap(
        space=f.space,
        domain=tuple(f.space.points),
        target=TargetSpec(kind=target_kind, coords=n, norm=norm),
        values=tuple(values),
        lam=lam_eff,
    )
    measured, witness = metric_core.lipschitz_witness(total)
    s = extension_constant(n, norm)
    bound = s * lam_eff

    restriction = [a for a in f.domain if tuple(total(a)) != tuple(f(a))]
    escaped = [x for x, value in total.items() if not in_body(value, body)]
    checks = [
        CheckResult.that(
            "restriction", "extension agrees with f on A",
            not restriction, witness=restriction[:1] or None
        ),
        CheckResult.that(
            "inside_body", "image lies in the convex body",
            not escaped, witness=escaped[:1] or None
        ),
        CheckResult.at_most(
            "lipschitz",
            "extension is sqrt(n)*lambda-Lipschitz" if norm == NormTag.L2
            else "extension is n^2*lambda-Lipschitz",
            measured, bound, witness=witness
        ),
    ]
    if norm == NormTag.L1:
        checks.append(CheckResult.at_most(
            "lipschitz_n32", "extension is n^(3/2)*lambda-Lipschitz",
            measured, n * sqrt(Fraction(n)) * lam_eff, enforced=False, witness=witness
        ))
    for check in checks:
        log_check(logger, check, norm=norm.value)

    logger.info(
        "Convex extension built",
        coords=n,
        norm=norm.value,
        body=body.kind,
        lam=str(lam_eff),
        measured=str(measured),
        bound=str(bound)
    )
    return ExtensionResult(
        map=total,
        lam_effective=lam_eff,
        measured_lip=measured,
        bound=bound,
        warnings=warnings,
        details={"measured_on_domain": measured_on_a, "s": s},
        checks=checks,
    )
