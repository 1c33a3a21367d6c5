"""
Сервис продолжений в сферы и вписанных покрытий

Обе стороны эквивалентности «сфера S^m является липшицевым экстензором»
и «покрытия из m+2 элементов допускают вписанные покрытия кратности m+1»,
подъём кратности, хирургия нерва и цепные компоненты для размерности 0.
"""

from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, FrozenSet, List, Sequence, Tuple

import structlog

from nagata.core.errors import InvalidParameterError, MalformedInputError, OutsideBodyError, PreconditionError
from nagata.core.logging import log_check, log_pipeline_event
from nagata.core.numeric import Number, leq, parse_number, safe_ratio, tolerance_for
from nagata.models.cover import Cover, FamilyDecomposition, Refinement, nonempty
from nagata.models.maps import PartialMap, TargetKind, TargetSpec
from nagata.models.metric import FiniteMetricSpace
from nagata.models.schemas import (
    CheckResult,
    DimZeroReport,
    DimZeroScale,
    ExtensionResult,
    RefinementResult,
    SurgeryResult,
)
from nagata.services import covers, extension, metric_core, nerve
from nagata.services.union_find import UnionFind

if TYPE_CHECKING:
    from nagata.services.oracles import RefinementOracle, SphereExtensionOracle

logger = structlog.get_logger(__name__)

ONE_THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


def beta(z: Number) -> Number:
    """Срезка: 0 до 1/3, 3z − 1 на [1/3, 2/3], 1 после 2/3"""
    if z <= ONE_THIRD:
        return Fraction(0) if isinstance(z, Fraction) else 0.0
    if z >= TWO_THIRDS:
        return Fraction(1) if isinstance(z, Fraction) else 1.0
    return 3 * z - 1


def refinement_shrink_factor(C: Number, m: int) -> Number:
    """t = 1 / (4C(m+2)²(m+1))"""
    return 1 / (4 * C * (m + 2) ** 2 * (m + 1))


def extension_constant_from_refinement(s: Number, t: Number, m: int) -> Number:
    """C = 50(m+2)²s + 150s²(m+2)⁵/t"""
    return 50 * (m + 2) ** 2 * s + 150 * s ** 2 * (m + 2) ** 5 / t


def _zero_coordinate(weights: Sequence[Number], tol: float) -> bool:
    return any(abs(w) <= tol for w in weights)


def on_boundary(weights: Sequence[Number]) -> bool:
    """Точка лежит на ∂Δ: неотрицательна, сумма 1 и есть нулевая координата"""
    tol = tolerance_for(*weights)
    return (
        all(w >= -tol for w in weights)
        and abs(sum(weights) - 1) <= tol * len(weights)
        and _zero_coordinate(weights, tol)
    )


def _same_point(u: Sequence[Number], v: Sequence[Number]) -> bool:
    tol = tolerance_for(*u, *v)
    return all(abs(a - b) <= tol for a, b in zip(u, v))


def refinement_from_extension(
    oracle: "SphereExtensionOracle",
    cover: Cover,
    r: Any,
    force: bool = False
) -> RefinementResult:
    """
    Вписанное покрытие из оракула продолжений в ∂Δ^{m+1}

    φ: барицентрическое отображение покрытия из m+2 элементов,
    оракул продолжает φ с φ⁻¹(∂Δ) на X, V_i = {g_i > 0}.
    """
    m = len(cover.elements) - 2
    if m < 0:
        raise PreconditionError("Cover needs at least two elements")
    if oracle.m != m:
        raise PreconditionError(
            f"Oracle extends into S^{oracle.m}, cover needs S^{m}",
            {"oracle_m": oracle.m, "cover_elements": len(cover.elements)}
        )
    r = parse_number(r)
    if not r > 0:
        raise InvalidParameterError(f"r must be positive, got {r}")

    space = cover.space
    cover_profile = covers.lebesgue_profile(cover)
    lam = 4 * (m + 2) ** 2 / r
    lebesgue_ok = leq(r, cover_profile.lebesgue)
    window_ok = oracle.in_window(lam)
    if not force:
        if not lebesgue_ok:
            raise PreconditionError(
                "Cover is not r-Lebesgue",
                {"r": str(r), "lebesgue": str(cover_profile.lebesgue)}
            )
        if not window_ok:
            raise PreconditionError(
                "r lies outside the oracle window 4(m+2)^2/lambda2 < r < 4(m+2)^2/lambda1",
                {"lambda": str(lam), "window": [str(w) for w in oracle.window]}
            )
    enforced = lebesgue_ok and window_ok

    phi = nerve.barycentric_map(cover, oracle.norm)
    boundary = [x for x, w in phi.items() if _zero_coordinate(w, tolerance_for(*w))]
    zero, one = (Fraction(0), Fraction(1)) if space.exact else (0.0, 1.0)

    if boundary:
        f = PartialMap(
            space=space,
            domain=tuple(boundary),
            target=TargetSpec.simplex(m + 2, oracle.norm, boundary=True),
            values=tuple(phi(x) for x in boundary),
        )
        lam_eff = max(lam, metric_core.lipschitz_constant(f))
        g = oracle.extend(f.with_lambda(lam_eff), lam_eff)
    else:
        # все U_i равны X, φ нигде не попадает на границу
        lam_eff = lam
        vertex = tuple(one if i == 0 else zero for i in range(m + 2))
        g = PartialMap(
            space=space,
            domain=tuple(space.points),
            target=TargetSpec.simplex(m + 2, oracle.norm, boundary=True),
            values=tuple(vertex for _ in space.points),
        )

    g_lip, g_witness = metric_core.lipschitz_witness(g)
    tol = tolerance_for(*(w for value in g.values for w in value))
    v_sets = [frozenset(x for x in space.points if g(x)[i] > tol) for i in range(m + 2)]
    kept, parents = nonempty(v_sets)
    refinement = Refinement(
        cover=Cover(space=space, elements=tuple(kept)),
        parent=tuple(parents),
        refined=cover,
    )
    profile = covers.lebesgue_profile(refinement.cover)
    t = refinement_shrink_factor(oracle.C, m)

    mismatched = [x for x in boundary if not _same_point(g(x), phi(x))]
    off_boundary = [x for x in space.points if not on_boundary(g(x))]
    checks = [
        CheckResult.that(
            "extension_restriction", "g agrees with phi on phi^-1(boundary)",
            not mismatched, witness=mismatched[:1] or None
        ),
        CheckResult.that(
            "extension_boundary", "g maps into the boundary sphere",
            not off_boundary, witness=off_boundary[:1] or None
        ),
        CheckResult.at_most(
            "extension_lipschitz", "g is C*lambda-Lipschitz",
            g_lip, oracle.C * lam_eff, enforced=enforced, witness=g_witness
        ),
        CheckResult.that(
            "refines", "V refines U with V_i inside U_i",
            refinement.is_consistent() and covers.refines(refinement.cover, cover)
        ),
        CheckResult.at_most(
            "multiplicity", "multiplicity of V is at most m+1",
            profile.multiplicity, m + 1
        ),
        CheckResult.at_least(
            "lebesgue", "V is t*r-Lebesgue with t = 1/(4C(m+2)^2(m+1))",
            profile.lebesgue, t * r, enforced=enforced
        ),
    ]
    for check in checks:
        log_check(logger, check, construction="refinement_from_extension")

    log_pipeline_event(
        logger, "Refinement from extension built",
        m=m, r=str(r), lam=str(lam_eff), boundary_points=len(boundary),
        lebesgue=str(profile.lebesgue), multiplicity=profile.multiplicity
    )
    return RefinementResult(
        refinement=refinement,
        profile=profile,
        t=t,
        details={
            "lambda": lam_eff,
            "boundary_points": len(boundary),
            "measured_lip_g": g_lip,
            "in_window": window_ok,
        },
        checks=checks,
    )


def extension_from_refinement(
    oracle: "RefinementOracle",
    f: PartialMap,
    lam: Any = None,
    force: bool = False,
    strict: bool = False
) -> ExtensionResult:
    """
    Продолжение f: A → ∂Δ^{m+1} на X через оракул вписанных покрытий

    g: продолжение в Δ^{m+1}, α = (m+2)·min g_i, ψ_i = g_i − α/(m+2),
    U_i = {ψ_i > 0 или α > 2/3}, V вписано в U оракулом, φ: его
    барицентрическое отображение и
    h = Σ ψ_i·(1 − β(α))/(1 − α)·e_i + Σ β(α)·φ_i·e_i.
    """
    if f.target.kind not in (TargetKind.SIMPLEX, TargetKind.SIMPLEX_BOUNDARY):
        raise MalformedInputError("Sphere extension needs a simplex valued map")
    k = f.target.coords
    m = k - 2
    if m < 0:
        raise PreconditionError("Boundary sphere needs at least two vertices")
    outside = [x for x, w in f.items() if not on_boundary(w)]
    if outside:
        raise OutsideBodyError(
            "Map values lie outside the boundary sphere",
            {"points": [f.space.labels[x] for x in outside]}
        )

    space = f.space
    norm = f.target.norm
    target = TargetSpec.simplex(k, norm, boundary=True)
    s = extension.extension_constant(k, norm)
    lam_eff, measured_on_a, warnings = extension.effective_lambda(f, lam, strict)

    if lam_eff == 0:
        # постоянное f продолжается константой
        value = f.values[0]
        h = PartialMap(
            space=space, domain=tuple(space.points), target=target,
            values=tuple(value for _ in space.points), lam=lam_eff,
        )
        checks = [
            CheckResult.that("restriction", "h agrees with f on A", True),
            CheckResult.that("boundary", "h maps into the boundary sphere", True),
        ]
        return ExtensionResult(
            map=h, lam_effective=lam_eff, measured_lip=lam_eff, bound=lam_eff,
            warnings=warnings, details={"oracle_called": False}, checks=checks,
        )

    r = 1 / (12 * s * lam_eff * (m + 2))
    window_ok = oracle.in_window(r)
    if not window_ok and not force:
        raise PreconditionError(
            "lambda lies outside 1/(12*s*r2*(m+2)) < lambda < 1/(12*s*r1*(m+2))",
            {"lambda": str(lam_eff), "r": str(r), "window": [str(w) for w in oracle.window]}
        )

    simplex_f = PartialMap(
        space=space, domain=f.domain, target=TargetSpec.simplex(k, norm),
        values=f.values, lam=lam_eff,
    )
    g_result = extension.extend_into_convex(simplex_f, lam_eff)
    g = g_result.map

    alphas: List[Number] = []
    psis: List[List[Number]] = []
    for x in space.points:
        low = min(g(x))
        alphas.append((m + 2) * low)
        psis.append([gi - low for gi in g(x)])
    tol = tolerance_for(*alphas, *(p for row in psis for p in row))

    u_sets = [
        frozenset(x for x in space.points if psis[x][i] > tol or alphas[x] > TWO_THIRDS)
        for i in range(k)
    ]
    u_kept, u_index = nonempty(u_sets)
    u_cover = Cover(space=space, elements=tuple(u_kept))
    u_profile = covers.lebesgue_profile(u_cover)
    betas = [beta(a) for a in alphas]

    zero = Fraction(0) if all(isinstance(a, Fraction) for a in alphas) else 0.0
    phi = [[zero] * k for _ in space.points]
    oracle_checks: List[CheckResult] = []
    oracle_called = any(b > 0 for b in betas)
    if oracle_called:
        refinement = oracle.refine(u_cover, r)
        oracle_checks = oracle.verify(u_cover, r, refinement, enforced=window_ok)
        weights = nerve.barycentric_weights(refinement.cover)
        for x in space.points:
            for j, w in enumerate(weights[x]):
                phi[x][u_index[refinement.parent[j]]] += w

    values = []
    impossible = []
    for x in space.points:
        a, b = alphas[x], betas[x]
        factor = (1 - b) / (1 - a) if b < 1 else zero
        if 0 < b < 1 and all(p > tol for p in psis[x]):
            impossible.append(x)
        values.append(tuple(psis[x][i] * factor + b * phi[x][i] for i in range(k)))

    h = PartialMap(space=space, domain=tuple(space.points), target=target, values=tuple(values), lam=lam_eff)
    measured, witness = metric_core.lipschitz_witness(h)
    C = extension_constant_from_refinement(s, oracle.t, m)

    mismatched = [a for a in f.domain if not _same_point(h(a), f(a))]
    off_boundary = [x for x in space.points if not on_boundary(h(x))]
    checks = [
        CheckResult.that(
            "restriction", "h agrees with f on A",
            not mismatched, witness=mismatched[:1] or None
        ),
        CheckResult.that(
            "boundary", "h maps into the boundary sphere",
            not off_boundary, witness=off_boundary[:1] or None
        ),
        CheckResult.that(
            "impossible_branch", "no point has all g_i - alpha/(m+2) > 0 with 0 < beta < 1",
            not impossible, witness=impossible[:1] or None
        ),
        CheckResult.at_least(
            "internal_lebesgue", "L(U) >= 1/(12*s*lambda*(m+2))",
            u_profile.lebesgue, r
        ),
        CheckResult.at_most(
            "lipschitz", "h is (50(m+2)^2 s + 150 s^2 (m+2)^5 / t)*lambda-Lipschitz",
            measured, C * lam_eff, enforced=window_ok, witness=witness
        ),
    ]
    checks.extend(
        check.model_copy(update={"name": f"oracle_{check.name}"}) for check in oracle_checks
    )
    for check in checks:
        log_check(logger, check, construction="extension_from_refinement")

    log_pipeline_event(
        logger, "Extension from refinement built",
        m=m, lam=str(lam_eff), r=str(r), s=str(s), C=str(C),
        oracle_called=oracle_called, measured=str(measured)
    )
    return ExtensionResult(
        map=h,
        lam_effective=lam_eff,
        measured_lip=measured,
        bound=C * lam_eff,
        warnings=warnings,
        details={
            "r": r,
            "s": s,
            "t": oracle.t,
            "C": C,
            "alpha_max": max(alphas),
            "u_elements": len(u_kept),
            "u_lebesgue": u_profile.lebesgue,
            "oracle_called": oracle_called,
            "in_window": window_ok,
            "measured_lip_g": g_result.measured_lip,
        },
        checks=checks,
    )


def lift_refinement(
    oracle: "RefinementOracle",
    w_cover: Cover,
    s: Any,
    force: bool = False
) -> RefinementResult:
    """
    Покрытие W из n+3 элементов → вписанное покрытие кратности не больше n+2

    A: объединение шаров B(x, s/2), для которых B(x, s) не лежит в W_{n+2};
    оракул уровня n вписывает U'_i = (W_i ∩ A) ∪ (X∖A), след на A
    вместе с W_{n+2} даёт ответ.
    """
    if len(w_cover.elements) < 2:
        raise PreconditionError("Cover needs at least two elements")
    s = parse_number(s)
    if not s > 0:
        raise InvalidParameterError(f"s must be positive, got {s}")

    space = w_cover.space
    last = len(w_cover.elements) - 1
    w_last = w_cover.elements[last]
    w_profile = covers.lebesgue_profile(w_cover)
    lebesgue_ok = leq(s, w_profile.lebesgue)
    window_ok = oracle.in_window(s / 4)
    if not force:
        if not lebesgue_ok:
            raise PreconditionError(
                "Cover is not s-Lebesgue",
                {"s": str(s), "lebesgue": str(w_profile.lebesgue)}
            )
        if not window_ok:
            raise PreconditionError(
                "s lies outside 4*r1 < s < 4*r2",
                {"s": str(s), "window": [str(w) for w in oracle.window]}
            )
    enforced = lebesgue_ok and window_ok

    centers = [x for x in space.points if not space.ball(x, s) <= w_last]
    a_set = frozenset().union(*(space.ball(x, s / 2) for x in centers)) if centers else frozenset()
    outside = frozenset(space.points) - a_set
    t = oracle.t / 4
    checks: List[CheckResult] = []
    details: Dict[str, Any] = {"A": len(a_set), "in_window": window_ok}

    if not a_set:
        elements, parents = [w_last], [last]
    else:
        u_prime = [(w_cover.elements[i] & a_set) | outside for i in range(last)]
        kept, index = nonempty(u_prime)
        u_cover = Cover(space=space, elements=tuple(kept))
        u_profile = covers.lebesgue_profile(u_cover)
        checks.append(CheckResult.at_least(
            "extended_lebesgue", "U' = (W_i & A) | (X - A) is s/4-Lebesgue",
            u_profile.lebesgue, s / 4, enforced=lebesgue_ok
        ))
        inner = oracle.refine(u_cover, s / 4)
        checks.extend(
            check.model_copy(update={"name": f"oracle_{check.name}"})
            for check in oracle.verify(u_cover, s / 4, inner, enforced=enforced)
        )
        traced = [v & a_set for v in inner.cover.elements]
        elements = [v for v in traced if v]
        parents = [index[p] for v, p in zip(traced, inner.parent) if v]
        elements.append(w_last)
        parents.append(last)
        details["oracle_elements"] = len(inner.cover.elements)

    refinement = Refinement(
        cover=Cover(space=space, elements=tuple(elements)),
        parent=tuple(parents),
        refined=w_cover,
    )
    profile = covers.lebesgue_profile(refinement.cover)
    checks.extend([
        CheckResult.that(
            "refines", "W' refines W with W'_i inside W_i",
            refinement.is_consistent()
        ),
        CheckResult.at_most(
            "multiplicity", "multiplicity of W' is at most n+2",
            profile.multiplicity, len(w_cover.elements) - 1
        ),
        CheckResult.at_least(
            "lebesgue", "W' is t*s-Lebesgue",
            profile.lebesgue, t * s, enforced=enforced
        ),
    ])
    for check in checks:
        log_check(logger, check, construction="lift_refinement")

    log_pipeline_event(
        logger, "Multiplicity lifted",
        elements=len(w_cover.elements), s=str(s), A=len(a_set),
        lebesgue=str(profile.lebesgue), multiplicity=profile.multiplicity
    )
    return RefinementResult(refinement=refinement, profile=profile, t=t, details=details, checks=checks)


def nerve_surgery_refine(
    ext: "SphereExtensionOracle",
    decomp: FamilyDecomposition,
    shrink: Any = None,
    force: bool = False
) -> SurgeryResult:
    """
    Хирургия нерва: из оракула продолжений в S^n и разбиения на n+2 семейства
    строится покрытие кратности не больше n+1

    Для каждого (n+1)-симплекса Δ нерва отображение f|f⁻¹(∂Δ)
    продолжается на f⁻¹(Δ) со значениями в ∂Δ, продолжения склеиваются
    в g, ответ: прообразы звёзд вершин при g.
    """
    n = decomp.k - 2
    if n < 0:
        raise PreconditionError("Surgery needs a decomposition with at least two families")
    if ext.m != n:
        raise PreconditionError(
            f"Oracle extends into S^{ext.m}, decomposition needs S^{n}",
            {"oracle_m": ext.m, "families": decomp.k}
        )

    space = decomp.space
    conversion = covers.lebesgue_conversion(decomp, shrink)
    u_cover = conversion.cover
    r_eff = conversion.radius
    c = safe_ratio(conversion.profile.mesh, r_eff)
    size = len(u_cover.elements)

    f = nerve.barycentric_map(u_cover, ext.norm)
    f_lip = metric_core.lipschitz_constant(f)
    nerve_complex = nerve.build_nerve(u_cover)
    top = nerve_complex.top_simplices(n + 2)
    lam_declared = 4 * (n + 2) ** 2 / r_eff

    supports = [_support(f(x)) for x in space.points]
    pasted: Dict[int, Tuple[Number, ...]] = {}
    inconsistent: List[int] = []
    window_ok = True
    cells = 0

    for simplex in top:
        vertices = sorted(simplex)
        interior = [x for x in space.points if supports[x] == simplex]
        if not interior:
            continue
        cells += 1
        rim = [x for x in space.points if supports[x] < simplex]
        if not rim:
            vertex = vertices[0]
            for x in interior:
                pasted[x] = _embed({0: f(x)[0] * 0 + 1}, [vertex], size, f(x))
            continue

        cell_labels = [space.labels[x] for x in sorted(rim + interior)]
        cell = metric_core.subspace(space, cell_labels)
        local = {cell.index(space.labels[x]): x for x in rim + interior}
        rim_set = frozenset(rim)
        rim_local = sorted(i for i, x in local.items() if x in rim_set)
        local_f = PartialMap(
            space=cell,
            domain=tuple(rim_local),
            target=TargetSpec.simplex(n + 2, ext.norm, boundary=True),
            values=tuple(tuple(f(local[i])[v] for v in vertices) for i in rim_local),
        )
        lam = max(lam_declared, metric_core.lipschitz_constant(local_f))
        if not ext.in_window(lam):
            if not force:
                raise PreconditionError(
                    "Cell Lipschitz constant lies outside the oracle window",
                    {"lambda": str(lam), "window": [str(w) for w in ext.window]}
                )
            window_ok = False
        g_local = ext.extend(local_f.with_lambda(lam), lam)

        for i, x in local.items():
            value = _embed(dict(enumerate(g_local(i))), vertices, size, f(x))
            if x in rim_set:
                if not _same_point(value, f(x)):
                    inconsistent.append(x)
            else:
                pasted[x] = value

    g = PartialMap(
        space=space,
        domain=tuple(space.points),
        target=TargetSpec.simplex(size, ext.norm),
        values=tuple(pasted.get(x, f(x)) for x in space.points),
    )
    g_lip = metric_core.lipschitz_constant(g)
    cover = nerve.star_preimages(g)
    profile = covers.lebesgue_profile(cover)
    d = r_eff / (4 * ext.C * (n + 3) ** 3)
    enforced = window_ok

    checks = [
        CheckResult.that(
            "pasting_consistent", "extensions agree with f on shared faces",
            not inconsistent, witness=inconsistent[:1] or None
        ),
        CheckResult.at_most(
            "multiplicity", "multiplicity of the star preimage cover is at most n+1",
            profile.multiplicity, n + 1
        ),
        CheckResult.at_least(
            "lebesgue", "Lebesgue number is at least d = r/(4k(n+3)^3)",
            profile.lebesgue, d, enforced=enforced
        ),
        CheckResult.at_most(
            "mesh", "mesh is at most 16*c*k*(n+3)^3*d = 4*c*r",
            profile.mesh, 4 * c * r_eff
        ),
    ]
    for check in checks:
        log_check(logger, check, construction="nerve_surgery")

    log_pipeline_event(
        logger, "Nerve surgery finished",
        n=n, r=str(r_eff), c=str(c), cells=cells, top_simplices=len(top),
        lip_f=str(f_lip), lip_g=str(g_lip), d=str(d),
        lebesgue=str(profile.lebesgue), mesh=str(profile.mesh)
    )
    return SurgeryResult(
        cover=cover,
        profile=profile,
        details={
            "r": r_eff,
            "c": c,
            "d": d,
            "k": ext.C,
            "cells": cells,
            "top_simplices": len(top),
            "lip_f": f_lip,
            "lip_f_declared": lam_declared,
            "lip_g": g_lip,
            "in_window": window_ok,
        },
        checks=checks,
    )


def _support(weights: Sequence[Number]) -> FrozenSet[int]:
    tol = tolerance_for(*weights)
    return frozenset(i for i, w in enumerate(weights) if w > tol)


def _embed(
    local: Dict[int, Number],
    vertices: Sequence[int],
    size: int,
    like: Sequence[Number]
) -> Tuple[Number, ...]:
    """Координаты грани в координатах всего нерва"""
    zero = like[0] * 0
    full = [zero] * size
    for i, value in local.items():
        full[vertices[i]] = value
    return tuple(full)


def chain_components(space: FiniteMetricSpace, r: Any, strict: bool = False) -> List[FrozenSet[int]]:
    """
    Классы эквивалентности r-цепей

    strict=False: соседние точки цепи на расстоянии ≤ r,
    strict=True: на расстоянии < r.
    """
    r = parse_number(r)
    if not r > 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    uf = UnionFind()
    for x in space.points:
        uf.find(x)
    for x, y in space.pairs():
        d = space.d(x, y)
        if (d < r) if strict else (d <= r):
            uf.union(x, y)
    return uf.components()


def component_diameters(space: FiniteMetricSpace, components: Sequence[FrozenSet[int]]) -> List[Number]:
    return [space.set_diameter(c) for c in components]


def dim_zero_certificate(
    space: FiniteMetricSpace,
    C: Any,
    scales: Sequence[Any],
    strict: bool = False
) -> DimZeroReport:
    """
    Проверка размерности 0: на каждом масштабе все r-цепные
    компоненты имеют диаметр не больше C·r
    """
    C = parse_number(C)
    if not C > 1:
        raise InvalidParameterError(f"C must exceed 1, got {C}")
    rows: List[DimZeroScale] = []
    checks: List[CheckResult] = []
    for raw in scales:
        r = parse_number(raw)
        components = chain_components(space, r, strict)
        diameters = component_diameters(space, components)
        worst = max(range(len(components)), key=lambda i: diameters[i])
        bounded = all(leq(d, C * r) for d in diameters)
        witness = None if bounded else sorted(components[worst])
        rows.append(DimZeroScale(
            r=r,
            components=len(components),
            max_diameter=diameters[worst],
            components_bounded=bounded,
            witness=witness,
        ))
        checks.append(CheckResult.at_most(
            f"components_bounded@{r}", "every r-chain component has diameter at most C*r",
            diameters[worst], C * r, witness=witness
        ))
    for check in checks:
        log_check(logger, check, construction="dim_zero")
    logger.info(
        "Dimension zero certificate computed",
        scales=len(rows),
        bounded=all(row.components_bounded for row in rows),
        strict=strict
    )
    return DimZeroReport(C=C, strict=strict, scales=rows, checks=checks)
