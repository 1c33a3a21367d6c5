"""
Прогон свойств на воспроизводимом случайном корпусе

Каждый критерий генерирует экземпляры из своего random.Random (зерно и имя критерия),
проверяет результаты конструкций и сводится к одной проверке
«число провалов не больше 0» со свидетелем первого провала.
Экземпляры, для которых не выполнены предусловия, пропускаются.
"""

import random
import time
from typing import Any, Callable, Dict, Iterable, List, Optional

import structlog

from nagata.core.config import settings
from nagata.core.errors import NagataError, PreconditionError, TowerConstructionError
from nagata.core.logging import log_check, log_pipeline_event
from nagata.core.numeric import INF, leq
from nagata.models.cover import Cover
from nagata.models.metric import FiniteMetricSpace, NormTag
from nagata.models.schemas import CheckedResult, CheckResult, SuiteReport
from nagata.services import (
    corpus,
    covers,
    dimension,
    extension,
    hyperbolic,
    metric_core,
    nerve,
    sphere_ext,
)
from nagata.services.oracles import (
    ConstructiveSphereOracle,
    DecompositionRefinementOracle,
    FixedCoverRefinementOracle,
)

logger = structlog.get_logger(__name__)

SUITE_SIZES: Dict[str, int] = {
    "mcshane": 500,
    "convex": 200,
    "barycentric": 300,
    "extension_loop": 100,
    "refinement_loop": 100,
    "lift": 100,
    "surgery": 30,
    "towers": 50,
    "dimension_coherence": 40,
    "dim_zero": 60,
}

CLAIMS: Dict[str, str] = {
    "mcshane": "McShane and sup-form extensions agree with f on A and stay lambda-Lipschitz",
    "convex": "convex extension stays in the simplex within sqrt(n)*lambda (l2) or n^2*lambda (l1)",
    "barycentric": "barycentric map is 4m(U)^2/L(U)-Lipschitz",
    "extension_loop": "sphere extension built from a refinement oracle meets every bound",
    "refinement_loop": "refinement built from a sphere extension oracle meets every bound",
    "lift": "lifted refinement has multiplicity at most n+2 and Lebesgue number t*s",
    "surgery": "nerve surgery gives multiplicity n+1 with the stated Lebesgue number and mesh",
    "towers": "tower, d_h metric, hyperbolicity and coarse tables pass",
    "dimension_coherence": "greedy implies exact, subspaces are monotone, witnesses transport, macro and micro functors agree",
    "dim_zero": "chain certificate agrees with the exact n = 0 search",
}


class _Tally:
    """Счётчик экземпляров и провалов одного критерия"""

    def __init__(self, name: str):
        self.name = name
        self.instances = 0
        self.failures = 0
        self.skipped = 0
        self.witness: Optional[Dict[str, Any]] = None

    def record(self, ok: bool, witness: Optional[Dict[str, Any]] = None) -> None:
        self.instances += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness
                logger.warning("Suite instance failed", criterion=self.name, witness=witness)

    def record_result(self, result: CheckedResult, space: FiniteMetricSpace, **context: Any) -> None:
        self.record(result.all_passed, _witness(space, result, **context))

    def skip(self) -> None:
        self.skipped += 1

    def check(self) -> CheckResult:
        return CheckResult.at_most(
            self.name, CLAIMS[self.name], self.failures, 0, witness=self.witness
        )


def _witness(space: FiniteMetricSpace, result: CheckedResult, **context: Any) -> Dict[str, Any]:
    return {
        "points": space.size,
        "labels": list(space.labels),
        "failed": [c.name for c in result.failures()],
        **context,
    }


def _guarded(tally: _Tally, space: FiniteMetricSpace, run: Callable[[], Iterable[CheckedResult]], **context: Any) -> None:
    """Предусловия → пропуск, прочие ошибки библиотеки → провал"""
    try:
        results = list(run())
    except PreconditionError:
        tally.skip()
        return
    except NagataError as e:
        tally.record(False, {"points": space.size, "labels": list(space.labels), "error": e.message, **context})
        return
    tally.record(
        all(r.all_passed for r in results),
        {
            "points": space.size,
            "labels": list(space.labels),
            "failed": [c.name for r in results for c in r.failures()],
            **context,
        },
    )


def _lebesgue_scale(cover: Cover) -> Any:
    """L(U), либо 1, если один из элементов равен X"""
    lebesgue = covers.lebesgue_number(cover)
    return 1 if lebesgue == INF else lebesgue


def _cover_with(space: FiniteMetricSpace, rng: random.Random, elements: int) -> Optional[Cover]:
    for _ in range(5):
        cover = corpus.random_cover(space, rng, elements)
        if len(cover.elements) == elements:
            return cover
    return None


def run_mcshane(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("mcshane")
    for _ in range(count):
        space = corpus.random_space(rng, 20)
        f = corpus.random_real_map(space, rng)
        for extend in (extension.mcshane_extend, extension.whitney_extend):
            tally.record_result(extend(f), space, construction=extend.__name__)
    return tally


def run_convex(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("convex")
    for _ in range(count):
        space = corpus.random_space(rng, 12)
        coords = rng.randint(2, 5)
        norm = rng.choice([NormTag.L1, NormTag.L2])
        f = corpus.random_simplex_map(space, rng, coords, norm)
        tally.record_result(extension.extend_into_convex(f), space, coords=coords, norm=norm.value)
    return tally


def run_barycentric(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("barycentric")
    open_failures = 0
    for _ in range(count):
        space = corpus.random_space(rng, 12)
        cover = corpus.random_cover(space, rng)
        report = nerve.verify_barycentric_bound(cover, rng.choice([NormTag.L1, NormTag.L2]))
        open_failures += not report.open_holds
        tally.record_result(report, space, elements=cover.labelled())
    logger.info("Multiplicity convention compared", instances=count, open_bound_failures=open_failures)
    return tally


def run_extension_loop(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("extension_loop")
    for i in range(count):
        space = corpus.random_space(rng, 10)
        m = rng.randint(0, 1)
        f = corpus.random_boundary_map(space, rng, m + 2)
        if i % 2:
            oracle = DecompositionRefinementOracle(4, m)
        else:
            oracle = FixedCoverRefinementOracle.singletons(space)
        _guarded(
            tally, space,
            lambda: [sphere_ext.extension_from_refinement(oracle, f)],
            m=m, oracle=oracle.name
        )
    return tally


def run_refinement_loop(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("refinement_loop")
    for _ in range(count):
        space = corpus.random_space(rng, 8)
        m = rng.randint(0, 1)
        cover = _cover_with(space, rng, m + 2)
        if cover is None:
            tally.skip()
            continue
        ext = ConstructiveSphereOracle(FixedCoverRefinementOracle.singletons(space), m)
        r = _lebesgue_scale(cover)
        _guarded(
            tally, space,
            lambda: [sphere_ext.refinement_from_extension(ext, cover, r)],
            m=m, r=str(r), elements=cover.labelled()
        )
    return tally


def run_lift(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("lift")
    for _ in range(count):
        space = corpus.random_space(rng, 10)
        cover = _cover_with(space, rng, 3)
        if cover is None:
            tally.skip()
            continue
        base = FixedCoverRefinementOracle.singletons(space)
        s = _lebesgue_scale(cover)
        _guarded(
            tally, space,
            lambda: [sphere_ext.lift_refinement(base, cover, s)],
            s=str(s), elements=cover.labelled()
        )
    return tally


def run_surgery(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("surgery")
    for i in range(count):
        if i % 2:
            space = corpus.tree_space(rng.randint(4, 12), rng)
        else:
            space = corpus.grid_space(3, rng.randint(2, 4))
        r = rng.choice([1, 2])
        search = dimension.find_decomposition(space, r, 3, 2)
        if not search.found or search.decomposition.k != 3:
            tally.skip()
            continue
        decomp = search.decomposition
        ext = ConstructiveSphereOracle(FixedCoverRefinementOracle.singletons(space), 1)
        _guarded(tally, space, lambda: [sphere_ext.nerve_surgery_refine(ext, decomp)], r=r)
    return tally


def _tower_space(rng: random.Random) -> FiniteMetricSpace:
    kind = rng.choice(["path", "grid", "tree"])
    if kind == "path":
        return corpus.path_space(rng.randint(2, 40))
    if kind == "grid":
        return corpus.grid_space(rng.randint(2, 6), rng.randint(2, 6))
    return corpus.tree_space(rng.randint(2, 40), rng)


def _tower_checks(space: FiniteMetricSpace) -> List[CheckedResult]:
    report = None
    for n in (1, 2, 3):
        try:
            report = hyperbolic.build_tower(space, n, 4)
            break
        except TowerConstructionError:
            continue
    if report is None:
        raise PreconditionError("No tower for n <= 3")
    tower = report.tower
    dh = hyperbolic.dh_metric(tower)
    labels = dh.labels if dh.size <= 16 else dh.labels[:3]
    results: List[CheckedResult] = [report]
    results.extend(hyperbolic.hyperbolicity_certificate(dh, label) for label in labels)
    results.append(hyperbolic.coarse_equivalence_profile(space, dh, tower))
    results.append(hyperbolic.dh_scale_covers(tower, dh))
    return results


def run_towers(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("towers")
    for _ in range(count):
        space = _tower_space(rng)
        _guarded(tally, space, lambda: _tower_checks(space))
    return tally


def _coherence_checks(space: FiniteMetricSpace, rng: random.Random) -> Dict[str, Any]:
    C = rng.choice([1, 2, 3])
    scales = dimension.default_scales(space)
    scales = sorted(rng.sample(scales, min(3, len(scales))))
    problems: List[str] = []

    for r in scales:
        for n in (0, 1, 2):
            greedy = dimension.find_decomposition(space, r, C, n, exact=False)
            if greedy.found and not dimension.find_decomposition(space, r, C, n, exact=True).found:
                problems.append(f"greedy_not_exact@r={r},n={n}")

    whole = dimension.scale_range_dimension(space, C, scales, exact=True)
    subset = corpus.random_subset(space, rng)
    sub = metric_core.subspace(space, [space.labels[x] for x in subset])
    part = dimension.scale_range_dimension(sub, C, scales, exact=True)
    if whole.exact and part.exact and part.n_exact > whole.n_exact:
        problems.append("subspace_monotone")

    eps = sorted(rng.sample(scales, min(2, len(scales))))
    first = metric_core.transform_max(space, eps[0])
    second = metric_core.transform_max(space, eps[-1])
    r = scales[-1]
    witness = dimension.scale_range_dimension(first, C, [r], exact=True).per_scale[0].witness
    if witness is not None:
        moved, C_moved = dimension.transport_decomposition(witness, second, C)
        report = covers.check_decomposition(moved)
        if not (report.is_valid and leq(report.mesh, C_moved * moved.r)):
            problems.append(f"transport@r={r}")

    M = rng.choice(dimension.default_scales(space))
    for functor in (dimension.macro_dimension, dimension.micro_dimension):
        report = functor(space, C, scales, M, exact=True)
        problems.extend(f"{check.name}@M={M}" for check in report.failures())
    return {"C": C, "scales": [str(s) for s in scales], "problems": problems}


def run_dimension_coherence(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("dimension_coherence")
    for _ in range(count):
        space = corpus.random_space(rng, settings.EXACT_THRESHOLD)
        if space.size < 2:
            tally.skip()
            continue
        outcome = _coherence_checks(space, rng)
        tally.record(not outcome["problems"], {"points": space.size, "labels": list(space.labels), **outcome})
    return tally


def run_dim_zero(rng: random.Random, count: int) -> _Tally:
    tally = _Tally("dim_zero")
    for _ in range(count):
        space = corpus.random_space(rng, settings.EXACT_THRESHOLD)
        scales = dimension.default_scales(space)
        if not scales:
            tally.skip()
            continue
        C = rng.choice([2, 3])
        certificate = sphere_ext.dim_zero_certificate(space, C, scales, strict=True)
        search = dimension.scale_range_dimension(space, C, scales, exact=True, max_n=0)
        verdicts = {row.r: row.n_upper == 0 for row in search.per_scale}
        disagree = [str(row.r) for row in certificate.scales if row.components_bounded != verdicts[row.r]]
        tally.record(not disagree, {"points": space.size, "labels": list(space.labels), "C": C, "scales": disagree})
    return tally


CRITERIA: Dict[str, Callable[[random.Random, int], _Tally]] = {
    "mcshane": run_mcshane,
    "convex": run_convex,
    "barycentric": run_barycentric,
    "extension_loop": run_extension_loop,
    "refinement_loop": run_refinement_loop,
    "lift": run_lift,
    "surgery": run_surgery,
    "towers": run_towers,
    "dimension_coherence": run_dimension_coherence,
    "dim_zero": run_dim_zero,
}


def run_suite(seed: int = 0, scale: float = 1.0, only: Optional[Iterable[str]] = None) -> SuiteReport:
    """
    Критерии по порядку, у каждого свой генератор от (seed, имя)

    scale умножает число экземпляров (не меньше одного на критерий),
    only ограничивает прогон перечисленными критериями.
    """
    selected = list(CRITERIA) if only is None else [name for name in CRITERIA if name in set(only)]
    unknown = set(only or ()) - set(CRITERIA)
    if unknown:
        raise NagataError(f"Unknown suite criteria: {', '.join(sorted(unknown))}")

    checks, instances, skipped = [], {}, {}
    for name in selected:
        rng = random.Random(f"{seed}/{name}")
        count = max(1, round(SUITE_SIZES[name] * scale))
        started = time.perf_counter()
        tally = CRITERIA[name](rng, count)
        check = tally.check()
        log_check(logger, check, criterion=name)
        log_pipeline_event(
            logger, "Suite criterion finished",
            criterion=name, instances=tally.instances, failures=tally.failures,
            skipped=tally.skipped, seconds=round(time.perf_counter() - started, 3)
        )
        checks.append(check)
        instances[name] = tally.instances
        skipped[name] = tally.skipped

    return SuiteReport(seed=seed, scale=scale, instances=instances, skipped=skipped, checks=checks)
