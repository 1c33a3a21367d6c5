"""
Подкоманды validate и transform
"""

import argparse

from nagata.cli.common import CommandOutcome, RunContext, add_space, number
from nagata.models.schemas import CheckResult
from nagata.services import metric_core


def validate(context: RunContext) -> CommandOutcome:
    """Аксиомы метрики со свидетелями нарушений"""
    space = context.space
    violations = metric_core.validate(space)
    check = CheckResult.that(
        "metric_axioms", "distance table satisfies the metric axioms",
        not violations,
        witness={"axiom": violations[0].axiom.value, "points": list(violations[0].points)} if violations else None
    )
    return CommandOutcome(
        result={
            "points": space.size,
            "exact": space.exact,
            "diameter": space.diameter,
            "delta": metric_core.delta_discreteness(space),
            "violations": [{"axiom": v.axiom.value, "points": list(v.points)} for v in violations],
        },
        checks=[check],
    )


def transform(context: RunContext) -> CommandOutcome:
    """(X, max(d, ε)) или (X, min(d, ε)) с измеренными билипшицевыми границами"""
    args = context.args
    space = context.space
    if args.mode == "max":
        transformed = metric_core.transform_max(space, args.epsilon)
    else:
        transformed = metric_core.transform_min(space, args.epsilon)
    if space.size > 1:
        mu, lam = metric_core.bilipschitz_bounds(space, transformed)
    else:
        mu = lam = 1
    violations = metric_core.validate(transformed)
    return CommandOutcome(
        result={
            "mode": args.mode,
            "epsilon": args.epsilon,
            "space": {"labels": list(transformed.labels), "dist": [list(row) for row in transformed.dist]},
            "bilipschitz": {"mu": mu, "lambda": lam},
        },
        checks=[CheckResult.that(
            "metric_axioms", "transformed table is a metric",
            not violations, witness=list(violations[0].points) if violations else None
        )],
    )


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("validate", parents=[parent], help="Проверка аксиом метрики")
    add_space(parser)
    parser.set_defaults(handler=validate)

    parser = subparsers.add_parser("transform", parents=[parent], help="Преобразования max(d, ε) и min(d, ε)")
    add_space(parser)
    parser.add_argument("--mode", choices=["max", "min"], required=True)
    parser.add_argument("--epsilon", type=number, required=True)
    parser.set_defaults(handler=transform)
