"""
Подкоманды corpus и schema
"""

import argparse
import json
import sys

from nagata.cli.common import CommandOutcome, RunContext
from nagata.models.schemas import RunReport
from nagata.services import suite


def corpus(context: RunContext) -> CommandOutcome:
    """Прогон свойств на случайном корпусе с зерном --seed"""
    args = context.args
    report = suite.run_suite(args.seed, args.scale, args.only)
    return CommandOutcome(
        result={
            "seed": report.seed,
            "scale": report.scale,
            "instances": report.instances,
            "skipped": report.skipped,
        },
        checks=report.checks,
    )


def schema(context: RunContext) -> None:
    """JSON schema отчёта запуска; печатается без обёртки RunReport"""
    sys.stdout.write(json.dumps(RunReport.model_json_schema(), ensure_ascii=False, indent=2) + "\n")


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("corpus", parents=[parent], help="Прогон свойств на случайном корпусе")
    parser.add_argument("--scale", type=float, default=1.0, help="Множитель числа экземпляров")
    parser.add_argument("--only", nargs="+", choices=list(suite.CRITERIA), help="Только перечисленные критерии")
    parser.set_defaults(handler=corpus)

    parser = subparsers.add_parser("schema", parents=[parent], help="JSON schema отчёта")
    parser.set_defaults(handler=schema)
