"""
Основной роутер командной строки Nagata Toolkit
"""

import argparse

from nagata.cli.common import common_parser
from nagata.cli.commands import covers, dimension, extension, hyperbolic, metric, sphere, suite

# Модули подкоманд в порядке вывода в --help
COMMAND_MODULES = (metric, covers, extension, sphere, dimension, hyperbolic, suite)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nagata",
        description="Размерность Нагаты-Ассуада конечных метрических пространств: "
                    "конструкции, оценки и сертификаты"
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    parent = common_parser()
    for module in COMMAND_MODULES:
        module.register(subparsers, parent)
    return parser
