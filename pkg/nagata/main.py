"""
Nagata Toolkit - точка входа командной строки

Код возврата: 0, если все обязательные проверки выполнены,
1 при проваленных проверках, 2 при ошибках ввода и параметров.
"""

import sys
import time
from typing import List, Optional

import structlog

from nagata.cli.common import RunContext, build_report, emit
from nagata.cli.router import build_parser
from nagata.core.errors import NagataError
from nagata.core.logging import log_error, setup_logging

logger = structlog.get_logger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level, args.log_format, stream=sys.stderr)
    logger.info("Command started", command=args.command)
    started = time.perf_counter()
    context = RunContext(args)

    try:
        outcome = args.handler(context)
    except NagataError as e:
        log_error(logger, e, e.details, command=args.command)
        sys.stderr.write(f"{args.command}: {e.message}\n")
        return 2

    if outcome is None:
        return 0
    report = build_report(args, argv, context, outcome, started)
    emit(report, args.json_out)
    logger.info("Command finished", command=args.command, passed=report.passed)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
