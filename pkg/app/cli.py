"""Command-line entry point: `python -m app <command> ...`.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors, bad input and unreadable fixtures.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from app.core.config import OUTPUT_FORMATS, settings
from app.core.logging import configure_logging
from app.schemas.report import Report
from app.services import algebra_service, verification_service
from app.services.freeword import FreeWordError
from app.services.grammar import ExpressionSyntaxError
from app.services.linalg import LinalgError, latex_scalar
from app.services.qfield import QFieldError
from app.services.relations import FixtureError
from app.services.repmodule import RepModuleError
from app.services.series import SERIES_NAMES
from app.services.subalgebra import SubalgebraError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED_CHECK, EXIT_USAGE = 0, 1, 2

SERVICE_ERRORS = (
    algebra_service.AlgebraServiceError,
    verification_service.VerificationServiceError,
    ExpressionSyntaxError,
    FreeWordError,
    QFieldError,
    LinalgError,
    FixtureError,
    RepModuleError,
    SubalgebraError,
)


class UsageError(Exception):
    """Custom exception for option combinations argparse cannot reject on its own."""
    pass


@dataclass(frozen=True)
class RunConfig:
    """Settings for one invocation, after command-line overrides."""
    max_degree: int
    output_format: str
    fixture_dir: Path
    log_level: str

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        config = cls(
            max_degree=settings.MAX_DEGREE if args.max is None else args.max,
            output_format=args.format or settings.OUTPUT_FORMAT,
            fixture_dir=Path(args.fixtures) if args.fixtures else settings.FIXTURE_DIR,
            log_level=(args.log_level or settings.LOG_LEVEL).upper(),
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.max_degree < 0 or self.max_degree > settings.HARD_CAP:
            raise UsageError(f"--max must lie in 0..{settings.HARD_CAP}, got {self.max_degree}.")
        if not self.fixture_dir.is_dir():
            raise UsageError(f"Fixture directory {self.fixture_dir} does not exist.")

    def apply(self) -> None:
        """Makes the overrides visible to the services, which read `settings`."""
        settings.FIXTURE_DIR = self.fixture_dir
        configure_logging(self.log_level)


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=argparse.SUPPRESS, help="Output format.")
    common.add_argument("--fixtures", default=argparse.SUPPRESS, help="Directory holding the golden-data files.")
    common.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="python -m app",
        description="Computations in the q-shuffle algebra and its basic module.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    shuffle = commands.add_parser("shuffle", parents=[common], help="Expand a q-shuffle product.")
    shuffle.add_argument("left")
    shuffle.add_argument("right")
    shuffle.add_argument("--method", choices=("left", "right"), default="left")

    dims = commands.add_parser("dims", parents=[common], help="Tabulate graded dimensions.")
    dims.add_argument("--space", choices=algebra_service.SPACES, default="U")
    dims.add_argument("--max", type=int, default=None)

    basis = commands.add_parser("basis", parents=[common], help="Print a basis of one component.")
    basis.add_argument("--space", choices=algebra_service.SPACES, default="bold-U")
    basis.add_argument("--r", type=int, required=True)
    basis.add_argument("--s", type=int, required=True)
    basis.add_argument("--listed", action="store_true", help="Use the published ordering of the basis.")

    matrix = commands.add_parser("matrix", parents=[common], help="Matrix of a generator between components.")
    matrix.add_argument("--gen", required=True)
    matrix.add_argument("--from", dest="source", required=True, help="e.g. 2,1+1,2")
    matrix.add_argument("--to", dest="target", required=True)

    genfunc = commands.add_parser("genfunc", parents=[common], help="Expand a generating function.")
    genfunc.add_argument("name", choices=SERIES_NAMES)
    genfunc.add_argument("--max", type=int, default=None)

    verify = commands.add_parser("verify", parents=[common], help="Run a verification suite.")
    verify.add_argument("suite", choices=verification_service.SUITE_NAMES)
    verify.add_argument("--max", type=int, default=None)
    verify.add_argument("--row", type=int, choices=(0, 1, 2, 3), default=None)
    verify.add_argument("--maxlen", type=int, default=None, help="Word length for the relation, intertwiner and associativity checks.")

    apply = commands.add_parser("apply", parents=[common], help="Apply a generator or an operator to an element.")
    target = apply.add_mutually_exclusive_group(required=True)
    target.add_argument("--gen", help="Generator expression, e.g. 'F0 F1'.")
    target.add_argument("--op", help="Operator expression, e.g. 'AstarL Aell'.")
    apply.add_argument("--to", dest="element", required=True)
    apply.add_argument("--row", type=int, choices=(0, 1, 2, 3), default=0)

    serve = commands.add_parser("serve", parents=[common], help="Run the HTTP API.")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)

    args = parser.parse_args(argv)
    for name in ("format", "fixtures", "log_level", "max"):
        if not hasattr(args, name):
            setattr(args, name, None)
    return args


def _run_command(args: argparse.Namespace, config: RunConfig) -> Report:
    if args.command == "shuffle":
        return algebra_service.shuffle_report(args.left, args.right, args.method)
    if args.command == "dims":
        return algebra_service.dims_report(args.space, config.max_degree)
    if args.command == "basis":
        if args.r < 0 or args.s < 0 or args.r + args.s > settings.HARD_CAP:
            raise UsageError(f"r and s must be nonnegative with r + s <= {settings.HARD_CAP}.")
        return algebra_service.basis_report(args.space, args.r, args.s, listed=args.listed)
    if args.command == "matrix":
        return algebra_service.matrix_report(args.gen, args.source, args.target)
    if args.command == "genfunc":
        return algebra_service.genfunc_report(args.name, config.max_degree)
    if args.command == "verify":
        return verification_service.run_suite(args.suite, window=args.max, row=args.row, maxlen=args.maxlen)
    if args.command == "apply":
        return algebra_service.apply_report(args.element, generator=args.gen, operator=args.op, row=args.row)
    raise UsageError(f"Unknown command {args.command!r}.")


def _table_text(table: List[List[Optional[int]]]) -> List[str]:
    cells = [["." if value is None else str(value) for value in row] for row in table]
    width = max((len(c) for row in cells for c in row), default=1)
    header = "r\\s " + " ".join(str(s).rjust(width) for s in range(len(table[0]) if table else 0))
    return [header] + [f"{r:>3} " + " ".join(c.rjust(width) for c in row) for r, row in enumerate(cells)]


def render_text(report: Report) -> str:
    lines: List[str] = []
    for result in report.results:
        details = result.details
        if result.status != "info":
            lines.append(f"{result.status.upper():<4} {result.name}")
            if result.status == "fail":
                extra = {k: v for k, v in details.items() if k in ("examples", "diffs", "reason", "error", "failures")}
                for key, value in extra.items():
                    lines.append(f"       {key}: {value}")
        elif "table" in details:
            lines.append(result.name)
            lines += _table_text(details["table"])
        elif "rows" in details:
            lines.append(result.name)
            cells = details["rows"]
            width = max((len(c) for row in cells for c in row), default=1)
            lines += ["  " + "  ".join(c.rjust(width) for c in row) for row in cells]
        elif "rendered" in details:
            lines.append(f"{result.name} (dim {details['dim']})")
            lines += [f"  {i + 1}. {text}" for i, text in enumerate(details["rendered"])]
        elif "expression" in details:
            lines.append(details["expression"])
        elif "coefficients" in details:
            lines.append(f"{result.name}: " + " ".join(str(c) for c in details["coefficients"]))
        else:
            lines.append(f"{result.name}: {details}")
    if report.command.startswith("verify"):
        counts = {status: sum(1 for r in report.results if r.status == status) for status in ("pass", "fail", "skip")}
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
    return "\n".join(lines)


def render_latex(report: Report) -> str:
    lines: List[str] = []
    for result in report.results:
        details = result.details
        if "table" in details:
            table = details["table"]
            lines.append("\\begin{tabular}{r|" + "r" * len(table[0]) + "}")
            lines.append(" & ".join(["$r \\backslash s$"] + [str(s) for s in range(len(table[0]))]) + " \\\\ \\hline")
            for r, row in enumerate(table):
                lines.append(" & ".join([str(r)] + ["" if v is None else str(v) for v in row]) + " \\\\")
            lines.append("\\end{tabular}")
        elif "rows" in details:
            body = " \\\\\n".join(" & ".join(latex_scalar(c) for c in row) for row in details["rows"])
            lines.append(f"% {result.name}\n\\begin{{pmatrix}}\n{body}\n\\end{{pmatrix}}")
        elif "rendered" in details:
            lines.append("\\begin{enumerate}")
            lines += [f"  \\item ${latex_scalar(text)}$" for text in details["rendered"]]
            lines.append("\\end{enumerate}")
        elif "expression" in details:
            lines.append(f"${latex_scalar(details['expression'])}$")
        elif "coefficients" in details:
            lines.append(f"% {result.name}\n" + ", ".join(str(c) for c in details["coefficients"]))
        else:
            mark = {"pass": "\\checkmark", "fail": "$\\times$", "skip": "--"}.get(result.status, "")
            lines.append(f"{mark} & \\verb|{result.name}| \\\\")
    return "\n".join(lines)


def format_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2)
    if fmt == "latex":
        return render_latex(report)
    return render_text(report)


def serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host or settings.HOST, port=args.port or settings.PORT)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = RunConfig.from_args(args)
        config.apply()
        if args.command == "serve":
            return serve(args)
        report = _run_command(args, config)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SERVICE_ERRORS as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(format_report(report, config.output_format))
    return EXIT_OK if report.ok else EXIT_FAILED_CHECK
