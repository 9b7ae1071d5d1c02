"""Command-line entry point: ``gainstats analyze|gains|plots|simulate``.

Exit status is 0 on success, 1 for invalid input or arguments and 2 for
I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import List, Optional

from .errors import GainStatsError, IoError, SpecError
from .pipeline import (
    AnalysisOptions,
    emit_plot_data,
    emit_report,
    gain_table,
    ingest,
    run_analysis,
)
from .simulate import CohortSpec, Normal, Uniform, generate_cohorts

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _delimiter(text: str) -> str:
    text = {"tab": "\t", "\\t": "\t"}.get(text, text)
    if len(text) != 1:
        raise argparse.ArgumentTypeError("delimiter must be a single character (or 'tab')")
    return text


def _pair(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected two cohort labels, e.g. A,B")
    return tuple(parts)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _dist(text: str):
    try:
        kind, params = text.split(":", 1)
        a, b = (float(p) for p in params.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected uniform:LOW,HIGH or normal:MEAN,SD") from None
    if kind == "uniform":
        return Uniform(a, b)
    if kind == "normal":
        return Normal(a, b)
    raise argparse.ArgumentTypeError(f"unknown distribution {kind!r}")


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="delimited table with student_id, cohort, initial, final")
    p.add_argument("--scale", choices=("percent", "unit"), default="percent")
    p.add_argument("--delimiter", type=_delimiter, default=",")
    p.add_argument("--bins", type=_positive_int, help="histogram bins (default Freedman-Diaconis)")
    p.add_argument("--bandwidth", type=_positive_float, help="KDE bandwidth (default Silverman)")
    p.add_argument("--z-threshold", type=_positive_float, default=1.0)
    p.add_argument("--compare", type=_pair, metavar="LABEL,LABEL")
    p.add_argument("--level", type=float, default=0.95, help="confidence level for the mean difference")
    p.add_argument("--pooled-z", action="store_true", help="standardize over all cohorts combined")
    p.add_argument("--equal-var", action="store_true", help="pooled-variance t-test instead of Welch")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gainstats", description="Individual-gain analysis of pre/post test scores.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="full report")
    _add_input_args(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="directory for report and plot data (default: report to stdout)")
    p.add_argument("--svg", action="store_true", help="also render plot data as SVG (with --out)")

    p = sub.add_parser("gains", help="per-student gain table")
    _add_input_args(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="output file (default stdout)")

    p = sub.add_parser("plots", help="plot-data files only")
    _add_input_args(p)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--svg", action="store_true", help="also render each file as SVG")

    p = sub.add_parser("simulate", help="write a synthetic score table")
    p.add_argument("--n", type=_positive_int, default=155, help="students per cohort")
    p.add_argument("--cohorts", default="A", help="comma-separated cohort labels")
    p.add_argument("--initial", type=_dist, default=Normal(0.5, 0.15), metavar="DIST")
    p.add_argument("--gain", type=_dist, default=Normal(0.5, 0.2), metavar="DIST")
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0, help="cohort i uses seed + i")
    p.add_argument("--scale", choices=("percent", "unit"), default="percent")
    p.add_argument("--delimiter", type=_delimiter, default=",")
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    return parser


def _options(args) -> AnalysisOptions:
    return AnalysisOptions(
        bins=args.bins,
        bandwidth=args.bandwidth,
        z_threshold=args.z_threshold,
        compare=args.compare,
        level=args.level,
        pooled_z=args.pooled_z,
        equal_var=args.equal_var,
    )


def _write(data: bytes, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise IoError(f"cannot write output: {exc}", path=str(path)) from exc


def _simulate(args) -> bytes:
    labels = [s.strip() for s in args.cohorts.split(",") if s.strip()]
    if not labels:
        raise SpecError("no cohort labels given")
    specs = [
        CohortSpec(n=args.n, initial_dist=args.initial, gain_dist=args.gain,
                   rho=args.rho, seed=args.seed + i, cohort=label)
        for i, label in enumerate(labels)
    ]
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=args.delimiter, lineterminator="\n")
    w.writerow(["student_id", "cohort", "initial", "final"])
    factor = 100.0 if args.scale == "percent" else 1.0
    for r in generate_cohorts(specs):
        w.writerow([r.student_id, r.cohort, repr(r.initial * factor), repr(r.final * factor)])
    return buf.getvalue().encode("utf-8")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or an argument error
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        if args.command == "simulate":
            _write(_simulate(args), args.out)
            return EXIT_OK
        dataset = ingest(args.input, scale=args.scale, delimiter=args.delimiter)
        report = run_analysis(dataset, _options(args))
        if args.command == "analyze":
            data = emit_report(report, args.format)
            if args.out is None:
                _write(data, None)
            else:
                try:
                    args.out.mkdir(parents=True, exist_ok=True)
                except OSError as exc:
                    raise IoError(f"cannot create output directory: {exc}", path=str(args.out)) from exc
                _write(data, args.out / f"report.{'json' if args.format == 'json' else 'txt'}")
                emit_plot_data(report, args.out, svg=args.svg)
        elif args.command == "gains":
            _write(gain_table(report, args.format, args.delimiter), args.out)
        elif args.command == "plots":
            emit_plot_data(report, args.out, svg=args.svg)
    except IoError as exc:
        print(f"gainstats: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GainStatsError as exc:
        print(f"gainstats: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"gainstats: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
