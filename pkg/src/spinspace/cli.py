"""Command-line front end.

    spinspace scenario --statistics fermion --signs ++ --bs 50/50 [--format json] [--check-oracle]
    spinspace terms    --statistics boson --signs +- --bs 50/50 --component sz0
    spinspace sweep    --statistics fermion --signs ++ --grid 9 [--jobs 4]

Exit codes: 0 success, 2 invalid flags, 3 oracle mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .fock import Statistics
from .optics import BeamSplitter
from .report import FORMATTERS, OBSERVABLES, build_report, fmt_float, sector_name
from .scenarios import SIGN_CHOICES, ScenarioSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ORACLE = 3


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``'RE,IM'`` -> complex."""
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected RE,IM without spaces, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise UsageError(f"expected RE,IM with real numbers, got {text!r}") from None


def _add_scenario_flags(p: argparse.ArgumentParser, with_bs: bool = True) -> None:
    p.add_argument("--statistics", required=True, choices=[s.value for s in Statistics])
    p.add_argument("--signs", default="++", choices=SIGN_CHOICES,
                   help="signs of the two source pairs (default ++)")
    if with_bs:
        p.add_argument("--bs", choices=["50/50"], help="use the 50/50 beam splitter")
        p.add_argument("--alpha", help="beam-splitter alpha as RE,IM (use --alpha=-x,y for negatives)")
        p.add_argument("--beta", help="beam-splitter beta as RE,IM")
    p.add_argument("--out", type=Path, help="also write the output to this file")


def _beam_splitter(args) -> BeamSplitter:
    explicit = args.alpha is not None or args.beta is not None
    if args.bs and explicit:
        raise UsageError("give either --bs or --alpha/--beta, not both")
    if not explicit:
        return BeamSplitter.fifty_fifty()
    if args.alpha is None or args.beta is None:
        raise UsageError("--alpha and --beta must be given together")
    alpha, beta = parse_complex(args.alpha), parse_complex(args.beta)
    try:
        return BeamSplitter(alpha, beta)
    except ValueError as exc:
        raise UsageError(f"beam splitter is not in SU(2): {exc}") from None


def _spec(args, bs: BeamSplitter | None = None) -> ScenarioSpec:
    return ScenarioSpec.from_signs(args.statistics, args.signs, bs or _beam_splitter(args))


def _emit(text: str, out: Path | None) -> None:
    sys.stdout.write(text)
    if out is not None:
        out.write_bytes(text.encode("utf-8"))


def cmd_scenario(args) -> int:
    spec = _spec(args)
    report = build_report(spec)
    _emit(FORMATTERS[args.format](report), args.out)
    if args.check_oracle:
        from .oracle import compare, dense_evaluate

        issues = compare(report, dense_evaluate(spec))
        if issues:
            for line in issues:
                print(f"oracle mismatch: {line}", file=sys.stderr)
            return EXIT_ORACLE
    return EXIT_OK


def cmd_terms(args) -> int:
    report = build_report(_spec(args), terms=args.component)
    listing = {k: report[k] for k in ("scenario", "phase_note", "terms")}
    _emit(FORMATTERS[args.format](listing), args.out)
    return EXIT_OK


def _sweep_row(job):
    statistics, signs, theta = job
    spec = ScenarioSpec.from_signs(statistics, signs, BeamSplitter.from_angle(theta))
    report = build_report(spec)
    a, b = spec.bs.alpha, spec.bs.beta
    row = [fmt_float(theta), fmt_float(a.real), fmt_float(a.imag), fmt_float(b.real),
           fmt_float(b.imag), fmt_float(report["total_entropy_ebits"])]
    for br in report["branches"]:
        row += [fmt_float(br["probability"]), fmt_float(br["post_state_entropy_ebits"])]
    return row


def sweep_header() -> list[str]:
    head = ["theta", "alpha_re", "alpha_im", "beta_re", "beta_im", "total_entropy_ebits"]
    for observable, sectors in OBSERVABLES.items():
        for sector in sectors:
            name = f"{observable}:{sector_name(sector)}"
            head += [f"{name}:probability", f"{name}:entropy_ebits"]
    return head


def sweep_thetas(grid: int) -> list[float]:
    return [k * (math.pi / 2) / (grid - 1) for k in range(grid)]


def cmd_sweep(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    jobs = [(args.statistics, args.signs, t) for t in sweep_thetas(args.grid)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(sweep_header())
    w.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinspace",
                     description="Spin-space entanglement transfer with two entangled pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scenario", help="branch probabilities and entropies for one setup")
    _add_scenario_flags(p)
    p.add_argument("--format", choices=sorted(FORMATTERS), default="json")
    p.add_argument("--check-oracle", action="store_true",
                   help="cross-check against the dense oracle; exit 3 on mismatch")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("terms", help="list output-state terms after the beam splitters")
    _add_scenario_flags(p)
    p.add_argument("--component", choices=["sz0", "sz1", "all"], default="all")
    p.add_argument("--format", choices=sorted(FORMATTERS), default="text")
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("sweep", help="CSV table over alpha=cos(t), beta=-i sin(t), t in [0, pi/2]")
    _add_scenario_flags(p, with_bs=False)
    p.add_argument("--grid", type=int, required=True, help="number of angles (>= 2)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spinspace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
