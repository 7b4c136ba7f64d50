"""`report` command line: figures and an exponent table from run directories."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .data import MissingColumnError
from .render import DEFAULT_REFERENCE_SLOPES, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="report",
        description="Render log-log decay plots and a pass/fail exponent table",
    )
    parser.add_argument("--runs", nargs="+", required=True, help="run directories")
    parser.add_argument("--quantities", default="l2_p,l2_u",
                        help="comma-separated series columns")
    parser.add_argument("--reference-slopes", default=None,
                        help="comma-separated guide slopes (default -0.75,-1.25)")
    parser.add_argument("--window", default=None, help="fit window LO:HI (overrides fits.json)")
    parser.add_argument("--out", default="report", help="output directory")
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
        return 0 if code == 0 else 2

    window = None
    if args.window:
        try:
            lo, _, hi = args.window.partition(":")
            window = (float(lo), float(hi))
        except ValueError:
            print(f"error: bad window {args.window!r}; expected LO:HI", file=sys.stderr)
            return 2
    slopes = DEFAULT_REFERENCE_SLOPES
    if args.reference_slopes:
        try:
            slopes = tuple(float(tok) for tok in args.reference_slopes.split(","))
        except ValueError:
            print(f"error: bad slopes {args.reference_slopes!r}", file=sys.stderr)
            return 2

    spec = PlotSpec(
        run_dirs=args.runs,
        quantities=[q for q in args.quantities.split(",") if q],
        reference_slopes=slopes,
        output_dir=args.out,
        window=window,
    )
    try:
        result = render(spec)
    except MissingColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(f"wrote {result.table_path} and {len(result.figure_paths)} figure(s)")
    for row in result.rows:
        verdict = "pass" if row.passed else "FAIL"
        print(f"  {row.quantity} [{row.run_label}]: {row.exponent:+.4f} "
              f"vs {row.reference:+.2f} -> {verdict}")
    return 0 if result.all_passed else 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
