"""ptplot: render figures from ptspectra CSV output."""

from __future__ import annotations

import argparse
import sys

from .errors import PlotkitError
from .figures import FigureRequest, render


def _parse_annotation(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected LABEL:X:Y, got {text!r}"
        )
    label, xs, ys = parts
    try:
        return (label, float(xs), float(ys))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"annotation coordinates in {text!r} are not numbers"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptplot",
        description=(
            "Render phase-diagram, correlator, and trajectory figures "
            "from ptspectra CSV files."
        ),
    )
    parser.add_argument(
        "kind",
        choices=("phase_diagram", "correlators", "trajectory"),
        help="figure type; fixes the expected CSV schema",
    )
    parser.add_argument("csv", nargs="+", help="input CSV file(s)")
    parser.add_argument(
        "-o", "--out", required=True, help="output image path (png/svg/pdf)"
    )
    parser.add_argument(
        "--annotate",
        action="append",
        default=[],
        type=_parse_annotation,
        metavar="LABEL:X:Y",
        help="mark a point on a phase diagram; repeatable",
    )
    parser.add_argument(
        "--log",
        action="store_true",
        help="log-scale correlator magnitudes",
    )
    parser.add_argument("--dpi", type=int, default=100)
    parser.add_argument(
        "--xlabel", default=None, help="override the x axis label"
    )
    parser.add_argument(
        "--ylabel", default=None, help="override the y axis label"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    request = FigureRequest(
        kind=args.kind,
        paths=tuple(args.csv),
        out=args.out,
        annotations=tuple(args.annotate),
        log_scale=args.log,
        dpi=args.dpi,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
    )
    try:
        render(request)
    except (PlotkitError, OSError) as exc:
        print(f"ptplot: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
