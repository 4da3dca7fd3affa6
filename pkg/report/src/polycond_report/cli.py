"""Command line: report --in <artifact dir> --out <report dir>."""

from __future__ import annotations

import argparse
import sys

from .errors import ReportError
from .render import render_bundle


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="report",
        description="render experiment CSV/JSON artifacts into SVG figures "
        "and a single static summary page",
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory of CSV artifacts, sidecars, and manifest")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for figures and summary.html")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render_bundle(args.in_dir, args.out_dir)
    except ReportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
