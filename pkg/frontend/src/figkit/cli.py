"""figkit command line: render a figure manifest to PNG + SVG panels."""

from __future__ import annotations

import argparse
import sys

from .loaders import ArtifactError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figkit",
        description="Render figure panels from squeezenhse artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    ren = sub.add_parser("render", help="render one figure manifest")
    ren.add_argument("--manifest", required=True,
                     help="path to manifest.json from run/reproduce")
    ren.add_argument("--figure", required=True,
                     help="figure id the manifest describes (e.g. fig3)")
    ren.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render(args.manifest, args.figure, args.out)
    except ArtifactError as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
