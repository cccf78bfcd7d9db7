"""plotkit command line: render figures from simphase output files."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, SchemaMismatch, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from simphase CSV outputs")
    subs = parser.add_subparsers(dest="command", required=True)
    p = subs.add_parser("render", help="render one figure")
    p.add_argument("--kind", required=True,
                   choices=("betti", "shadow_pair", "tree_spectral"))
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   help="input CSV file(s)")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--dpi", type=int, default=120)
    p.add_argument("--no-annotations", action="store_true",
                   help="suppress threshold marker lines")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(input_paths=tuple(args.inputs), kind=args.kind,
                          output_path=args.out, dpi=args.dpi,
                          annotations=not args.no_annotations)
        render(spec)
        return 0
    except (SchemaMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
