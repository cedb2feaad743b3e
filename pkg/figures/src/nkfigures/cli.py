"""Command line entry point: ``nkfigures render --kind K --in PATH --out PATH``."""

from __future__ import annotations

import argparse
import json
import sys

from .render import KINDS, FigureRequest, StyleOptions, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nkfigures", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    cmd = sub.add_parser("render", help="render one figure kind from a result table")
    cmd.add_argument("--kind", required=True, choices=KINDS)
    cmd.add_argument("--in", dest="in_path", required=True, help="cells.csv, or the output directory for overview")
    cmd.add_argument("--out", dest="out_path", required=True, help="output image path (.svg preferred)")
    cmd.add_argument("--panel-width", type=float, default=StyleOptions.panel_width)
    cmd.add_argument("--panel-height", type=float, default=StyleOptions.panel_height)
    cmd.add_argument("--no-legend", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    style = StyleOptions(
        panel_width=args.panel_width,
        panel_height=args.panel_height,
        show_legend=not args.no_legend,
    )
    try:
        out = render(FigureRequest(kind=args.kind, in_path=args.in_path, out_path=args.out_path, style=style))
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    json.dump({"written": str(out)}, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
