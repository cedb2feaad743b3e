#!/usr/bin/env python3
"""Render every figure kind from a simulation output directory::

    python scripts/render_figures.py out/desk [figures-out-dir]

Needs the nkfigures package (see figures/).
"""

import sys
from pathlib import Path

from nkfigures import FigureRequest, render


def main(argv) -> int:
    if not 1 <= len(argv) <= 2:
        print(__doc__, file=sys.stderr)
        return 2
    results = Path(argv[0])
    out_dir = Path(argv[1]) if len(argv) == 2 else results / "figures"
    cells = results / "cells.csv"
    for kind, source in [
        ("overview", results),
        ("learning", cells),
        ("structure", cells),
        ("surfaces", cells),
    ]:
        path = render(FigureRequest(kind, str(source), str(out_dir / f"{kind}.svg")))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
