#!/usr/bin/env python3
"""Run the desk-scale grid (396 scenarios x 200 replications) into
out/desk. Pass extra nkgroups CLI flags through, e.g.::

    python scripts/run_desk_grid.py --parallelism 4
"""

import sys
from pathlib import Path

from nkgroups.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(main(["--config", str(ROOT / "configs" / "desk.cfg"), *sys.argv[1:]]))
