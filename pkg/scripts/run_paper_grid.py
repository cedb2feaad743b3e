#!/usr/bin/env python3
"""Run the publication-scale grid (396 scenarios x 1500 replications)
into out/paper. Long; set --parallelism to the core count::

    python scripts/run_paper_grid.py --parallelism 8
"""

import sys
from pathlib import Path

from nkgroups.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(main(["--config", str(ROOT / "configs" / "paper.cfg"), *sys.argv[1:]]))
