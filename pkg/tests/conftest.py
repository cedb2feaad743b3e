import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nkgroups.landscape import build_landscape, build_matrix


@pytest.fixture
def block_landscape():
    return build_landscape(build_matrix("block", 12, 3), seed=7)


@pytest.fixture
def random_landscape():
    return build_landscape(build_matrix("random", 12, 5, seed=11), seed=11)
