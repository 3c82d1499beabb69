import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)
