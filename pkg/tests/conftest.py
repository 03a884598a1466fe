import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "src"))

from family import TwistTriple  # noqa: E402


@pytest.fixture
def congruent_triple():
    return TwistTriple.create(1, 1, 1)


@pytest.fixture
def triple_k2():
    return TwistTriple.create(7, 23, 17)


@pytest.fixture
def rng():
    return random.Random(0)
