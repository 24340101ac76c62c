import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cmce.field import Field
from cmce.keygen import reference_params, small_params


@pytest.fixture(scope="session")
def f2():
    return Field(2, 1)


@pytest.fixture(scope="session")
def f7():
    return Field(7)


@pytest.fixture(scope="session")
def f8():
    return Field(2, 3)


@pytest.fixture(scope="session")
def f9():
    return Field(3, 2)


@pytest.fixture(scope="session")
def f256():
    return Field(2, 8)


@pytest.fixture(scope="session")
def small():
    return small_params()


@pytest.fixture(scope="session")
def reference():
    return reference_params()


@pytest.fixture
def rng(request):
    """Deterministic per-test generator derived from the test's own name."""
    import hashlib
    digest = hashlib.sha256(request.node.nodeid.encode()).digest()
    seed = int.from_bytes(digest[:8], "little")
    return np.random.default_rng(np.random.SeedSequence([seed, 0xC3CE]))
