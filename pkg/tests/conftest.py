import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import A2, F2, charge, rep  # noqa: E402


@pytest.fixture(scope="session")
def a2():
    return A2


@pytest.fixture(scope="session")
def a2_reps():
    return {
        "S1": rep(A2, F2, (1, 0)),
        "S2": rep(A2, F2, (0, 1)),
        "P": rep(A2, F2, (1, 1), {"a": [[1]]}),
        "SS": rep(A2, F2, (1, 1)),
    }


@pytest.fixture(scope="session")
def z_std():
    return charge((-1, 1), (1, 1))


@pytest.fixture(scope="session")
def z_flip():
    return charge((1, 1), (-1, 1))


@pytest.fixture(scope="session")
def fixture_path():
    return Path(__file__).parent.parent / "fixtures" / "a2_session.json"
