import numpy as np
import pytest

from nilgeo._accel import HAVE_NUMBA, DISABLED

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA and not DISABLED else [])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_points(rng, n, scale=2.0):
    return [tuple(row) for row in rng.uniform(-scale, scale, size=(n, 3))]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS.values():
        terminalreporter.write_line(line)
