import numpy as np
import pytest

from subordlab import spectral


@pytest.fixture(scope="session")
def z8():
    return spectral.cycle(8)


@pytest.fixture(scope="session")
def z16():
    return spectral.cycle(16)


@pytest.fixture(scope="session")
def z64():
    return spectral.cycle(64)


@pytest.fixture(scope="session")
def diag014():
    return spectral.from_matrix(np.diag([0.0, 1.0, 4.0]), metric=1.0 - np.eye(3))


@pytest.fixture(scope="session")
def markov_models():
    return [spectral.cycle(16), spectral.path(16), spectral.grid(32)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion."""
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(log):
        ok, detail = log[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
