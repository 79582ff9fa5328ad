import numpy as np
import pytest

from fusedglrt import dist


@pytest.fixture(scope="session")
def base():
    """Default configuration (two and three unknown parameters)."""
    return dist.FusedDistParams.default()


@pytest.fixture(scope="session")
def base_literal():
    return dist.FusedDistParams.default(dof_literal=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, ok, detail)``."""
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
