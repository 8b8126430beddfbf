import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jetmech import ConnectionModel, LagrangianModel  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def harmonic():
    return LagrangianModel.from_string("0.5*v0^2 - 0.5*q0^2", 1)


@pytest.fixture(scope="session")
def driven():
    return LagrangianModel.from_string("0.5*v0^2 - 0.5*q0^2 + q0*sin(t)", 1)


@pytest.fixture(scope="session")
def free():
    return LagrangianModel.from_string("0.5*v0^2", 1)


@pytest.fixture(scope="session")
def std1():
    return ConnectionModel.standard(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
