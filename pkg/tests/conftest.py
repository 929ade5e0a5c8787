import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from k3acm import LatticeSpec, build_dp9, builtin  # noqa: E402


def unit(i: int, n: int = 9) -> tuple[int, ...]:
    return tuple(int(i == j) for j in range(n))


@pytest.fixture(scope="session")
def dp9():
    return build_dp9()


@pytest.fixture(scope="session")
def elliptic():
    # F = (1,0) isotropic, Γ = (0,1) a (-2)-class with F·Γ = 1
    return LatticeSpec.from_gram([[0, 1], [1, -2]], name="elliptic", basis=("F", "G"),
                                 ample_ref=(3, 1), k3=True)


@pytest.fixture(scope="session")
def u2():
    return builtin("u2")


@pytest.fixture(scope="session")
def quartic_demo():
    return builtin("quartic-demo")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
