import numpy as np
import pytest

from cyclic_loci.affine import PosetParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def params(k, l, n):
    return PosetParams(k, l, n)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
