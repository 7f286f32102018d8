import numpy as np
import pytest

from bisimp import fixtures


@pytest.fixture(scope="session")
def s3():
    return fixtures.s3()


@pytest.fixture(scope="session")
def d4():
    return fixtures.d4()


@pytest.fixture(scope="session")
def c3s3():
    return fixtures.c3_in_s3()


@pytest.fixture(scope="session")
def nerve2():
    return fixtures.nerve_fixture(2)


@pytest.fixture(scope="session")
def constant_grid():
    return fixtures.constant_grid()


@pytest.fixture(scope="session")
def external_grid():
    return fixtures.external_product_grid()


@pytest.fixture(scope="session")
def d4_grid():
    return fixtures.d4_grid()


@pytest.fixture(scope="session", params=["constant", "external", "d4"])
def any_grid(request):
    return fixtures.GRIDS[request.param]()


def perm_index(G, perm):
    return G.index_of(np.asarray(perm))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
