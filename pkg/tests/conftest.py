import pytest

from gqlab.constructions import (
    hermitian_quadrangle,
    linear_qclan,
    qclan_kantor_family,
    symplectic_quadrangle,
    w3_kantor_family,
)
from gqlab.stgq import triple_from_family


@pytest.fixture(scope="session")
def W2():
    return symplectic_quadrangle(2)


@pytest.fixture(scope="session")
def W3():
    return symplectic_quadrangle(3)


@pytest.fixture(scope="session")
def H34():
    return hermitian_quadrangle(2)


@pytest.fixture(scope="session")
def w2_triple():
    return triple_from_family(w3_kantor_family(2), name="w3(2)")


@pytest.fixture(scope="session")
def w3_triple():
    return triple_from_family(w3_kantor_family(3), name="w3(3)")


@pytest.fixture(scope="session")
def h34_triple():
    return triple_from_family(qclan_kantor_family(linear_qclan(2)), name="qclan(2)")


# -- acceptance summary -------------------------------------------------------------------------------

_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    prev = _CRITERIA.get(n, (title, True))[1]
    if rep.when == "call" or failed:
        _CRITERIA[n] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
