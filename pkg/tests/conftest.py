import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


_CRITERIA: list = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    if hasattr(rep, "wasxfail"):
        status = "FAIL (expected, see xfail reason)"
    else:
        status = "PASS" if rep.passed else "FAIL"
    label = mark.args[1]
    if hasattr(item, "callspec"):
        label += f" [{item.callspec.id}]"
    _CRITERIA.append((mark.args[0], label, status, rep.duration))


def _order(entry):
    tag = str(entry[0])
    digits = "".join(ch for ch in tag if ch.isdigit())
    return int(digits), tag


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, status, duration in sorted(_CRITERIA, key=_order):
        terminalreporter.write_line(f"criterion {number:<3} {status:<34} {duration:7.3f}s  {label}")
