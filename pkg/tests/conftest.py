import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from autolearn import fixture
from autolearn.formats import parse_dfa, parse_kripke

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def even0s():
    return parse_dfa(fixture("even0s.dfa"))


@pytest.fixture(scope="session")
def bstar_aa_bstar():
    return parse_dfa(fixture("bstar_aa_bstar.dfa"))


@pytest.fixture(scope="session")
def b_or_aa_star():
    return parse_dfa(fixture("b_or_aa_star.dfa"))


@pytest.fixture(scope="session")
def odd_a():
    return parse_dfa(fixture("odd_a.dfa"))


@pytest.fixture(scope="session")
def ikl3():
    return parse_kripke(fixture("ikl3.kripke"))


# -- acceptance summary ------------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        _criteria[name] = report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        report = _criteria[name]
        number = int(name.split("_")[2])
        title = name.split("_", 3)[3].replace("_", " ")
        verdict = "PASS" if report.passed else "FAIL"
        line = f"criterion {number:2d} {verdict}  {title}"
        if not report.passed:
            detail = str(report.longrepr).strip().splitlines()
            failed = [l for l in detail if "failed parts:" in l]
            if failed:
                line += "  (" + failed[-1].split("failed parts:", 1)[1].strip().rstrip("'\"") + ")"
        terminalreporter.write_line(line)
