import os

import pytest
from hypothesis import HealthCheck, settings

from ctxgram import corpus

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS_IDS = corpus.ids()


@pytest.fixture(scope="session")
def entries():
    return {e.id: e for e in corpus.load_all()}


@pytest.fixture(scope="session")
def ex1(entries):
    return entries["ex1-abca"].grammar


# one summary line per acceptance criterion, whatever the verbosity

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    status = _criteria.get(number, (title, "PASS"))[1]
    if report.failed:
        status = "FAIL"
    elif report.skipped and report.when == "setup":
        status = "SKIP"
    _criteria[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
