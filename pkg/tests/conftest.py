from pathlib import Path

import pytest

from nfpc import parse_model, transform_model

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

_criteria: dict[int, dict] = {}


@pytest.fixture
def flight_text() -> str:
    return (FIXTURES / "flight_service.model").read_text(encoding="utf-8")


@pytest.fixture
def flight_model(flight_text):
    return parse_model(flight_text)


@pytest.fixture
def flight_artifacts(flight_model):
    return transform_model(flight_model)


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    if report.when == "call" or report.failed:
        entry = _criteria.setdefault(number[0], {"label": number[1], "passed": 0, "failed": 0})
        entry["passed" if report.passed else "failed"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker:
        report.criterion = marker.args


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        terminalreporter.write_line(
            f"[{status}] {number}. {entry['label']} "
            f"({entry['passed']} passed, {entry['failed']} failed)")
