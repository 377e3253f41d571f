import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qcocycle.scalars import ParamContext  # noqa: E402

_criteria = {}


@pytest.fixture(scope="session")
def ctx():
    return ParamContext(0.5, 1.3, 50)


@pytest.fixture(scope="session")
def ctx80():
    return ParamContext(0.5, 1.3, 80)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is None:
        return
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    failed = report.failed
    if report.when == "call" or failed:
        prev = _criteria.get(number, (title, True))
        _criteria[number] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
