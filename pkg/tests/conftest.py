import pytest

from opfunctors import verify

_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture(scope="session")
def suite_results():
    cache: dict = {}

    def get(name: str) -> dict:
        if name not in cache:
            cache[name] = verify.SUITES[name](verify.DEFAULT_SEED)
        return cache[name]

    return get


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args
    if rep.when == "call" or rep.failed:
        if key not in _outcomes or not rep.passed:
            _outcomes[key] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_outcomes.items()):
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}")
