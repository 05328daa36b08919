import pytest

from prelie_posets import enumeration

_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.failed:
        _ACCEPTANCE[label] = "FAIL"
    elif report.when == "call":
        _ACCEPTANCE.setdefault(label, "PASS")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by this test")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]}  criterion {label}")


@pytest.fixture
def fresh_tables(monkeypatch, tmp_path):
    """Point the table cache at an empty directory and clear in-memory tables."""
    monkeypatch.setenv(enumeration.CACHE_ENV, str(tmp_path))
    enumeration._table.cache_clear()
    yield tmp_path
    enumeration._table.cache_clear()
