from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: list[tuple[str, str]] = []


@pytest.fixture
def fixture_changelog() -> Path:
    return FIXTURES / "ChangeLog"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.append((marker.args[0], report.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): exit criterion, reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        tag = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"[{tag}] {name}")


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Route the kernel calls through one specific backend."""
    from coeditnet import _kernels_py, kernels

    if request.param == "cython":
        mod = pytest.importorskip("coeditnet._kernels")
    else:
        mod = _kernels_py
    monkeypatch.setattr(kernels, "brandes", mod.brandes)
    monkeypatch.setattr(kernels, "fruchterman_reingold", mod.fruchterman_reingold)
    return request.param
