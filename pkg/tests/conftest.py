"""Collects acceptance outcomes and prints one line per criterion after the run."""
import pytest

_OUTCOMES: dict[int, list] = {}
_TITLES: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    _TITLES[n] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _OUTCOMES.setdefault(n, []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        results = _OUTCOMES[n]
        ok = all(p for _, p in results)
        passed = sum(p for _, p in results)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {_TITLES[n]} ({passed}/{len(results)} checks)")
        for name, p in results:
            if not p:
                tr.write_line(f"    failed: {name}")
