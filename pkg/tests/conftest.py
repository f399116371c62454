"""Collect acceptance-criterion outcomes and print one line per criterion."""

import pytest

_RESULTS = pytest.StashKey[dict]()
_NOTES = pytest.StashKey[list]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion check")
    config.stash[_RESULTS] = {}


@pytest.fixture
def note(request):
    """Attach a measurement to the criterion line; ``warn=True`` marks a soft-gate miss."""
    notes = request.node.stash.setdefault(_NOTES, [])

    def add(text, warn=False):
        notes.append((text, warn))

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    num, title = marker.args
    entry = item.config.stash[_RESULTS].setdefault(num, {"title": title, "parts": []})
    notes = item.stash.get(_NOTES, [])
    status = "FAIL" if rep.failed else ("WARN" if any(w for _, w in notes) else "PASS")
    if rep.failed and not notes:
        notes = [(str(rep.longrepr.reprcrash.message).splitlines()[0]
                  if hasattr(rep.longrepr, "reprcrash") else "error", False)]
    entry["parts"].append((status, "; ".join(t for t, _ in notes)))


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        entry = results[num]
        states = [s for s, _ in entry["parts"]]
        status = "FAIL" if "FAIL" in states else ("WARN" if "WARN" in states else "PASS")
        detail = " | ".join(d for _, d in entry["parts"] if d)
        terminalreporter.write_line(f"{status} criterion {num}: {entry['title']} -- {detail}")
