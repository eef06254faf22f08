import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """``with criterion(n, title, limit):`` records a pass/fail line for the summary."""
    results = request.config.stash[_RESULTS]

    @contextmanager
    def record(num, title, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            secs = time.perf_counter() - start
            if ok and limit is not None and secs > limit:
                ok = False
                title += f" [over the {limit:.0f}s limit]"
            results[num] = (ok, secs, title)
        if not ok:
            pytest.fail(f"criterion {num} took {secs:.1f}s, limit {limit}s")

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, secs, title = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} "
                                    f"({secs:.1f}s) {title}")
