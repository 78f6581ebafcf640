import shutil
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def workspace(tmp_path):
    """A private copy of the bundled configs, repository list and corpus."""
    shutil.copytree(DATA, tmp_path / "data")
    return tmp_path


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """``with criterion(n, title, budget):`` times a block and records PASS or FAIL."""
    results = request.config.stash.setdefault(ACCEPTANCE, [])

    @contextmanager
    def timed(number: int, title: str, budget: float | None = None):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed >= budget:
                raise AssertionError(f"took {elapsed:.2f}s, budget is {budget}s")
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            first = (str(exc).splitlines() or [type(exc).__name__])[0]
            results.append((number, f"criterion {number} FAIL  {title} ({elapsed:.2f}s): {first[:120]}"))
            raise
        results.append((number, f"criterion {number} PASS  {title} ({elapsed:.2f}s)"))

    return timed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(results):
            terminalreporter.write_line(line)
