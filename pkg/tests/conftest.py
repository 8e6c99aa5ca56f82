import pytest

from fxtbarrier.harness import run_comparison
from fxtbarrier.sim import ScenarioConfig

# criterion id -> (title, passed, detail)
_ACCEPTANCE = {}


class AcceptanceLog:
    def record(self, cid, title, passed, detail=""):
        prev = _ACCEPTANCE.get(cid)
        if prev is not None:
            passed = passed and prev[1]
            detail = f"{prev[2]}; {detail}" if prev[2] else detail
        _ACCEPTANCE[cid] = (title, bool(passed), detail)
        return bool(passed)


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


@pytest.fixture(scope="session")
def default_config():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def comparison(default_config):
    """The six-variant benchmark on the default scenario, shared by every test that needs it."""
    return run_comparison(default_config)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[cid]
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] {cid:>2}. {title}: {detail}")
