import functools

import pytest
from hypothesis import settings

import montesinos_tori.cli as cli
from montesinos_tori import classifier

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


_memo = functools.lru_cache(maxsize=None)(classifier.census)


def _census(max_den, exclusions=classifier.DEFAULT_EXCLUSIONS, workers=1):
    # positional arguments only, so every call shape shares one cache entry
    return _memo(max_den, exclusions)


@pytest.fixture(autouse=True)
def shared_census(monkeypatch):
    """One census computation per (max_den, exclusions) for the whole session."""
    monkeypatch.setattr(cli, "census", _census)
    return _census


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
