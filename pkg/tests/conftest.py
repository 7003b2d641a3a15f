"""Collects acceptance results and prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import pytest

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record ``(criterion id, title, passed, detail)`` for the terminal summary."""

    def record(cid: str, title: str, passed: bool, detail: str):
        request.config.stash[ACCEPTANCE].append((cid, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(ACCEPTANCE, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, passed, detail in sorted(rows, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {cid:>2}: {title} | {detail}")
    n_pass = sum(r[2] for r in rows)
    terminalreporter.write_line(f"{n_pass}/{len(rows)} criteria passed")
