"""Shared fixtures and the acceptance-criteria terminal report."""

from __future__ import annotations

import numpy as np
import pytest

# (criterion id, description, passed, detail), collected by test_acceptance.
ACCEPTANCE_RECORDS: list[tuple[str, str, bool, str]] = []


def record_criterion(cid: str, description: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RECORDS.append((cid, description, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RECORDS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, description, passed, detail in ACCEPTANCE_RECORDS:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {cid}: {description}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
