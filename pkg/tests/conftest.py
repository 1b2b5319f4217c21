from __future__ import annotations

import os
from collections import OrderedDict

import pytest

# criterion number -> list of (ok, detail); filled by the acceptance tests
ACCEPTANCE: "OrderedDict[int, list[tuple[bool, str]]]" = OrderedDict()

SAMPLES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "samples")


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def samples_dir() -> str:
    return SAMPLES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p for p, _ in parts)
        detail = "; ".join(("" if p else "FAILED: ") + d for p, d in parts)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
