import functools
import json
from pathlib import Path

import pytest

from eqpoincare.group_core import load_group

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "eqpoincare" / "fixtures"

ACCEPTANCE_LINES: dict[str, str] = {}


@functools.lru_cache(maxsize=None)
def group(name: str):
    return load_group(json.loads((FIXTURES / "groups" / f"{name}.json").read_text()))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split(".")[0]), k)):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
