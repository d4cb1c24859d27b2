from pathlib import Path

import pytest

import acceptance_log
from refclass.kb import load_kb

KB_DIR = Path(__file__).resolve().parent.parent / "kbs"

@pytest.fixture
def kb_path():
    return lambda name: KB_DIR / name


@pytest.fixture
def load():
    return lambda name, **kw: load_kb(KB_DIR / name, **kw)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda l: int(l.split()[1][2:])):
            terminalreporter.write_line(line)
