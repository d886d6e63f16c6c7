import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sasaki import lattices  # noqa: E402
from sasaki.oml import validate_oml  # noqa: E402

OML_NAMES = ("chain2", "boolean4", "boolean8", "boolean16", "mo2", "mo3", "mo4")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def bundled():
    """Validated bundled OMLs, keyed by name."""
    return {name: validate_oml(lattices.load_bundled(name)) for name in OML_NAMES}


@pytest.fixture(scope="session")
def mo2(bundled):
    return bundled["mo2"]


@pytest.fixture(scope="session")
def b8(bundled):
    return bundled["boolean8"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
