import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from binomcrn.network import DegenerateReactionWarning, parse_network  # noqa: E402

CHAIN3 = "A + B <=> C <=> A + 2 D"
CHAIN4 = "2 A + B <=> C <=> A <=> 2 B"
CYCLE3 = "3 B <=> 2 C + A <=> 2 D + 2 B <=> 3 B"
GOLDEN = Path(__file__).parent / "golden"


def parse_quiet(text, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateReactionWarning)
        return parse_network(text, **kw)


@pytest.fixture
def chain3():
    return parse_network(CHAIN3)


@pytest.fixture
def chain4():
    return parse_network(CHAIN4)


@pytest.fixture
def cycle3():
    return parse_network(CYCLE3)


ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
