import sys
from pathlib import Path

import numpy as np
import pytest

from stpbayes import from_vectors, load_game

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def ex33():
    return load_game(FIXTURES / "example33.game")


@pytest.fixture(scope="session")
def ex45():
    return load_game(FIXTURES / "example45.game")


@pytest.fixture(scope="session")
def ex54():
    return load_game(FIXTURES / "example54.game")


@pytest.fixture(scope="session")
def ex71():
    return load_game(FIXTURES / "example71.game")


def at_game_from_params(alpha, beta, prior=(0.2, 0.3, 0.4, 0.1)):
    """2x2 types, 2x2 actions game whose Action-Type rows are exactly ``alpha`` and ``beta``.

    Player 1's payoff only depends on its own type, player 2's only on its own,
    so each conditional expectation returns the parameter unchanged.
    """
    al = np.asarray(alpha, dtype=float)
    be = np.asarray(beta, dtype=float)
    v1 = np.concatenate([al[:4], al[:4], al[4:], al[4:]])
    v2 = np.concatenate([be[:4], be[4:], be[:4], be[4:]])
    return from_vectors((2, 2), (2, 2), [v1, v2], prior)


@pytest.fixture
def at_game():
    return at_game_from_params


# one line per acceptance criterion, filled in by tests/test_acceptance.py
CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        label, ok = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n} ({label}): {'PASS' if ok else 'FAIL'}")
