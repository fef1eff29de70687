import itertools

import pytest

from qhjspectra.potentials import Hartmann, QuantumNumbers, RingOscillator, UnitSystem

# the acceptance grid shared by the oracle, contour and CLI criteria
GRID_BETAS = (0.0, 0.5, 3.0)
GRID_POTENTIALS = tuple(
    [Hartmann(alpha, beta) for alpha in (-1.0, -2.0) for beta in GRID_BETAS]
    + [RingOscillator(alpha, beta) for alpha in (1.0, 4.0) for beta in GRID_BETAS]
)
GRID_LEVELS = tuple(QuantumNumbers(nr, nt, m) for nr, nt, m in itertools.product(range(3), repeat=3))

ACCEPTANCE_LINES = []


@pytest.fixture
def units():
    return UnitSystem(1.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
