import numpy as np
import pytest

from ddgate import BathTopology, DiscreteModes, Ohmic, PulseSchedule


@pytest.fixture
def ohmic():
    return Ohmic(1.0, 30.0)


@pytest.fixture
def one_mode():
    return DiscreteModes((2.0,), (37.0,))


@pytest.fixture
def udd8():
    return PulseSchedule.udd(8, 0.016)


@pytest.fixture
def three_baths():
    return BathTopology(Ohmic(100.0, 30.0), None, Ohmic(100.0, 30.0), Ohmic(100.0, 30.0))


def random_density(rng, rank=None):
    """Random 4x4 density matrix of the given rank (full by default)."""
    rank = rank or 4
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary and echo it."""
    def _report(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
