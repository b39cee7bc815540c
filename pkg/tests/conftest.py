import numpy as np
import pytest


def random_row(rng, k, low=-1.0, high=1.0):
    """Random valid wavejet row of order ``k`` (parity zeros, real phi_{k,0})."""
    row = np.zeros(k + 1, dtype=complex)
    for n in range(k % 2, k + 1, 2):
        re = rng.uniform(low, high)
        im = 0.0 if n == 0 else rng.uniform(low, high)
        row[n] = complex(re, im)
    return row


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = [value for key in ("passed", "failed") for rep in terminalreporter.stats.get(key, [])
             if rep.when == "call" for name, value in rep.user_properties if name == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
