from functools import reduce

import numpy as np
import pytest

# Independent building blocks for oracles: nothing here calls the package.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"1": I2, "x": X, "y": Y, "z": Z}

A = np.sqrt(3) / (4 * np.sqrt(2))


def kron(*ms):
    return reduce(np.kron, ms)


def po(labels):
    return kron(*(PAULI[c] for c in labels))


def basis_ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def random_hermitian(rng, dim, traceless=False):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (m + m.conj().T) / 2
    if traceless:
        h -= np.trace(h) / dim * np.eye(dim)
    return h


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    r = g @ g.conj().T
    return r / np.trace(r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ghz_deviation():
    """GHZ deviation assembled term by term from the published expansion."""
    terms = {"zz1": 1, "1zz": 1, "z1z": 1, "xxx": 1, "yyx": -1, "xyy": -1, "yxy": -1}
    return A * sum(c * po(k) for k, c in terms.items())


@pytest.fixture
def dephased_z():
    return A * (po("zz1") + po("1zz") + po("z1z"))


@pytest.fixture
def dephased_x():
    return A * (po("1zz") + po("zxx") - po("zyy"))


# PASS/FAIL lines from the acceptance suite, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
