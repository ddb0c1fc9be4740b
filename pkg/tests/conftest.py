import numpy as np
import pytest

from sepdist.dur_states import sample_params

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def samples_100():
    return sample_params(7, 100)


@pytest.fixture(scope="session")
def samples_1000():
    return sample_params(11, 1000)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
