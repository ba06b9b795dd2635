import numpy as np
import pytest

from qherm import models
from qherm.linalg import eig_general, eig_hermitian

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def morse_params():
    return models.MorseParams(3.0, 4.0, 2.0)


@pytest.fixture(scope="session")
def morse_complex_matrix(morse_params):
    return models.complex_morse(models.default_morse_grid(), morse_params)


@pytest.fixture(scope="session")
def morse_complex_spectrum(morse_complex_matrix):
    # the expensive dense solve (about half a minute), shared by all tests
    return eig_general(morse_complex_matrix.matrix)


@pytest.fixture(scope="session")
def morse_real_spectrum(morse_params):
    H = models.real_morse(models.default_morse_grid(), morse_params)
    return eig_hermitian(H.matrix, vectors=False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
