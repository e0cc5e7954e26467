import numpy as np
import pytest

from qdiscord.states import ket_to_dm


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def bell_ket():
    return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def bell_dm():
    return ket_to_dm(bell_ket())


def werner(x):
    return x * bell_dm() + (1 - x) * np.eye(4) / 4


def random_x_state(rng):
    """Random two-qubit X state (positive by construction)."""
    a = rng.uniform(0.05, 1.0, 4)
    a /= a.sum()
    c1 = np.sqrt(a[0] * a[3]) * rng.uniform(-1, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    c2 = np.sqrt(a[1] * a[2]) * rng.uniform(-1, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho = np.diag(a).astype(complex)
    rho[0, 3], rho[3, 0] = c1, np.conj(c1)
    rho[1, 2], rho[2, 1] = c2, np.conj(c2)
    return rho
