import numpy as np
import pytest

from zenosim import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random pure state: complex normal amplitudes, normalized."""
    dim = 1 << num_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(num_qubits, amps)
