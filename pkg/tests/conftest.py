import numpy as np
import pytest

from coherence_ledger import gibbs, qubit_system


@pytest.fixture
def two_qubits():
    return qubit_system(2)


@pytest.fixture
def two_qubit_gibbs(two_qubits):
    return gibbs(two_qubits, 1.0)


@pytest.fixture
def three_qubits():
    return qubit_system(3)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)
