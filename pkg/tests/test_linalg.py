import numpy as np
import pytest

from coherence_ledger import linalg, supplemental_rho
from coherence_ledger.errors import NonHermitianError, NotPSDError

from conftest import random_hermitian


def char_poly_roots(a: np.ndarray) -> np.ndarray:
    """Independent eigenvalue oracle: Faddeev-LeVerrier characteristic
    polynomial coefficients from traces of powers, then companion roots."""
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = a @ m
        coeffs[k] = -np.trace(m) / k
        m += coeffs[k] * np.eye(n)
    return np.sort(np.roots(coeffs).real)


def test_eigh_identity():
    es = linalg.eigh(np.eye(2))
    assert np.allclose(es.eigenvalues, [1.0, 1.0])


def test_eigh_pauli_x():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    es = linalg.eigh(sx)
    assert np.allclose(es.eigenvalues, [-1.0, 1.0])
    # eigenvectors are (|0> -+ |1>)/sqrt2 up to phase
    for col, sign in ((0, -1.0), (1, 1.0)):
        v = es.eigenvectors[:, col]
        v = v / v[0]
        assert np.allclose(v, [1.0, sign])


def test_eigh_example_state_vs_char_poly():
    a = supplemental_rho().matrix
    es = linalg.eigh(a)
    oracle = char_poly_roots(a)
    assert np.allclose(es.eigenvalues, oracle, atol=1e-10)
    assert abs(es.eigenvalues.sum() - 1.0) < 1e-12
    assert np.all(np.abs(es.eigenvalues.imag) == 0.0) if np.iscomplexobj(es.eigenvalues) else True


@pytest.mark.parametrize("dim", [2, 3, 8, 17, 64])
def test_eigh_reconstruction_and_orthonormality(dim):
    rng = np.random.default_rng(dim)
    a = random_hermitian(rng, dim)
    es = linalg.eigh(a)
    scale = 1.0 + float(np.max(np.abs(a)))
    assert np.max(np.abs(es.reconstruct() - a)) <= 1e-10 * scale
    u = es.eigenvectors
    assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) <= 1e-10
    assert np.all(np.diff(es.eigenvalues) >= 0)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        linalg.eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_mat_pow_examples():
    assert np.allclose(linalg.mat_pow(np.eye(2), 0.5), np.eye(2))
    assert np.allclose(linalg.mat_pow(np.diag([4.0, 1.0]), 0.5), np.diag([2.0, 1.0]))
    # alpha = 0 gives the support projector; full support here
    assert np.allclose(linalg.mat_pow(np.diag([0.3, 0.7]), 0.0), np.eye(2))


def test_mat_pow_support_projector_rank_deficient():
    p = np.diag([0.0, 1.0])
    assert np.allclose(linalg.mat_pow(p, 0.0), np.diag([0.0, 1.0]))


def test_mat_pow_identity_and_semigroup():
    rng = np.random.default_rng(5)
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    a = g @ g.conj().T
    assert np.max(np.abs(linalg.mat_pow(a, 1.0) - a)) <= 1e-9 * np.max(np.abs(a))
    prod = linalg.mat_pow(a, 0.3) @ linalg.mat_pow(a, 0.7)
    assert np.max(np.abs(prod - a)) <= 1e-9 * np.max(np.abs(a))


def test_mat_pow_rejects_indefinite():
    with pytest.raises(NotPSDError):
        linalg.mat_pow(np.diag([1.0, -0.5]), 0.5)


def test_tensor_trace_dagger():
    assert np.allclose(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert linalg.trace(np.diag([0.2, 0.8])) == pytest.approx(1.0)
    sz = np.diag([1.0, -1.0])
    w = np.linalg.eigvalsh(linalg.tensor(sz, np.eye(2)))
    assert np.allclose(w, [-1.0, -1.0, 1.0, 1.0])
    m = np.array([[1.0, 2.0 + 1j], [0.0, 3.0]])
    assert np.allclose(linalg.dagger(m), m.conj().T)


def test_trace_of_tensor_factorizes():
    rng = np.random.default_rng(11)
    a = random_hermitian(rng, 3)
    b = random_hermitian(rng, 4)
    lhs = linalg.trace(linalg.tensor(a, b))
    rhs = linalg.trace(a) * linalg.trace(b)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))
