import math

import numpy as np
import pytest

from coherence_ledger import (
    CompositeSystem,
    classical_data,
    coherent_gibbs,
    dephase_blocks,
    dephase_full,
    dicke,
    gibbs,
    ghz,
    qubit_system,
    reduced_state,
    supplemental_rho,
    supplemental_sigma,
    tensor_power,
    two_qubit_psi,
    uniform_superposition,
)
from coherence_ledger.errors import BadParamsError, NonHermitianError, NotPSDError
from coherence_ledger.states import (
    QuantumState,
    dense,
    is_block_diagonal,
    pure_state,
    random_mixed_state,
    random_pure_state,
)


def test_dephase_full_two_qubit_psi():
    p0, p1, p2 = 0.2, 0.5, 0.3
    psi = two_qubit_psi(p0, p1, p2)
    pi = dephase_full(psi)
    assert np.allclose(np.diag(pi.matrix), [p0, p1 / 2, p1 / 2, p2])
    assert np.allclose(pi.matrix, np.diag(np.diag(pi.matrix)))
    # idempotent on a diagonal state
    assert np.allclose(dephase_full(pi).matrix, pi.matrix)


def test_dephase_blocks_keeps_internal_coherence():
    psi = two_qubit_psi(0.2, 0.5, 0.3)
    d = dephase_blocks(psi)
    assert d.matrix[1, 2] == pytest.approx(0.25)   # |01><10| survives
    assert d.matrix[0, 3] == 0.0                   # |00><11| dies
    assert d.matrix[0, 1] == 0.0
    assert np.allclose(dephase_blocks(d).matrix, d.matrix)


def test_dephase_blocks_equals_full_for_nondegenerate_spectrum():
    sys_ = CompositeSystem(((0.0, 1.0, 2.5),))
    rng = np.random.default_rng(3)
    rho = random_mixed_state(sys_, rng)
    assert np.allclose(dephase_blocks(rho).matrix, dephase_full(rho).matrix)


def test_coherent_gibbs_dephases_to_gibbs():
    sys_ = CompositeSystem(((0.0, 0.7, 1.9),))
    beta = 1.1
    rho = coherent_gibbs(sys_, beta)
    g = gibbs(sys_, beta)
    assert np.allclose(dephase_blocks(rho).matrix, np.diag(g.weights), atol=1e-12)


def test_ghz_dephases_to_two_point_mixture():
    rho = ghz(3)
    d = dephase_blocks(rho)
    expected = np.zeros((8, 8))
    expected[0, 0] = expected[7, 7] = 0.5
    assert np.allclose(d.matrix, expected)


def test_projection_composition_is_exact():
    rng = np.random.default_rng(17)
    rho = random_pure_state(qubit_system(3), rng)
    lhs = dephase_full(dephase_blocks(rho)).matrix
    rhs = dephase_full(rho).matrix
    assert np.array_equal(lhs, rhs)


def test_dicke_21_is_two_qubit_psi():
    assert np.allclose(dicke(2, 1).matrix, two_qubit_psi(0.0, 1.0, 0.0).matrix)


def test_dicke_normalization_and_purity():
    for n, k in ((4, 0), (4, 2), (5, 3)):
        rho = dicke(n, k)
        m = rho.matrix
        assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(m @ m).real == pytest.approx(1.0, abs=1e-12)


def test_supplemental_states_entries():
    rho = supplemental_rho()
    assert rho.matrix[0, 0] == 0.5
    assert rho.matrix[0, 2] == 0.1
    assert rho.matrix[1, 1] == 0.2
    sig = supplemental_sigma()
    assert sig.matrix[0, 1] == 0.099
    assert sig.system.local_spectra == ((0.0, 1.0, 2.0, 3.0),)


def test_coherent_gibbs_low_temperature_limit():
    sys_ = qubit_system(1)
    rho = coherent_gibbs(sys_, 60.0)
    assert rho.matrix[0, 0].real == pytest.approx(1.0, abs=1e-12)


def test_classical_data_ghz3():
    data = classical_data(ghz(3))
    assert np.allclose(data.block_probs, [0.5, 0.0, 0.0, 0.5])


def test_classical_data_two_qubit_psi():
    data = classical_data(two_qubit_psi(0.15, 0.55, 0.3))
    assert np.allclose(data.block_probs, [0.15, 0.55, 0.3])


def test_classical_data_invariant_under_dephasings():
    rng = np.random.default_rng(5)
    rho = random_pure_state(qubit_system(3), rng)
    base = classical_data(rho)
    for mapped in (dephase_full(rho), dephase_blocks(rho)):
        data = classical_data(mapped)
        assert np.allclose(data.basis_probs, base.basis_probs, atol=1e-14)


def test_reduced_state_of_product_state():
    sys1 = CompositeSystem(((0.0, 1.0),))
    rng = np.random.default_rng(9)
    a = random_mixed_state(sys1, rng)
    b = random_mixed_state(sys1, rng)
    sys2 = qubit_system(2)
    prod = QuantumState(sys2, np.kron(a.matrix, b.matrix))
    assert np.allclose(reduced_state(prod, 0).matrix, a.matrix, atol=1e-12)
    assert np.allclose(reduced_state(prod, 1).matrix, b.matrix, atol=1e-12)


def test_tensor_power_builds_composite_system():
    rho = tensor_power(coherent_gibbs(qubit_system(1), 1.0), 3)
    assert rho.system.n_subsystems == 3
    assert rho.dim == 8
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-10)


def test_uniform_superposition_catalyst():
    rho = uniform_superposition(range(5))
    assert rho.dim == 5
    assert np.allclose(np.diag(rho.matrix), 0.2)


def test_validation_errors():
    sys_ = qubit_system(1)
    with pytest.raises(NonHermitianError):
        dense(sys_, np.array([[0.5, 0.4], [0.0, 0.5]]))
    with pytest.raises(BadParamsError):
        dense(sys_, np.eye(2))  # trace 2
    with pytest.raises(NotPSDError):
        dense(sys_, np.array([[1.2, 0.0], [0.0, -0.2]]))
    with pytest.raises(BadParamsError):
        two_qubit_psi(0.5, 0.2, 0.1)
    with pytest.raises(BadParamsError):
        dicke(3, 4)


def test_pure_constructors_are_rank_one():
    rng = np.random.default_rng(2)
    for rho in (ghz(4), dicke(5, 2), random_pure_state(qubit_system(2), rng)):
        w = np.linalg.eigvalsh(rho.matrix)
        assert w[-1] == pytest.approx(1.0, abs=1e-12)


def test_is_block_diagonal():
    psi = two_qubit_psi(0.2, 0.5, 0.3)
    assert not is_block_diagonal(psi)
    assert is_block_diagonal(dephase_blocks(psi))
