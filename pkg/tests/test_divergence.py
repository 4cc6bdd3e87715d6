import math

import numpy as np
import pytest

from coherence_ledger import (
    CompositeSystem,
    classical_renyi,
    coherent_gibbs,
    dephase_blocks,
    dephase_full,
    dicke,
    free_energy,
    free_energy_correlation,
    ghz,
    gibbs,
    kl_divergence,
    pure_state_work_criterion,
    qubit_system,
    renyi_divergence,
    supplemental_rho,
    supplemental_sigma,
    thermomajorization_curve,
    thermomajorizes,
    two_qubit_psi,
    w_coh,
    w_incoh,
    w_tot,
    work_distance,
)
from coherence_ledger import divergence
from coherence_ledger.errors import (
    BadAlphaError,
    NotBlockDiagonalError,
    NotPureError,
)
from coherence_ledger.states import (
    QuantumState,
    dense,
    random_mixed_state,
    random_pure_state,
)


# ---------------------------------------------------------------------------
# classical and quantum Renyi divergences
# ---------------------------------------------------------------------------

def test_renyi_zero_on_equal_states():
    rng = np.random.default_rng(1)
    rho = random_mixed_state(qubit_system(2), rng)
    for a in (0.0, 0.3, 2.0, 7.5, math.inf):
        assert abs(renyi_divergence(rho, rho, a)) < 1e-9
    assert abs(kl_divergence(rho, rho)) < 1e-9


def test_classical_alpha2_frozen_value():
    # sum p^2/q = 0.25/0.25 + 0.25/0.75 = 4/3, so S_2 = log(4/3)
    p = np.array([0.5, 0.5])
    q = np.array([0.25, 0.75])
    assert classical_renyi(p, q, 2.0) == pytest.approx(math.log(4.0 / 3.0), abs=1e-14)
    # quantum path on commuting diagonals agrees
    sys_ = CompositeSystem(((0.0, 1.0),))
    rho = dense(sys_, np.diag(p))
    sig = dense(sys_, np.diag(q))
    assert renyi_divergence(rho, sig, 2.0) == pytest.approx(math.log(4.0 / 3.0), abs=1e-12)


def test_large_alpha_approaches_max_divergence():
    p = np.array([0.5, 0.5])
    q = np.array([0.25, 0.75])
    closed = math.log(np.max(p / q))
    assert classical_renyi(p, q, math.inf) == pytest.approx(closed, abs=1e-14)
    assert abs(classical_renyi(p, q, 1000.0) - closed) < 5e-3
    sys_ = CompositeSystem(((0.0, 1.0),))
    rho, sig = dense(sys_, np.diag(p)), dense(sys_, np.diag(q))
    assert renyi_divergence(rho, sig, math.inf) == pytest.approx(closed, abs=1e-12)
    assert abs(renyi_divergence(rho, sig, 1000.0) - closed) < 5e-3


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.9, 1.0, 1.5, 3.0, 10.0])
def test_quantum_matches_classical_on_commuting_states(alpha):
    rng = np.random.default_rng(42)
    p = rng.dirichlet(np.ones(5))
    q = rng.dirichlet(np.ones(5))
    sys_ = CompositeSystem(((0.0, 1.0, 2.0, 3.0, 4.0),))
    rho, sig = dense(sys_, np.diag(p)), dense(sys_, np.diag(q))
    quantum = kl_divergence(rho, sig) if alpha == 1.0 else renyi_divergence(rho, sig, alpha)
    assert quantum == pytest.approx(classical_renyi(p, q, alpha), abs=1e-9)


def test_support_violation_gives_infinity():
    sys_ = CompositeSystem(((0.0, 1.0),))
    rho = dense(sys_, np.diag([1.0, 0.0]))
    sig = dense(sys_, np.diag([0.0, 1.0]))
    assert renyi_divergence(rho, sig, 2.0) == math.inf
    assert kl_divergence(rho, sig) == math.inf


def test_renyi_nonnegative_and_faithful():
    rng = np.random.default_rng(7)
    sys_ = qubit_system(2)
    rho = random_mixed_state(sys_, rng)
    sig = random_mixed_state(sys_, rng)
    for a in (0.3, 0.7, 2.0, 5.0):
        assert renyi_divergence(rho, sig, a) > 1e-4
        assert renyi_divergence(rho, rho, a) < 1e-9


def test_bad_alpha():
    rho = dicke(2, 1)
    with pytest.raises(BadAlphaError):
        renyi_divergence(rho, rho, -0.5)
    with pytest.raises(BadAlphaError):
        renyi_divergence(rho, rho, 1.0)


# ---------------------------------------------------------------------------
# free energies
# ---------------------------------------------------------------------------

def test_free_energy_of_gibbs_state_is_minus_log_z():
    sys_ = CompositeSystem(((0.0, 1.0), (0.0, 0.6)))
    g = gibbs(sys_, 1.3)
    gamma = dense(sys_, np.diag(g.weights))
    for a in (0.0, 0.5, 1.0, 2.0, 17.0, math.inf):
        assert free_energy(gamma, g, a) == pytest.approx(-g.log_z, abs=1e-9)


def test_free_energy_pure_excited_state_is_constant():
    # single support point: F_alpha = beta * omega0 for every alpha
    beta, omega0 = 1.7, 1.0
    sys_ = qubit_system(1, omega0)
    g = gibbs(sys_, beta)
    excited = dense(sys_, np.diag([0.0, 1.0]))
    for a in (0.0, 0.4, 1.0, 3.0, math.inf):
        assert free_energy(excited, g, a) == pytest.approx(beta * omega0, abs=1e-9)


def test_free_energy_max_order_block_diagonal_formula():
    # F_inf of a block-diagonal state equals log max_i lambda_i e^{beta E_i}
    rng = np.random.default_rng(12)
    sys_ = qubit_system(2)
    g = gibbs(sys_, 0.9)
    rho = dephase_blocks(random_pure_state(sys_, rng))
    lam = []
    for e_b, idx in zip(sys_.blocks.energies, sys_.blocks.members):
        w = np.linalg.eigvalsh(rho.matrix[np.ix_(idx, idx)])
        lam.extend((wi, e_b) for wi in w if wi > 1e-12)
    expected = max(math.log(wi) + g.beta * e for wi, e in lam)
    assert free_energy(rho, g, math.inf) == pytest.approx(expected, abs=1e-9)


def test_dephasing_monotonicity_of_free_energy():
    rng = np.random.default_rng(3)
    sys_ = qubit_system(2)
    g = gibbs(sys_, 1.0)
    alphas = (0.0, 0.2, 0.7, 1.0, 1.5, 3.0, 20.0)
    for i in range(100):
        rho = random_pure_state(sys_, np.random.default_rng(1000 + i))
        d, pi = dephase_blocks(rho), dephase_full(rho)
        for a in alphas:
            f_rho = free_energy(rho, g, a)
            f_d = free_energy(d, g, a)
            f_pi = free_energy(pi, g, a)
            assert f_rho >= f_d - 1e-9
            assert f_d >= f_pi - 1e-9


# ---------------------------------------------------------------------------
# work quantities
# ---------------------------------------------------------------------------

def test_w_coh_dicke_and_ghz():
    for n, k in ((2, 1), (4, 2), (6, 3)):
        rho = dicke(n, k)
        g = gibbs(rho.system, 1.0)
        w, scan = w_coh(rho, g)
        assert w == pytest.approx(math.log(math.comb(n, k)), abs=1e-9)
        assert scan.value <= scan.values.min() + 1e-15
    rho = ghz(5)
    assert w_coh(rho, gibbs(rho.system, 1.0))[0] <= 1e-9


def test_w_coh_depends_only_on_block_dephased_state():
    rng = np.random.default_rng(8)
    sys_ = qubit_system(3)
    g = gibbs(sys_, 1.0)
    rho = random_pure_state(sys_, rng)
    w1, _ = w_coh(rho, g)
    w2, _ = w_coh(dephase_blocks(rho), g)
    assert w1 == pytest.approx(w2, abs=1e-12)


def test_w_coh_nonnegative_on_random_states():
    for i in range(50):
        rng = np.random.default_rng(i)
        rho = random_mixed_state(qubit_system(2), rng)
        g = gibbs(rho.system, 1.0)
        assert w_coh(rho, g)[0] >= 0.0


def test_w_incoh_closed_form():
    # w_incoh = F_0(dephased) + log Z
    rng = np.random.default_rng(21)
    sys_ = qubit_system(2)
    g = gibbs(sys_, 1.2)
    for i in range(20):
        rho = random_mixed_state(sys_, np.random.default_rng(300 + i))
        closed = free_energy(dephase_full(rho), g, 0.0) + g.log_z
        assert w_incoh(rho, g) == pytest.approx(closed, abs=1e-9)


def test_w_incoh_pure_ground_state():
    sys_ = qubit_system(1)
    g = gibbs(sys_, 1.0)
    ground = dense(sys_, np.diag([1.0, 0.0]))
    assert w_incoh(ground, g) == pytest.approx(g.log_z, abs=1e-12)


def test_work_quantities_vanish_on_gibbs_state():
    sys_ = qubit_system(2)
    g = gibbs(sys_, 1.0)
    gamma = dense(sys_, np.diag(g.weights))
    assert w_coh(gamma, g)[0] == pytest.approx(0.0, abs=1e-9)
    assert w_incoh(gamma, g) == pytest.approx(0.0, abs=1e-9)
    assert w_tot(gamma, g) == pytest.approx(0.0, abs=1e-9)


def test_work_budget_and_dicke_equality():
    # w_coh + w_incoh <= w_tot, equality when the infimum sits at alpha = 0
    rho = dicke(2, 1)
    g = gibbs(rho.system, 1.0)
    wc, _ = w_coh(rho, g)
    wi = w_incoh(rho, g)
    wt = w_tot(rho, g)
    assert wc + wi <= wt + 1e-9
    assert wc + wi == pytest.approx(wt, abs=1e-9)
    # oracle: on the Dicke state the budget is beta*omega0 + log Z
    assert wt == pytest.approx(1.0 + g.log_z, abs=1e-9)
    for i in range(25):
        rho = random_pure_state(qubit_system(2), np.random.default_rng(i))
        assert w_coh(rho, g)[0] + w_incoh(rho, g) <= w_tot(rho, g) + 1e-9


def test_work_distance_requires_block_diagonal():
    psi = two_qubit_psi(0.2, 0.5, 0.3)
    g = gibbs(psi.system, 1.0)
    with pytest.raises(NotBlockDiagonalError):
        work_distance(psi, dephase_full(psi), g)


def test_scan_endpoints_and_infimum_invariant():
    rho = two_qubit_psi(0.1, 0.8, 0.1)
    g = gibbs(rho.system, 1.0)
    value, scan = w_coh(rho, g)
    assert value <= scan.values.min() + 1e-12
    assert value <= scan.value_at_inf + 1e-12
    assert scan.alphas[0] == 0.0
    assert 1.0 in scan.alphas


# ---------------------------------------------------------------------------
# pure-state criterion
# ---------------------------------------------------------------------------

def test_criterion_sufficient_and_necessary_regions():
    beta = 1.0
    suf = math.exp(beta) / (1.0 + math.exp(beta))
    nec = 1.0 / (1.0 + math.exp(beta) + math.exp(-beta))
    g = gibbs(qubit_system(2), beta)

    p1 = suf + 0.05
    psi = two_qubit_psi((1 - p1) / 2, p1, (1 - p1) / 2)
    assert pure_state_work_criterion(psi, g).extractable

    p1 = nec / 2
    psi = two_qubit_psi((1 - p1) / 2, p1, (1 - p1) / 2)
    assert not pure_state_work_criterion(psi, g).extractable


def test_criterion_ghz_false():
    rho = ghz(4)
    g = gibbs(rho.system, 1.0)
    res = pure_state_work_criterion(rho, g)
    assert not res.extractable


def test_criterion_rejects_mixed_states():
    rng = np.random.default_rng(4)
    rho = random_mixed_state(qubit_system(2), rng)
    g = gibbs(rho.system, 1.0)
    with pytest.raises(NotPureError):
        pure_state_work_criterion(rho, g)


def test_criterion_matches_w_coh_sign_on_grid():
    # smaller companion of the acceptance sweep
    for beta in (0.5, 2.0):
        g = gibbs(qubit_system(2), beta)
        for p1 in np.linspace(0.05, 0.95, 19):
            psi = two_qubit_psi((1 - p1) / 2, p1, (1 - p1) / 2)
            crit = pure_state_work_criterion(psi, g)
            w, _ = w_coh(psi, g)
            assert crit.extractable == (w > 1e-9)


# ---------------------------------------------------------------------------
# free-energy correlation
# ---------------------------------------------------------------------------

def test_correlation_vanishes_for_product_states_at_alpha_one():
    sys1 = qubit_system(1)
    rng = np.random.default_rng(19)
    a = random_mixed_state(sys1, rng)
    b = random_mixed_state(sys1, rng)
    prod = QuantumState(qubit_system(2), np.kron(a.matrix, b.matrix))
    g = gibbs(prod.system, 1.0)
    assert free_energy_correlation(prod, g, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_correlation_difference_gives_w_coh_for_dicke():
    rho = dicke(2, 1)
    g = gibbs(rho.system, 1.0)
    d, pi = dephase_blocks(rho), dephase_full(rho)
    diff = free_energy_correlation(d, g, 1.0) - free_energy_correlation(pi, g, 1.0)
    assert diff == pytest.approx(math.log(2.0), abs=1e-9)


def test_correlation_infimum_equals_w_coh():
    # nondegenerate local spectra: local free energies cancel in the gap
    rho = two_qubit_psi(0.15, 0.7, 0.15)
    g = gibbs(rho.system, 1.0)
    d, pi = dephase_blocks(rho), dephase_full(rho)
    w, scan = w_coh(rho, g)
    gaps = [free_energy_correlation(d, g, a) - free_energy_correlation(pi, g, a)
            for a in (0.0, 0.5, 1.0, float(scan.alpha_star) if math.isfinite(scan.alpha_star) else 5.0)]
    assert min(gaps) >= w - 1e-8
    assert any(abs(gap - w) < 1e-6 for gap in gaps) or min(gaps) >= w


# ---------------------------------------------------------------------------
# asymmetry measures
# ---------------------------------------------------------------------------

def test_asymmetry_zero_for_block_diagonal():
    rng = np.random.default_rng(23)
    rho = dephase_blocks(random_mixed_state(qubit_system(2), rng))
    for a in (0.3, 0.5, 2.0):
        assert divergence.asymmetry_entropy(rho, a) == pytest.approx(0.0, abs=1e-9)
    modes = divergence.asymmetry_modes(rho)
    for omega, amp in modes.items():
        if omega > 0:
            assert amp == pytest.approx(0.0, abs=1e-12)


def test_asymmetry_modes_of_example_states():
    modes_rho = divergence.asymmetry_modes(supplemental_rho())
    modes_sig = divergence.asymmetry_modes(supplemental_sigma())
    for omega in (1.0, 2.0, 3.0):
        assert modes_rho[omega] == pytest.approx(0.1, abs=1e-12)
        assert modes_sig[omega] == pytest.approx(0.099, abs=1e-12)


def test_asymmetry_positive_for_coherent_state():
    rho = supplemental_rho()
    for a in (0.5, 2.0):
        assert divergence.asymmetry_entropy(rho, a) > 1e-3


# ---------------------------------------------------------------------------
# thermomajorization
# ---------------------------------------------------------------------------

def test_gibbs_curve_is_diagonal():
    sys_ = qubit_system(2)
    g = gibbs(sys_, 1.0)
    gamma = dense(sys_, np.diag(g.weights))
    curve = thermomajorization_curve(gamma, g)
    assert np.allclose(curve[:, 0], curve[:, 1], atol=1e-12)
    assert curve[0].tolist() == [0.0, 0.0]
    assert np.allclose(curve[-1], [1.0, 1.0], atol=1e-12)


def test_curves_are_concave_lorenz():
    psi = two_qubit_psi(0.2, 0.6, 0.2)
    g = gibbs(psi.system, 1.0)
    curve = thermomajorization_curve(dephase_blocks(psi), g)
    slopes = np.diff(curve[:, 1]) / np.diff(curve[:, 0])
    assert np.all(np.diff(slopes) <= 1e-9)


def test_domination_when_middle_block_wins():
    beta = 1.0
    suf = math.exp(beta) / (1.0 + math.exp(beta))
    psi = two_qubit_psi((1 - suf) / 2 - 0.05, suf + 0.1, (1 - suf) / 2 - 0.05)
    g = gibbs(psi.system, beta)
    d, pi = dephase_blocks(psi), dephase_full(psi)
    assert thermomajorizes(d, pi, g)
    assert not divergence.curves_equal(d, pi, g)
    # the elbow gap is strictly positive exactly when work is extractable
    assert w_coh(psi, g)[0] > 1e-6


def test_curves_meet_when_top_block_wins():
    # choose p2 e^{2 beta} maximal: curves share the first elbow, no work
    beta = 1.0
    psi = two_qubit_psi(0.2, 0.2, 0.6)
    g = gibbs(psi.system, beta)
    d, pi = dephase_blocks(psi), dephase_full(psi)
    assert thermomajorizes(d, pi, g)
    assert w_coh(psi, g)[0] <= 1e-9
    c_d = thermomajorization_curve(d, g)
    c_pi = thermomajorization_curve(pi, g)
    # both curves start along the same maximal-ratio segment
    assert c_d[1].tolist() == pytest.approx(c_pi[1].tolist(), abs=1e-12)


def test_mutual_majorization_iff_equal_curves():
    psi = two_qubit_psi(0.2, 0.6, 0.2)
    g = gibbs(psi.system, 1.0)
    d, pi = dephase_blocks(psi), dephase_full(psi)
    assert thermomajorizes(d, d, g) and divergence.curves_equal(d, d, g)
    assert thermomajorizes(d, pi, g) and not thermomajorizes(pi, d, g)


def test_thermomajorization_rejects_coherent_states():
    psi = two_qubit_psi(0.2, 0.6, 0.2)
    g = gibbs(psi.system, 1.0)
    with pytest.raises(NotBlockDiagonalError):
        thermomajorization_curve(psi, g)
