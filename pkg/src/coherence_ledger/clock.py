"""Clock-resource quantifiers and their monotonicity audits.

The quantum Fisher information (QFI) and the skew-information family
quantify how well a state resolves free time evolution.  Both are
non-increasing under time-translation-covariant Gibbs-preserving channels,
which gives a second-law-like constraint independent of the free-energy
family; :func:`monotonicity_audit` evaluates all of these monotones for a
candidate transformation and reports which ones forbid it.

Note on the skew information: the first term is Tr(rho H^2).  Only that
choice satisfies the pure-state identity I_alpha = Var(H), which the
pure-state tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import divergence, model, states as states_mod
from .divergence import ALPHA_GRID
from .errors import (
    BadAlphaError,
    BadParamsError,
    DimensionMismatchError,
    WrongSystemShapeError,
)
from .linalg import check_hermitian
from .model import CompositeSystem, GibbsData
from .states import QuantumState, dephase_blocks

QFI_PAIR_CUTOFF = 1e-14
MONOTONE_TOL = 1e-9


def _state_matrix(rho) -> np.ndarray:
    if isinstance(rho, QuantumState):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def _hamiltonian_for(rho, h) -> np.ndarray:
    if h is None:
        if not isinstance(rho, QuantumState):
            raise BadParamsError("need an explicit Hamiltonian for bare matrices")
        return rho.system.hamiltonian
    return np.asarray(h, dtype=complex)


def _clipped_spectrum(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, u = np.linalg.eigh(m)
    return np.clip(w, 0.0, None), u


def qfi(rho, h=None) -> float:
    """Quantum Fisher information of rho for the generator H.

    2 * sum_{ij} (l_i - l_j)^2 / (l_i + l_j) |<i|H|j>|^2 over eigenpairs
    with l_i + l_j above 1e-14; pairs where both eigenvalues vanish
    contribute zero and are skipped.  H defaults to the system Hamiltonian.
    """
    m = _state_matrix(rho)
    hm = _hamiltonian_for(rho, h)
    if hm.shape != m.shape:
        raise DimensionMismatchError(
            f"H shape {hm.shape} does not match state shape {m.shape}"
        )
    check_hermitian(hm, what="H")
    w, u = _clipped_spectrum(m)
    ht = u.conj().T @ hm @ u
    den = w[:, None] + w[None, :]
    num = (w[:, None] - w[None, :]) ** 2
    mask = den > QFI_PAIR_CUTOFF
    ratio = np.zeros_like(den)
    ratio[mask] = num[mask] / den[mask]
    val = 2.0 * float(np.sum(ratio * np.abs(ht) ** 2))
    return max(val, 0.0)


def skew_information(rho, h=None, alpha: float = 0.5) -> float:
    """Skew information Tr(rho H^2) - Tr(rho^a H rho^(1-a) H), a in (0,1)."""
    if not 0.0 < alpha < 1.0:
        raise BadAlphaError("skew information needs alpha in (0, 1)")
    m = _state_matrix(rho)
    hm = _hamiltonian_for(rho, h)
    if hm.shape != m.shape:
        raise DimensionMismatchError(
            f"H shape {hm.shape} does not match state shape {m.shape}"
        )
    check_hermitian(hm, what="H")
    w, u = _clipped_spectrum(m)
    ht2 = np.abs(u.conj().T @ hm @ u) ** 2
    first = float(w @ ht2.sum(axis=1))
    cross = float((w ** alpha) @ ht2 @ (w ** (1.0 - alpha)))
    return max(first - cross, 0.0)


def variance(rho, h=None) -> float:
    """Var(H) = Tr(rho H^2) - Tr(rho H)^2."""
    m = _state_matrix(rho)
    hm = _hamiltonian_for(rho, h)
    mean = float(np.trace(m @ hm).real)
    second = float(np.trace(m @ hm @ hm).real)
    return second - mean ** 2


def pure_qfi_from_levels(energies, probabilities=None) -> float:
    """QFI of a pure superposition over orthogonal energy levels.

    Equals four times the variance of the classical energy distribution,
    so large superpositions never need a dense matrix.
    """
    e = np.asarray(energies, dtype=float)
    if probabilities is None:
        p = np.full(e.size, 1.0 / e.size)
    else:
        p = np.asarray(probabilities, dtype=float)
        p = p / p.sum()
    mean = float(p @ e)
    return 4.0 * float(p @ (e - mean) ** 2)


def catalyst_ladder_qfi(n: int) -> float:
    """QFI of the uniform superposition over levels {0, ..., floor(2 n^(2/3))}."""
    k = int(math.floor(2.0 * n ** (2.0 / 3.0)))
    return pure_qfi_from_levels(np.arange(k + 1))


def coherent_gibbs_qfi_identity(system: CompositeSystem, beta: float,
                                step_scale: float = 1e-4) -> tuple[float, float]:
    """QFI of the coherent Gibbs state vs 4 * d^2/dbeta^2 log Z.

    The derivative is taken by central finite differences with step
    ``step_scale * beta``.
    """
    rho = states_mod.coherent_gibbs(system, beta)
    val = qfi(rho)
    h = step_scale * beta
    lz = lambda b: model.gibbs(system, b).log_z
    d2 = (lz(beta + h) - 2.0 * lz(beta) + lz(beta - h)) / (h * h)
    return val, 4.0 * d2


# ---------------------------------------------------------------------------
# covariant Gibbs-preserving channels (for exercising the monotones)
# ---------------------------------------------------------------------------

def covariant_channel(kind: str, *, lam: float | None = None,
                      p: float | None = None,
                      gibbs: GibbsData | None = None
                      ) -> Callable[[QuantumState], QuantumState]:
    """Concrete time-translation-covariant Gibbs-preserving channels.

    kinds: ``block_dephase``; ``partial_dephase`` (rho -> (1-lam) rho +
    lam D(rho)); ``gibbs_mix`` (rho -> (1-p) rho + p gibbs).
    """
    if kind == "block_dephase":
        return dephase_blocks
    if kind == "partial_dephase":
        if lam is None or not 0.0 <= lam <= 1.0:
            raise BadParamsError("partial_dephase needs lam in [0, 1]")

        def channel(rho: QuantumState) -> QuantumState:
            mixed = (1.0 - lam) * rho.matrix + lam * dephase_blocks(rho).matrix
            return QuantumState(rho.system, mixed)

        return channel
    if kind == "gibbs_mix":
        if p is None or not 0.0 <= p <= 1.0:
            raise BadParamsError("gibbs_mix needs p in [0, 1]")
        if gibbs is None:
            raise BadParamsError("gibbs_mix needs Gibbs data")

        def channel(rho: QuantumState) -> QuantumState:
            mixed = (1.0 - p) * rho.matrix + p * gibbs.gibbs_matrix
            return QuantumState(rho.system, mixed)

        return channel
    raise BadParamsError(f"unknown channel kind {kind!r}")


# ---------------------------------------------------------------------------
# entanglement witness
# ---------------------------------------------------------------------------

def producibility_witness(rho: QuantumState, k: int, h=None) -> bool:
    """True iff the QFI certifies that rho is not k-producible.

    For N qubits with uniform gap omega0 the k-producible ceiling is
    k * N * omega0^2 (the gap squared restores the energy units).
    """
    shape = rho.system.uniform_qubits()
    if shape is None:
        raise WrongSystemShapeError("witness needs uniform two-level subsystems")
    n, omega0 = shape
    if not 1 <= k <= n:
        raise BadParamsError("need 1 <= k <= N")
    return qfi(rho, h) > k * n * omega0 ** 2 + 1e-9


# ---------------------------------------------------------------------------
# monotonicity audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClockReport:
    """QFI, skew-information samples and variance of one state."""

    qfi: float
    skew: dict[float, float]
    variance: float


def clock_report(rho, h=None,
                 skew_alphas: tuple[float, ...] = (0.25, 0.5, 0.75)) -> ClockReport:
    return ClockReport(
        qfi=qfi(rho, h),
        skew={a: skew_information(rho, h, a) for a in skew_alphas},
        variance=variance(rho, h),
    )


@dataclass(frozen=True)
class MonotonicityAudit:
    """Per-monotone verdicts for a candidate transformation rho -> sigma."""

    delta_qfi: float
    delta_skew: dict[float, float]
    alphas: np.ndarray
    free_energy_rho: np.ndarray
    free_energy_sigma: np.ndarray
    asymmetry_rho: np.ndarray
    asymmetry_sigma: np.ndarray
    modes_rho: dict[float, float]
    modes_sigma: dict[float, float]
    free_energy_nonincreasing: bool
    asymmetry_nonincreasing: bool
    modes_nonincreasing: bool
    forbidden_by: tuple[str, ...]


_AUDIT_ALPHAS = np.concatenate(([0.0], ALPHA_GRID, [math.inf]))


def monotonicity_audit(rho: QuantumState, sigma: QuantumState, g: GibbsData,
                       skew_alphas: tuple[float, ...] = (0.25, 0.5, 0.75),
                       alphas: np.ndarray | None = None,
                       tol: float = MONOTONE_TOL) -> MonotonicityAudit:
    """Evaluate every monotone for the transformation rho -> sigma.

    Computes the QFI and skew-information changes, the free energies
    F_alpha and asymmetry entropies A_alpha on the scan grid (alpha = 1 by
    the KL limit), and the per-mode coherence amplitudes; a monotone whose
    value increases beyond tolerance forbids the transformation under any
    covariant Gibbs-preserving map.
    """
    if rho.system is not sigma.system and rho.system != sigma.system:
        raise DimensionMismatchError("states live on different systems")
    scan = _AUDIT_ALPHAS if alphas is None else np.asarray(alphas, dtype=float)

    d_qfi = qfi(sigma) - qfi(rho)
    d_skew = {a: skew_information(sigma, None, a) - skew_information(rho, None, a)
              for a in skew_alphas}

    def grid_eval(fn, state):
        out = np.empty(scan.size)
        for i, a in enumerate(scan):
            out[i] = fn(state, a)
        return out

    f_rho = grid_eval(lambda s, a: divergence.free_energy(s, g, a), rho)
    f_sigma = grid_eval(lambda s, a: divergence.free_energy(s, g, a), sigma)
    a_rho = grid_eval(divergence.asymmetry_entropy, rho)
    a_sigma = grid_eval(divergence.asymmetry_entropy, sigma)

    modes_rho = divergence.asymmetry_modes(rho)
    modes_sigma = divergence.asymmetry_modes(sigma)

    # infinite values on both sides compare as non-increasing
    def nonincreasing(before: np.ndarray, after: np.ndarray) -> bool:
        both_inf = np.isinf(before) & np.isinf(after)
        diff = np.where(both_inf, 0.0, after - before)
        return bool(np.all(diff <= tol))

    f_ok = nonincreasing(f_rho, f_sigma)
    a_ok = nonincreasing(a_rho, a_sigma)
    m_ok = all(modes_sigma[k] <= modes_rho[k] + tol for k in modes_rho)

    forbidden = []
    if d_qfi > tol:
        forbidden.append("qfi")
    forbidden.extend(f"skew[{a}]" for a in skew_alphas if d_skew[a] > tol)
    if not f_ok:
        forbidden.append("free_energy")
    if not a_ok:
        forbidden.append("asymmetry")
    if not m_ok:
        forbidden.append("modes")

    return MonotonicityAudit(
        delta_qfi=d_qfi,
        delta_skew=d_skew,
        alphas=scan,
        free_energy_rho=f_rho,
        free_energy_sigma=f_sigma,
        asymmetry_rho=a_rho,
        asymmetry_sigma=a_sigma,
        modes_rho=modes_rho,
        modes_sigma=modes_sigma,
        free_energy_nonincreasing=f_ok,
        asymmetry_nonincreasing=a_ok,
        modes_nonincreasing=m_ok,
        forbidden_by=tuple(forbidden),
    )
