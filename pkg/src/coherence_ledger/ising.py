"""Transverse-field Ising chain via free fermions, plus a dense ED oracle.

Hamiltonian (periodic boundary, sigma^(N+1) = sigma^(1)):

    H = -h sum_i sigma_z^(i) - J sum_i sigma_x^(i) sigma_x^(i+1)

After the Jordan-Wigner transformation the Hamiltonian splits into two
fermion-parity sectors with distinct momentum quantizations:

  * NS sector (even quasiparticle number): k_n = 2 pi (n + 1/2) / N
  * R sector (odd quasiparticle number):   p_n = 2 pi n / N

for n = -N/2, ..., N/2 - 1.  Every mode contributes E_k (occ - 1/2) with
the dispersion E_k = 2 sqrt(h^2 + J^2 - 2 h J cos k), except the p = 0 mode
of the R sector whose signed coefficient -2(J - h) tracks the ground-state
rearrangement across h = J.  The additive -1/2 constants are kept exactly
so absolute energies match exact diagonalization, not just gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import clock, divergence, model
from .errors import BadParamsError, TooLargeError, WrongSystemShapeError
from .model import CompositeSystem, window_of
from .states import QuantumState
from .tradeoff import LN2, TradeoffEntry

MAX_FREE_FERMION_N = 24
MAX_ED_N = 12
_CHUNK = 1 << 20


@dataclass(frozen=True)
class IsingChain:
    """Periodic transverse-field Ising chain with even site count."""

    n: int
    h: float
    j: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise BadParamsError("need an even number of sites N >= 2")
        if self.h < 0 or self.j < 0:
            raise BadParamsError("field and coupling must be >= 0")


def dispersion(h: float, j: float, k) -> np.ndarray | float:
    """Quasiparticle energy 2 sqrt(h^2 + J^2 - 2 h J cos k) >= 0."""
    k = np.asarray(k, dtype=float)
    val = 2.0 * np.sqrt(np.maximum(h * h + j * j - 2.0 * h * j * np.cos(k), 0.0))
    return float(val) if val.ndim == 0 else val


def ns_momenta(n: int) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(-n // 2, n // 2) + 0.5) / n


def r_momenta(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(-n // 2, n // 2) / n


def _mode_coefficients(chain: IsingChain, sector: str) -> tuple[np.ndarray, np.ndarray]:
    """Momenta and the signed per-mode coefficients c_n with
    E(occ) = sum_n c_n (occ_n - 1/2)."""
    if sector == "NS":
        k = ns_momenta(chain.n)
        return k, dispersion(chain.h, chain.j, k)
    if sector == "R":
        p = r_momenta(chain.n)
        c = dispersion(chain.h, chain.j, p)
        zero = np.nonzero(np.isclose(p, 0.0))[0][0]
        c[zero] = -2.0 * (chain.j - chain.h)
        return p, c
    raise BadParamsError(f"unknown sector {sector!r}; use 'NS' or 'R'")


def _sector_parity(sector: str) -> int:
    return 0 if sector == "NS" else 1


def _enumerate_levels(coeffs: np.ndarray, parity: int, start: int, stop: int):
    """Energies and parities of occupation patterns [start, stop)."""
    idx = np.arange(start, stop, dtype=np.uint32)
    e = np.full(idx.size, -0.5 * float(coeffs.sum()))
    par = np.zeros(idx.size, dtype=np.uint8)
    for jbit, c in enumerate(coeffs):
        bit = ((idx >> jbit) & 1).astype(np.uint8)
        e += c * bit
        par ^= bit
    keep = par == parity
    return idx[keep], e[keep]


@dataclass(frozen=True)
class SectorSpectrum:
    """Many-body levels of one fermion-parity sector."""

    sector: str
    momenta: np.ndarray
    mode_coefficients: np.ndarray
    levels: np.ndarray            # ascending
    patterns: np.ndarray          # occupation bitmasks aligned with levels


def sector_spectrum(chain: IsingChain, sector: str,
                    max_levels: int | None = None) -> SectorSpectrum:
    """Enumerate the parity-allowed many-body levels of one sector."""
    if chain.n > MAX_FREE_FERMION_N:
        raise TooLargeError(f"free-fermion enumeration limited to N <= {MAX_FREE_FERMION_N}")
    momenta, coeffs = _mode_coefficients(chain, sector)
    parity = _sector_parity(sector)
    idx, e = _enumerate_levels(coeffs, parity, 0, 1 << chain.n)
    order = np.argsort(e, kind="stable")
    e = e[order]
    idx = idx[order]
    if max_levels is not None:
        e = e[:max_levels]
        idx = idx[:max_levels]
    return SectorSpectrum(sector, momenta, coeffs, e, idx)


def full_spectrum(chain: IsingChain) -> np.ndarray:
    """Sorted union of the NS and R many-body levels (the full 2^N spectrum)."""
    ns = sector_spectrum(chain, "NS").levels
    r = sector_spectrum(chain, "R").levels
    return np.sort(np.concatenate((ns, r)))


# ---------------------------------------------------------------------------
# dense spin-basis oracle
# ---------------------------------------------------------------------------

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def _site_operator(op: np.ndarray, site: int, n: int) -> sp.csr_matrix:
    mat = sp.identity(1, format="csr")
    for s in range(n):
        mat = sp.kron(mat, sp.csr_matrix(op) if s == site else sp.identity(2, format="csr"),
                      format="csr")
    return mat


def ising_hamiltonian_dense(chain: IsingChain) -> np.ndarray:
    """Explicit 2^N x 2^N spin Hamiltonian (real symmetric)."""
    if chain.n > MAX_ED_N:
        raise TooLargeError(f"dense build limited to N <= {MAX_ED_N}")
    n = chain.n
    ham = sp.csr_matrix((1 << n, 1 << n))
    for i in range(n):
        ham = ham - chain.h * _site_operator(_SZ, i, n)
        xx = _site_operator(_SX, i, n) @ _site_operator(_SX, (i + 1) % n, n)
        ham = ham - chain.j * xx
    return ham.toarray()


def ed_oracle(chain: IsingChain) -> np.ndarray:
    """Sorted eigenvalues from exact diagonalization of the spin Hamiltonian.

    Independent verification path for the free-fermion sectors.
    """
    return np.linalg.eigvalsh(ising_hamiltonian_dense(chain))


# ---------------------------------------------------------------------------
# degeneracy histogram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyHistogram:
    epsilon: float
    mu: float
    counts: dict[int, int]

    def centers(self) -> dict[int, float]:
        return {m: self.mu + m * self.epsilon for m in sorted(self.counts)}

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def degeneracy_histogram(chain: IsingChain, epsilon: float,
                         mu: float = 0.0) -> DegeneracyHistogram:
    """Bin the full many-body spectrum into width-epsilon windows.

    mu defaults to 0: the Ising spectrum is symmetric about zero.
    Enumeration is chunked so N up to 24 stays within memory.
    """
    if chain.n > MAX_FREE_FERMION_N:
        raise TooLargeError(f"enumeration limited to N <= {MAX_FREE_FERMION_N}")
    counts: dict[int, int] = {}
    for sector in ("NS", "R"):
        _, coeffs = _mode_coefficients(chain, sector)
        parity = _sector_parity(sector)
        total = 1 << chain.n
        for start in range(0, total, _CHUNK):
            _, e = _enumerate_levels(coeffs, parity, start, min(start + _CHUNK, total))
            ms = window_of(e, mu, epsilon)
            for m, c in zip(*np.unique(ms, return_counts=True)):
                counts[int(m)] = counts.get(int(m), 0) + int(c)
    return DegeneracyHistogram(float(epsilon), float(mu), counts)


# ---------------------------------------------------------------------------
# quasiparticle trade-off and QFI perturbation bounds
# ---------------------------------------------------------------------------

def effective_quasiparticle_system(chain: IsingChain,
                                   block_tolerance: float = -1.0) -> CompositeSystem:
    """Two-level register per NS quasiparticle mode with levels +-E_k/2."""
    k = ns_momenta(chain.n)
    e = dispersion(chain.h, chain.j, k)
    spectra = tuple((-0.5 * ek, 0.5 * ek) for ek in e)
    return CompositeSystem(spectra, block_tolerance)


def ising_tradeoff(rho_effective: QuantumState, chain: IsingChain,
                   beta: float = 1.0) -> TradeoffEntry:
    """Trade-off for states on the quasiparticle registers:
    w_coh + I_F / (8 N (h^2 + J^2)) <= N ln2.

    For NS momenta the squared spans sum exactly to 4 N (h^2 + J^2), so the
    denominator is the general bound's 2 Delta_E^2.
    """
    expected = effective_quasiparticle_system(chain)
    if rho_effective.system.local_spectra != expected.local_spectra:
        raise WrongSystemShapeError(
            "state is not on the chain's quasiparticle registers"
        )
    g = model.gibbs(rho_effective.system, beta)
    w, _ = divergence.w_coh(rho_effective, g)
    i_f = clock.qfi(rho_effective)
    denom = 8.0 * chain.n * (chain.h ** 2 + chain.j ** 2)
    return TradeoffEntry("ising", w + i_f / denom, chain.n * LN2)


@dataclass(frozen=True)
class IsingQfiBounds:
    qfi_free: float      # against H0 = -h sum sigma_z
    qfi_ising: float     # against the full chain Hamiltonian
    lower: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower - 1e-9 <= self.qfi_ising <= self.upper + 1e-9


def ising_qfi_bounds(rho, chain: IsingChain) -> IsingQfiBounds:
    """Sandwich the interacting-chain QFI by the free-field value:
    I(H0) - 8hJN^2 <= I(H_Ising) <= I(H0) + 8hJN^2 + 4J^2N^2."""
    if chain.n > 10:
        raise TooLargeError("dense QFI comparison limited to N <= 10")
    m = rho.matrix if isinstance(rho, QuantumState) else np.asarray(rho, dtype=complex)
    if m.shape != (1 << chain.n, 1 << chain.n):
        raise WrongSystemShapeError("state dimension does not match 2^N")
    h0 = sp.csr_matrix((1 << chain.n, 1 << chain.n))
    for i in range(chain.n):
        h0 = h0 - chain.h * _site_operator(_SZ, i, chain.n)
    h0 = h0.toarray()
    h_full = ising_hamiltonian_dense(chain)
    q0 = clock.qfi(m, h0)
    qi = clock.qfi(m, h_full)
    shift = 8.0 * chain.h * chain.j * chain.n ** 2
    upper = q0 + shift + 4.0 * chain.j ** 2 * chain.n ** 2
    return IsingQfiBounds(q0, qi, q0 - shift, upper)
