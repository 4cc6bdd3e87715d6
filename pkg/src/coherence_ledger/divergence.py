"""Renyi divergences, generalized free energies, and single-shot work.

Conventions: k_B T = 1, all works and free energies in nats, energies enter
only through beta * E.  F_alpha(rho) = S_alpha(rho || gibbs) - log Z.

States that are block diagonal in the total-energy basis commute with the
Gibbs state (its weights are constant within a block), so their free
energies reduce to classical Renyi expressions on the per-block eigenvalues:

    F_alpha = (alpha - 1)^(-1) * logsumexp_i(alpha*log p_i + (alpha-1)*beta*E_i)

with the alpha -> 0, 1, inf limits evaluated in closed form.  The work from
internal coherence is the infimum over alpha in [0, inf] of the free-energy
gap between the block-dephased and the fully dephased state; it is scanned
on a fixed alpha grid and refined by golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import states as states_mod
from .errors import (
    BadAlphaError,
    DimensionMismatchError,
    NotBlockDiagonalError,
    NotPureError,
)
from .linalg import psd_eigh, support_powers
from .model import CompositeSystem, GibbsData, gibbs as make_gibbs
from .states import QuantumState, dephase_blocks, is_block_diagonal

SUPPORT_RTOL = 1e-12
GOLDEN_TOL = 1e-6

# Fixed scan grid: dense near 0, coarser toward 10, a handful of tail points.
ALPHA_GRID = np.unique(np.concatenate((
    0.01 * np.arange(1, 100),
    1.0 + 0.1 * np.arange(1, 91),
    np.array([10.0, 20.0, 50.0, 100.0, 1000.0]),
)))


def _lse(t: np.ndarray) -> float:
    """Scalar log-sum-exp; hot path of the golden-section refinement."""
    m = t.max()
    return float(m + math.log(np.exp(t - m).sum()))


def _lse_cols(t: np.ndarray) -> np.ndarray:
    """Column-wise log-sum-exp over axis 0."""
    m = t.max(axis=0)
    return m + np.log(np.exp(t - m).sum(axis=0))


# ---------------------------------------------------------------------------
# classical free energies for states commuting with the Gibbs state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalFreeEnergy:
    """F_alpha data of a state diagonal in a common basis with the Gibbs
    state: support probabilities paired with their beta*energy values."""

    p: np.ndarray
    log_p: np.ndarray
    beta_e: np.ndarray

    @staticmethod
    def from_probabilities(p, beta_e,
                           support_rtol: float = SUPPORT_RTOL) -> "ClassicalFreeEnergy":
        p = np.asarray(p, dtype=float)
        beta_e = np.asarray(beta_e, dtype=float)
        cut = support_rtol * (float(p.max()) if p.size else 0.0)
        on = p > cut
        p = p[on]
        beta_e = beta_e[on]
        return ClassicalFreeEnergy(p, np.log(p), beta_e)

    def f_alpha(self, alphas) -> np.ndarray:
        """Vectorized F_alpha for alpha != 1 (alpha = 0 is exact here)."""
        a = np.atleast_1d(np.asarray(alphas, dtype=float))
        t = a * self.log_p[:, None] + (a - 1.0) * self.beta_e[:, None]
        return _lse_cols(t) / (a - 1.0)

    def f0(self) -> float:
        return -_lse(-self.beta_e)

    def f1(self) -> float:
        return float(self.p @ self.log_p + self.p @ self.beta_e)

    def f_inf(self) -> float:
        return float(np.max(self.log_p + self.beta_e))

    def f_at(self, alpha: float) -> float:
        if alpha == math.inf:
            return self.f_inf()
        if abs(alpha - 1.0) < 1e-9:
            return self.f1()
        return _lse(alpha * self.log_p + (alpha - 1.0) * self.beta_e) / (alpha - 1.0)


def classical_renyi(p, q, alpha: float) -> float:
    """Classical Renyi divergence of probability vectors (natural log).

    Handles alpha in [0, inf]; entries with p_i = 0 are dropped,
    0 * log 0 := 0, and support violations give +inf where required.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatchError("probability vectors differ in length")
    if alpha < 0:
        raise BadAlphaError("alpha must be >= 0")
    on = p > 0
    pp, qq = p[on], q[on]
    if alpha == math.inf:
        if np.any(qq == 0):
            return math.inf
        return float(np.log(np.max(pp / qq)))
    if alpha == 1.0:
        if np.any(qq == 0):
            return math.inf
        return float(np.sum(pp * (np.log(pp) - np.log(qq))))
    if alpha > 1 and np.any(qq == 0):
        return math.inf
    with np.errstate(divide="ignore"):
        total = float(np.sum(pp ** alpha * qq ** (1.0 - alpha)))
    if total <= 0:
        return math.inf
    return math.log(total) / (alpha - 1.0)


# ---------------------------------------------------------------------------
# alpha scan engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaScan:
    """Sampled curve alpha -> free-energy gap with the located infimum.

    ``alphas`` contains 0, the finite grid and 1; the alpha = 1 sample is
    the von Neumann (KL) limit, not a grid extrapolation.  ``alpha_star``
    may be ``math.inf``.
    """

    alphas: np.ndarray
    values: np.ndarray
    value_at_inf: float
    alpha_star: float
    value: float
    refine_error: float


class _FreeEnergyGap:
    """Difference F_alpha(hi) - F_alpha(lo) of two classical states."""

    def __init__(self, hi: ClassicalFreeEnergy, lo: ClassicalFreeEnergy):
        self.hi = hi
        self.lo = lo

    def grid(self, alphas) -> np.ndarray:
        return self.hi.f_alpha(alphas) - self.lo.f_alpha(alphas)

    def at(self, alpha: float) -> float:
        return self.hi.f_at(alpha) - self.lo.f_at(alpha)


def _golden_minimize(f, a: float, b: float, tol: float):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x), abs(fc - fd)


def scan_infimum(gap: _FreeEnergyGap) -> tuple[float, AlphaScan]:
    """Infimum of the gap over alpha in [0, inf]: closed forms at the
    endpoints, grid scan in between, golden-section refinement around the
    sampled minimum."""
    grid_vals = gap.grid(ALPHA_GRID)
    v1 = gap.at(1.0)
    v0 = gap.at(0.0)
    vinf = gap.hi.f_inf() - gap.lo.f_inf()

    pos = int(np.searchsorted(ALPHA_GRID, 1.0))
    alphas = np.concatenate(([0.0], ALPHA_GRID[:pos], [1.0], ALPHA_GRID[pos:]))
    values = np.concatenate(([v0], grid_vals[:pos], [v1], grid_vals[pos:]))

    i = int(np.argmin(values))
    lo_a = alphas[max(i - 1, 0)]
    hi_a = alphas[min(i + 1, alphas.size - 1)]
    refine_err = 0.0
    x_star, v_star = float(alphas[i]), float(values[i])
    if hi_a > lo_a:
        x, v, spread = _golden_minimize(gap.at, float(lo_a), float(hi_a), GOLDEN_TOL)
        if v < v_star:
            x_star, v_star = x, v
        refine_err = spread

    if vinf < v_star:
        x_star, v_star = math.inf, float(vinf)
    return v_star, AlphaScan(alphas, values, float(vinf), x_star, v_star, refine_err)


# ---------------------------------------------------------------------------
# classical data extraction from states
# ---------------------------------------------------------------------------

def _partition_spectra(rho: QuantumState, parts):
    """Per-partition eigenvalues (block-dephased side) and diagonal entries
    (fully dephased side), each tagged with the representative energy.

    ``parts`` is an iterable of (representative energy, basis index array).
    """
    lam_all, lam_e = [], []
    diag_all, diag_e = [], []
    diag = rho.diagonal()
    m = rho.matrix
    for energy, idx in parts:
        d = diag[idx]
        if len(idx) == 1:
            lam = d
        else:
            sub = m[np.ix_(idx, idx)]
            lam = np.clip(np.linalg.eigvalsh(sub), 0.0, None)
        lam_all.append(lam)
        lam_e.append(np.full(lam.size, energy))
        diag_all.append(d)
        diag_e.append(np.full(d.size, energy))
    return (np.concatenate(lam_all), np.concatenate(lam_e),
            np.concatenate(diag_all), np.concatenate(diag_e))


def _block_parts(system: CompositeSystem):
    blocks = system.blocks
    return list(zip(blocks.energies, blocks.members))


def _classical_from_blocks(rho: QuantumState, beta: float):
    lam, lam_e, diag, diag_e = _partition_spectra(rho, _block_parts(rho.system))
    hi = ClassicalFreeEnergy.from_probabilities(lam, beta * lam_e)
    lo = ClassicalFreeEnergy.from_probabilities(diag, beta * diag_e)
    return hi, lo


def _block_eig_free_energy(rho: QuantumState, beta: float) -> ClassicalFreeEnergy:
    lam, lam_e, _, _ = _partition_spectra(rho, _block_parts(rho.system))
    return ClassicalFreeEnergy.from_probabilities(lam, beta * lam_e)


def _gibbs_free_energy(g: GibbsData) -> ClassicalFreeEnergy:
    return ClassicalFreeEnergy.from_probabilities(
        g.weights, g.beta * g.system.total_energies)


# ---------------------------------------------------------------------------
# quantum Renyi divergence (general matrices)
# ---------------------------------------------------------------------------

def _matrix_of(x) -> np.ndarray:
    if isinstance(x, QuantumState):
        return x.matrix
    return np.asarray(x, dtype=complex)

def _renyi_below_one(w, u, q, v, alpha: float) -> float:
    overlaps = np.abs(u.conj().T @ v) ** 2
    pw = support_powers(w, alpha)
    qw = support_powers(q, 1.0 - alpha)
    total = float(pw @ overlaps @ qw)
    if total <= 0:
        return math.inf
    return math.log(total) / (alpha - 1.0)


def _kl(w, u, q, v) -> float:
    overlaps = np.abs(u.conj().T @ v) ** 2
    won = w > SUPPORT_RTOL * float(w.max())
    qon = q > SUPPORT_RTOL * float(q.max())
    leak = float(w[won] @ overlaps[np.ix_(won, ~qon)].sum(axis=1)) if (~qon).any() else 0.0
    if leak > 1e-12:
        return math.inf
    lw = float(w[won] @ np.log(w[won]))
    lq = float(w[won] @ (overlaps[np.ix_(won, qon)] @ np.log(q[qon])))
    return lw - lq


def _renyi_above_one(w, u, q, v, alpha: float) -> float:
    qon = q > SUPPORT_RTOL * float(q.max())
    if (~qon).any():
        overlaps = np.abs(u.conj().T @ v) ** 2
        leak = float(w @ overlaps[:, ~qon].sum(axis=1))
        if leak > 1e-10:
            return math.inf
    c = -0.5 if alpha == math.inf else (1.0 - alpha) / (2.0 * alpha)
    sig_pow = (v * support_powers(q, c)) @ v.conj().T
    rho = (u * w) @ u.conj().T
    x = sig_pow @ rho @ sig_pow
    x = 0.5 * (x + x.conj().T)
    nu = np.clip(np.linalg.eigvalsh(x), 0.0, None)
    if alpha == math.inf:
        top = float(nu[-1])
        return math.log(top) if top > 0 else -math.inf
    on = nu > SUPPORT_RTOL * float(nu.max())
    if not on.any():
        return math.inf
    return _lse(alpha * np.log(nu[on])) / (alpha - 1.0)


def _renyi_any(rho_m: np.ndarray, sigma_m: np.ndarray, alpha: float) -> float:
    es_r = psd_eigh(rho_m)
    es_s = psd_eigh(sigma_m)
    w, u = es_r.eigenvalues, es_r.eigenvectors
    q, v = es_s.eigenvalues, es_s.eigenvectors
    if alpha == 1.0:
        return _kl(w, u, q, v)
    if alpha < 1.0:
        return _renyi_below_one(w, u, q, v, alpha)
    return _renyi_above_one(w, u, q, v, alpha)


def renyi_divergence(rho, sigma, alpha: float) -> float:
    """Quantum Renyi divergence S_alpha(rho || sigma), possibly +inf.

    Uses the Petz form Tr[rho^a sigma^(1-a)] for alpha in [0, 1) and the
    sandwiched form for alpha > 1 (including alpha = inf, the max
    divergence).  For alpha = 1 use :func:`kl_divergence`.
    """
    if alpha < 0:
        raise BadAlphaError("alpha must be >= 0")
    if alpha == 1.0:
        raise BadAlphaError("alpha = 1 is the KL divergence; call kl_divergence")
    return _renyi_any(_matrix_of(rho), _matrix_of(sigma), float(alpha))


def kl_divergence(rho, sigma) -> float:
    """Quantum relative entropy Tr[rho(log rho - log sigma)] in nats."""
    rho_m, sigma_m = _matrix_of(rho), _matrix_of(sigma)
    es_r, es_s = psd_eigh(rho_m), psd_eigh(sigma_m)
    return _kl(es_r.eigenvalues, es_r.eigenvectors,
               es_s.eigenvalues, es_s.eigenvectors)


# ---------------------------------------------------------------------------
# free energies and work quantities
# ---------------------------------------------------------------------------

def free_energy(rho: QuantumState, g: GibbsData, alpha: float) -> float:
    """Generalized free energy F_alpha = S_alpha(rho || gibbs) - log Z
    in units of k_B T.  Accepts alpha in [0, inf], including 1."""
    if alpha < 0:
        raise BadAlphaError("alpha must be >= 0")
    if is_block_diagonal(rho):
        cfe = _block_eig_free_energy(rho, g.beta)
        return cfe.f_at(float(alpha))
    s = _renyi_any(rho.matrix, g.gibbs_matrix, float(alpha))
    return s - g.log_z


def w_coh(rho: QuantumState, g: GibbsData) -> tuple[float, AlphaScan]:
    """Single-shot work extractable purely from internal coherence.

    Infimum over alpha of F_alpha(block-dephased) - F_alpha(fully dephased),
    evaluated classically on the per-block eigenvalues.  Always >= 0.
    """
    hi, lo = _classical_from_blocks(rho, g.beta)
    value, scan = scan_infimum(_FreeEnergyGap(hi, lo))
    return max(value, 0.0), scan


def _w_coh_on_partition(rho: QuantumState, beta: float, parts) -> tuple[float, AlphaScan]:
    lam, lam_e, diag, diag_e = _partition_spectra(rho, parts)
    hi = ClassicalFreeEnergy.from_probabilities(lam, beta * lam_e)
    lo = ClassicalFreeEnergy.from_probabilities(diag, beta * diag_e)
    value, scan = scan_infimum(_FreeEnergyGap(hi, lo))
    return max(value, 0.0), scan


def w_incoh(rho: QuantumState, g: GibbsData) -> float:
    """Work from the incoherent part: inf_alpha of F_alpha(dephased) -
    F_alpha(gibbs).  Equals F_0(dephased) + log Z (infimum at alpha = 0)."""
    diag = rho.diagonal()
    beta_e = g.beta * rho.system.total_energies
    hi = ClassicalFreeEnergy.from_probabilities(diag, beta_e)
    lo = _gibbs_free_energy(g)
    value, _ = scan_infimum(_FreeEnergyGap(hi, lo))
    return max(value, 0.0)


def work_distance(rho: QuantumState, sigma: QuantumState, g: GibbsData) -> float:
    """inf_alpha of F_alpha(rho) - F_alpha(sigma) for block-diagonal states:
    the single-shot work of the conversion rho -> sigma."""
    for name, st in (("rho", rho), ("sigma", sigma)):
        if not is_block_diagonal(st):
            raise NotBlockDiagonalError(
                f"{name} carries coherence between total-energy blocks"
            )
    hi = _block_eig_free_energy(rho, g.beta)
    lo = _block_eig_free_energy(sigma, g.beta)
    value, _ = scan_infimum(_FreeEnergyGap(hi, lo))
    return value


def w_tot(rho: QuantumState, g: GibbsData) -> float:
    """Total extractable work: work distance from the block-dephased state
    down to the Gibbs state."""
    hi = _block_eig_free_energy(dephase_blocks(rho), g.beta)
    lo = _gibbs_free_energy(g)
    value, _ = scan_infimum(_FreeEnergyGap(hi, lo))
    return value


# ---------------------------------------------------------------------------
# pure-state extractability criterion
# ---------------------------------------------------------------------------

class PureWorkCriterion(NamedTuple):
    extractable: bool
    e_star: float
    tied: bool


def pure_state_work_criterion(psi: QuantumState, g: GibbsData,
                              tie_rtol: float = 1e-9,
                              coherence_atol: float = 1e-10) -> PureWorkCriterion:
    """Deterministic-work criterion for a pure state.

    Work is extractable iff the block maximizing p_E * exp(beta*E) carries
    internal coherence.  With ties (within relative 1e-9) every maximizing
    block must be coherent; ``tied`` flags that case.
    """
    w, u = np.linalg.eigh(psi.matrix)
    if w[-1] < 1.0 - 1e-9:
        raise NotPureError(f"largest eigenvalue {w[-1]:.6f} < 1 - 1e-9")
    v = u[:, -1]
    blocks = psi.system.blocks

    scores = []
    for b, idx in enumerate(blocks.members):
        vb = v[idx]
        p = float(np.vdot(vb, vb).real)
        if p <= 1e-300:
            continue
        scores.append((math.log(p) + g.beta * blocks.energies[b], b, vb, p))
    best = max(s[0] for s in scores)
    # a relative tolerance on p*e^{beta E} is an absolute one on its log
    winners = [s for s in scores if s[0] >= best - tie_rtol]

    def has_internal_coherence(vb, p) -> bool:
        if vb.size == 1:
            return False
        mags = np.sort(np.abs(vb)) / math.sqrt(p)
        return float(mags[-1] * mags[-2]) > coherence_atol

    extractable = all(has_internal_coherence(vb, p) for _, _, vb, p in winners)
    e_star = float(blocks.energies[winners[0][1]])
    return PureWorkCriterion(extractable, e_star, len(winners) > 1)


# ---------------------------------------------------------------------------
# free-energy correlation across subsystems
# ---------------------------------------------------------------------------

def free_energy_correlation(rho: QuantumState, g: GibbsData, alpha: float) -> float:
    """Free energy shared between subsystems:
    F_alpha(rho) - sum_i F_alpha(rho_i), dimensionless (k_B T = 1)."""
    total = free_energy(rho, g, alpha)
    for i in range(rho.system.n_subsystems):
        sub = states_mod.reduced_state(rho, i)
        g_i = make_gibbs(sub.system, g.beta)
        total -= free_energy(sub, g_i, alpha)
    return total


# ---------------------------------------------------------------------------
# asymmetry (external-coherence) measures
# ---------------------------------------------------------------------------

def asymmetry_entropy(rho: QuantumState, alpha: float) -> float:
    """S_alpha(rho || block-dephased rho): zero iff rho is block diagonal."""
    if alpha < 0:
        raise BadAlphaError("alpha must be >= 0")
    deph = dephase_blocks(rho)
    if alpha == 1.0:
        val = kl_divergence(rho.matrix, deph.matrix)
    else:
        val = _renyi_any(rho.matrix, deph.matrix, float(alpha))
    return max(val, 0.0) if math.isfinite(val) else val


def _gap_clusters(energies: np.ndarray, tol: float):
    """Cluster all pairwise block-energy gaps (>= 0) within tolerance.

    Returns (sorted representative gaps, map (b_hi, b_lo) -> cluster id).
    """
    n = len(energies)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    gaps = np.array([energies[j] - energies[i] for i, j in pairs])
    order = np.argsort(gaps)
    reps: list[float] = []
    cluster_of = {}
    current: list[float] = []
    cid = -1
    anchor = None
    for k in order:
        gap = gaps[k]
        if anchor is None or gap - anchor > tol:
            if current:
                reps.append(float(np.mean(current)))
            current = []
            cid += 1
            anchor = gap
        current.append(gap)
        i, j = pairs[k]
        cluster_of[(j, i)] = cid
    if current:
        reps.append(float(np.mean(current)))
    return reps, cluster_of


def asymmetry_modes(rho: QuantumState) -> dict[float, float]:
    """Total absolute coherence per oscillation frequency.

    Keys are block-energy gaps omega >= 0 (each unordered block pair counted
    once; Hermiticity makes the two orientations redundant).  The omega = 0
    entry sums the within-block absolute entries, diagonal included.
    """
    blocks = rho.system.blocks
    reps, cluster_of = _gap_clusters(blocks.energies, rho.system.block_tolerance)
    sums = {c: 0.0 for c in range(len(reps))}
    m = rho.matrix
    for bi in range(blocks.n_blocks):
        for bj in range(bi, blocks.n_blocks):
            sub = m[np.ix_(blocks.members[bj], blocks.members[bi])]
            amp = float(np.sum(np.abs(sub)))
            if bi == bj:
                # count each unordered within-block pair once
                amp = 0.5 * (amp + float(np.sum(np.abs(np.diag(sub)))))
            sums[cluster_of[(bj, bi)]] += amp
    return {reps[c]: sums[c] for c in sorted(sums)}


# ---------------------------------------------------------------------------
# thermomajorization
# ---------------------------------------------------------------------------

def thermomajorization_curve(rho: QuantumState, g: GibbsData) -> np.ndarray:
    """Lorenz curve of a block-diagonal state against the Gibbs weights.

    Eigenvalues are taken per block (each paired with that block's Gibbs
    weight), sorted by descending eigenvalue/weight ratio and cumulated;
    returns the (n+1) x 2 array of breakpoints from (0,0) to (1,1)."""
    if not is_block_diagonal(rho):
        raise NotBlockDiagonalError("thermomajorization needs a block-diagonal state")
    lam, lam_e, _, _ = _partition_spectra(rho, _block_parts(rho.system))
    weights = np.exp(-g.beta * lam_e - g.log_z)
    order = np.argsort(-(lam / weights), kind="stable")
    xs = np.concatenate(([0.0], np.cumsum(weights[order])))
    ys = np.concatenate(([0.0], np.cumsum(lam[order])))
    return np.column_stack((xs, ys))


def thermomajorizes(rho: QuantumState, sigma: QuantumState, g: GibbsData,
                    atol: float = 1e-12) -> bool:
    """True iff rho's Lorenz curve lies on or above sigma's everywhere."""
    c1 = thermomajorization_curve(rho, g)
    c2 = thermomajorization_curve(sigma, g)
    xs = np.union1d(c1[:, 0], c2[:, 0])
    y1 = np.interp(xs, c1[:, 0], c1[:, 1])
    y2 = np.interp(xs, c2[:, 0], c2[:, 1])
    return bool(np.all(y1 >= y2 - atol))


def curves_equal(rho: QuantumState, sigma: QuantumState, g: GibbsData,
                 atol: float = 1e-12) -> bool:
    return (thermomajorizes(rho, sigma, g, atol)
            and thermomajorizes(sigma, rho, g, atol))
