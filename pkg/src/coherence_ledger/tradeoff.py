"""Trade-off bounds between work-from-coherence and clock resources.

Every bound is reported as an entry (lhs, rhs, slack = rhs - lhs) so sweeps
can assert slack >= -1e-9 uniformly.  Logs are natural throughout; the
binary entropy is evaluated in bits and multiplied by log 2 exactly where
the bounds ask for it, keeping works in nats (k_B T = 1).

The proof chain behind the qubit bound is exposed by :func:`proof_chain`:

    w_coh <= sum_E p_E ln C(N, n)          (degeneracy bound)
          <= N ln2 * sum_E p_E H_b(n/N)    (binomial -> binary entropy)
          <= N ln2 * H_b((1 - sqrt(I_F / N^2 w0^2)) / 2)

and the tighter variant replaces N ln2 with ln C(N, N/2), where the central
coefficient for odd N is Gamma(N+1) / Gamma(N/2+1)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from . import clock, divergence, model, states as states_mod
from .errors import (
    BadParamsError,
    QfiOutOfRangeError,
    RangeExceededError,
    WrongSystemShapeError,
)
from .model import CompositeSystem, GibbsData
from .states import QuantumState

SLACK_TOL = 1e-9
LN2 = math.log(2.0)


def binary_entropy(r) -> np.ndarray | float:
    """Binary entropy in bits, 0 log 0 := 0; accepts scalars or arrays."""
    r = np.clip(np.asarray(r, dtype=float), 0.0, 1.0)
    h = -(xlogy(r, r) + xlogy(1.0 - r, 1.0 - r)) / LN2
    return float(h) if h.ndim == 0 else h


def log_binomial(n: float, k: float) -> float:
    """ln C(n, k) via log-Gamma; continuous in k (used at k = n/2 for odd n)."""
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


@dataclass(frozen=True)
class TradeoffEntry:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -SLACK_TOL

    @property
    def saturated(self) -> bool:
        return abs(self.slack) <= SLACK_TOL


@dataclass(frozen=True)
class TradeoffReport:
    """Every applicable bound for one state."""

    w_coh: float
    qfi: float
    delta_e_sq: float
    d_list: tuple[int, ...]
    entries: dict[str, TradeoffEntry]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries.values())


def _w_coh_of(rho: QuantumState, g: GibbsData, value: float | None) -> float:
    if value is not None:
        return value
    return divergence.w_coh(rho, g)[0]


def _qfi_of(rho: QuantumState, value: float | None) -> float:
    if value is not None:
        return value
    return clock.qfi(rho)


def degeneracy_bound(rho: QuantumState, g: GibbsData,
                     w_coh_value: float | None = None) -> TradeoffEntry:
    """w_coh <= sum_E p_E ln g_E: work from coherence is limited by the
    population-weighted log degeneracy."""
    data = states_mod.classical_data(rho)
    degs = rho.system.blocks.degeneracies
    rhs = float(data.block_probs @ np.log(degs))
    return TradeoffEntry("degeneracy", _w_coh_of(rho, g, w_coh_value), rhs)


def _require_uniform_qubits(system: CompositeSystem,
                            n: int | None = None,
                            omega0: float | None = None) -> tuple[int, float]:
    shape = system.uniform_qubits()
    if shape is None:
        raise WrongSystemShapeError("bound needs uniform two-level subsystems")
    if n is not None and shape[0] != n:
        raise WrongSystemShapeError(f"system has {shape[0]} qubits, expected {n}")
    if omega0 is not None and abs(shape[1] - omega0) > 1e-12 * omega0:
        raise WrongSystemShapeError("system gap differs from requested omega0")
    return shape


def _qfi_ratio(qfi_value: float, ceiling: float) -> float:
    ratio = qfi_value / ceiling
    if ratio > 1.0 + 1e-9:
        raise QfiOutOfRangeError(
            f"QFI {qfi_value:.6e} exceeds its ceiling {ceiling:.6e}"
        )
    return min(max(ratio, 0.0), 1.0)


def qubit_binary_entropy_bound(rho: QuantumState, g: GibbsData,
                               n: int | None = None,
                               omega0: float | None = None,
                               w_coh_value: float | None = None,
                               qfi_value: float | None = None) -> TradeoffEntry:
    """Qubit-register trade-off:
    w_coh <= N ln2 * H_b((1 - sqrt(I_F / N^2 omega0^2)) / 2)."""
    n, omega0 = _require_uniform_qubits(rho.system, n, omega0)
    i_f = _qfi_of(rho, qfi_value)
    ratio = _qfi_ratio(i_f, (n * omega0) ** 2)
    rhs = n * LN2 * binary_entropy(0.5 * (1.0 - math.sqrt(ratio)))
    return TradeoffEntry("qubit_binary_entropy",
                         _w_coh_of(rho, g, w_coh_value), rhs)


def tight_binomial_bound(rho: QuantumState, g: GibbsData,
                         n: int | None = None,
                         omega0: float | None = None,
                         w_coh_value: float | None = None,
                         qfi_value: float | None = None) -> TradeoffEntry:
    """Tighter qubit trade-off with ln C(N, N/2) in place of N ln2."""
    n, omega0 = _require_uniform_qubits(rho.system, n, omega0)
    i_f = _qfi_of(rho, qfi_value)
    ratio = _qfi_ratio(i_f, (n * omega0) ** 2)
    rhs = log_binomial(n, n / 2.0) * binary_entropy(0.5 * (1.0 - math.sqrt(ratio)))
    return TradeoffEntry("tight_binomial", _w_coh_of(rho, g, w_coh_value), rhs)


def verify_binomial_inequality(n: int, beyond_verified_ok: bool = False) -> bool:
    """Check ln C(N, n) <= H_b(n/N) * ln C(N, N/2) for every integer n.

    Verified numerically for N <= 100; beyond that raise unless the caller
    explicitly accepts the unverified range.
    """
    if n < 1:
        raise BadParamsError("need N >= 1")
    if n > 100 and not beyond_verified_ok:
        raise RangeExceededError(
            "the inequality is only verified for N <= 100; "
            "pass beyond_verified_ok=True to evaluate anyway"
        )
    central = log_binomial(n, n / 2.0)
    for k in range(n + 1):
        lhs = log_binomial(n, k)
        rhs = binary_entropy(k / n) * central
        if lhs > rhs + 1e-9:
            return False
    return True


def two_qubit_linear_bound(rho: QuantumState, g: GibbsData,
                           omega0: float | None = None,
                           w_coh_value: float | None = None,
                           qfi_value: float | None = None) -> TradeoffEntry:
    """Two-qubit linear trade-off:
    w_coh + ln2 * I_F / (4 omega0^2) <= ln2."""
    n, omega0 = _require_uniform_qubits(rho.system, 2, omega0)
    i_f = _qfi_of(rho, qfi_value)
    lhs = _w_coh_of(rho, g, w_coh_value) + LN2 * i_f / (4.0 * omega0 ** 2)
    return TradeoffEntry("two_qubit_linear", lhs, LN2)


def general_tradeoff_bound(rho: QuantumState, g: GibbsData,
                           w_coh_value: float | None = None,
                           qfi_value: float | None = None) -> TradeoffEntry:
    """Arbitrary-subsystem trade-off:
    w_coh + I_F / (2 Delta_E^2) <= sum_i ln d_i, where Delta_E^2 sums the
    squared local spectral spans."""
    system = rho.system
    delta_sq = float(np.sum(system.local_spans ** 2))
    i_f = _qfi_of(rho, qfi_value)
    if delta_sq == 0.0:
        # constant Hamiltonian: the QFI vanishes identically
        clock_term = 0.0 if i_f <= 1e-12 else math.inf
    else:
        clock_term = i_f / (2.0 * delta_sq)
    lhs = _w_coh_of(rho, g, w_coh_value) + clock_term
    rhs = float(sum(math.log(d) for d in system.dims))
    return TradeoffEntry("general", lhs, rhs)


def per_particle_bound(rho: QuantumState, g: GibbsData,
                       w_coh_value: float | None = None,
                       qfi_value: float | None = None) -> TradeoffEntry:
    """Identical-subsystem reduction of the general bound, per particle:
    w_coh/N + I_F / (2 N^2 Delta_0^2) <= ln d."""
    system = rho.system
    if not system.identical_subsystems():
        raise WrongSystemShapeError("per-particle form needs identical subsystems")
    n = system.n_subsystems
    entry = general_tradeoff_bound(rho, g, w_coh_value, qfi_value)
    return TradeoffEntry("per_particle", entry.lhs / n, entry.rhs / n)


def tradeoff_report(rho: QuantumState, g: GibbsData) -> TradeoffReport:
    """Compute w_coh and the QFI once and evaluate every applicable bound."""
    w, _ = divergence.w_coh(rho, g)
    i_f = clock.qfi(rho)
    system = rho.system
    entries: dict[str, TradeoffEntry] = {}
    entries["degeneracy"] = degeneracy_bound(rho, g, w_coh_value=w)
    entries["general"] = general_tradeoff_bound(rho, g, w_coh_value=w, qfi_value=i_f)
    if system.identical_subsystems():
        entries["per_particle"] = per_particle_bound(rho, g, w_coh_value=w,
                                                     qfi_value=i_f)
    shape = system.uniform_qubits()
    if shape is not None:
        entries["qubit_binary_entropy"] = qubit_binary_entropy_bound(
            rho, g, w_coh_value=w, qfi_value=i_f)
        entries["tight_binomial"] = tight_binomial_bound(
            rho, g, w_coh_value=w, qfi_value=i_f)
        if shape[0] == 2:
            entries["two_qubit_linear"] = two_qubit_linear_bound(
                rho, g, w_coh_value=w, qfi_value=i_f)
    delta_sq = float(np.sum(system.local_spans ** 2))
    return TradeoffReport(w, i_f, delta_sq, system.dims, entries)


# ---------------------------------------------------------------------------
# proof-chain diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofChain:
    """Intermediate quantities of the qubit-bound derivation, ordered
    w_coh <= degeneracy_rhs <= jensen_mid <= binary_entropy_rhs."""

    w_coh: float
    degeneracy_rhs: float
    jensen_mid: float
    binary_entropy_rhs: float

    @property
    def ordered(self) -> bool:
        t = SLACK_TOL
        return (self.w_coh <= self.degeneracy_rhs + t
                and self.degeneracy_rhs <= self.jensen_mid + t
                and self.jensen_mid <= self.binary_entropy_rhs + t)


def proof_chain(rho: QuantumState, g: GibbsData,
                w_coh_value: float | None = None,
                qfi_value: float | None = None) -> ProofChain:
    n, omega0 = _require_uniform_qubits(rho.system)
    w = _w_coh_of(rho, g, w_coh_value)
    data = states_mod.classical_data(rho)
    p = data.block_probs
    blocks = rho.system.blocks
    excitations = np.rint((blocks.energies - blocks.energies[0]) / omega0)
    deg_rhs = float(p @ np.log(blocks.degeneracies))
    jensen_mid = n * LN2 * float(p @ binary_entropy(excitations / n))
    top = qubit_binary_entropy_bound(rho, g, w_coh_value=w,
                                     qfi_value=qfi_value).rhs
    return ProofChain(w, deg_rhs, jensen_mid, top)


def jensen_entropy_bound(xs, ps) -> tuple[float, float]:
    """The series step of the qubit bound on a bare distribution:
    sum_x p_x H_b(x) <= H_b(y), y = (1 - sqrt((1-2m)^2 + 4 Var)) / 2.

    Returns (lhs, rhs) in bits.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    ps = ps / ps.sum()
    lhs = float(ps @ binary_entropy(xs))
    mean = float(ps @ xs)
    var = float(ps @ (xs - mean) ** 2)
    radicand = min((1.0 - 2.0 * mean) ** 2 + 4.0 * var, 1.0)
    rhs = binary_entropy(0.5 * (1.0 - math.sqrt(radicand)))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Hoeffding frequency bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoeffdingReport:
    energies: np.ndarray
    frequencies: np.ndarray
    bounds: np.ndarray
    mu: float
    delta_e_sq: float

    @property
    def holds(self) -> bool:
        return bool(np.all(self.frequencies <= self.bounds + 1e-12))


def hoeffding_frequency_bound(system: CompositeSystem) -> HoeffdingReport:
    """Check f_E = g_E / D <= exp(-2 (E - mu)^2 / Delta_E^2) for every block,
    with mu the uniform mean energy: the tail bound for a sum of independent
    bounded uniform local energies."""
    blocks = system.blocks
    mu = system.uniform_mean_energy
    delta_sq = float(np.sum(system.local_spans ** 2))
    freqs = blocks.degeneracies / blocks.dim
    dev_sq = (blocks.energies - mu) ** 2
    if delta_sq == 0.0:
        bounds = np.where(dev_sq <= 1e-18, 1.0, 0.0)
    else:
        bounds = np.exp(-2.0 * dev_sq / delta_sq)
    return HoeffdingReport(blocks.energies, freqs, bounds, mu, delta_sq)


# ---------------------------------------------------------------------------
# finite energy-resolution window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowTradeoffReport:
    """Work and clock balance at finite energy resolution epsilon.

    Windows act as merged degenerate blocks for both dephasings;
    ``r_correction`` and ``r_tilde_correction`` are the O(epsilon) slack
    added to the general bound, the latter covering the worst-case QFI
    perturbation ``qfi_perturbation_bound`` from any Hamiltonian filling
    the windows.
    """

    epsilon: float
    w_coh_eps: float
    scan: divergence.AlphaScan
    qfi: float
    delta_e_sq: float
    r_correction: float
    r_tilde_correction: float
    qfi_perturbation_bound: float
    populations: dict[int, float]
    entries: dict[str, TradeoffEntry]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries.values())


def energy_window_tradeoff(rho: QuantumState, g: GibbsData, epsilon: float,
                           mu: float | None = None) -> WindowTradeoffReport:
    """Evaluate the trade-off with width-epsilon energy windows.

    w_coh^eps is the work from coherence with every window treated as one
    degenerate block (representative energy: degeneracy-weighted mean of the
    member blocks), so near-degenerate external coherence counts as
    internal.  Asserted entries:

      window:           w_coh^eps + I_F/(2 D^2) <= sum ln d_i + R(eps)
      window_perturbed: same with the QFI evaluated against any window
                        filling, bounded by I_F + 4 eps |H| + eps^2,
                        against sum ln d_i + R~(eps)
    """
    system = rho.system
    windows = model.energy_windows(system, epsilon, mu)
    blocks = system.blocks

    parts = []
    for m in windows.ms:
        ids = windows.block_members[m]
        members = np.concatenate([blocks.members[b] for b in ids])
        parts.append((windows.rep_energies[m], np.sort(members)))
    w_eps, scan = divergence._w_coh_on_partition(rho, g.beta, parts)

    data = states_mod.classical_data(rho)
    pops = windows.populations(data.block_probs)
    p_abs_m = sum(p * abs(m) for m, p in pops.items())
    p0 = pops.get(0, 0.0)

    delta_sq = float(np.sum(system.local_spans ** 2))
    h_norm = float(np.max(np.abs(system.total_energies)))
    i_f = clock.qfi(rho)
    sum_ln_d = float(sum(math.log(d) for d in system.dims))

    r = (2.0 * epsilon * p_abs_m - epsilon ** 2 * p0) / delta_sq
    r_tilde = (2.0 * epsilon * (p_abs_m + h_norm)
               + epsilon ** 2 * (0.5 - p0)) / delta_sq
    qfi_pert = 4.0 * epsilon * h_norm + epsilon ** 2

    entries = {
        "window": TradeoffEntry(
            "window", w_eps + i_f / (2.0 * delta_sq), sum_ln_d + r),
        "window_perturbed": TradeoffEntry(
            "window_perturbed",
            w_eps + (i_f + qfi_pert) / (2.0 * delta_sq),
            sum_ln_d + r_tilde),
    }
    return WindowTradeoffReport(float(epsilon), w_eps, scan, i_f, delta_sq,
                                r, r_tilde, qfi_pert, pops, entries)


# ---------------------------------------------------------------------------
# random-state sweep
# ---------------------------------------------------------------------------

def bound_sweep(system: CompositeSystem, beta: float, samples: int, seed: int,
                check_chain: bool | None = None):
    """Haar-random pure-state sweep of every applicable bound.

    States are drawn with per-index seeding (seed + index), so the rows are
    independent of evaluation order.  Returns (rows, violations): rows are
    (state_id, w_coh, qfi, bound_name, lhs, rhs, slack).
    """
    g = model.gibbs(system, beta)
    if check_chain is None:
        check_chain = system.uniform_qubits() is not None
    rows = []
    violations = []
    for i in range(samples):
        rng = np.random.default_rng(seed + i)
        rho = states_mod.random_pure_state(system, rng)
        report = tradeoff_report(rho, g)
        for entry in report.entries.values():
            rows.append((i, report.w_coh, report.qfi, entry.name,
                         entry.lhs, entry.rhs, entry.slack))
            if not entry.holds:
                violations.append((i, entry))
        if check_chain:
            chain = proof_chain(rho, g, w_coh_value=report.w_coh,
                                qfi_value=report.qfi)
            if not chain.ordered:
                violations.append((i, chain))
    return rows, violations
