"""Composite noninteracting systems.

A :class:`CompositeSystem` is a list of local energy spectra.  The product
basis is ordered lexicographically in the local indices with subsystem 1
slowest, so total energies, partial traces and tensor powers are plain index
arithmetic.  From the total energies we derive the partition of basis
indices into total-energy blocks, Gibbs weights, and finite-resolution
energy windows.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AmbiguousBlockingError, BadParamsError

MAX_DIMENSION = 2 ** 20
DEFAULT_BLOCK_RTOL = 1e-9


def _as_spectrum(values) -> tuple[float, ...]:
    spec = tuple(float(v) for v in values)
    if not spec:
        raise BadParamsError("local spectrum must be non-empty")
    if any(b < a for a, b in zip(spec, spec[1:])):
        raise BadParamsError(f"local spectrum must be ascending: {spec}")
    return spec


@dataclass(frozen=True)
class CompositeSystem:
    """Noninteracting N-partite system defined by its local spectra.

    ``block_tolerance`` is the absolute gap below which two total energies
    belong to the same degenerate block; it defaults to
    ``1e-9 * max|E|`` so integer-grid spectra block exactly.
    """

    local_spectra: tuple[tuple[float, ...], ...]
    block_tolerance: float = -1.0  # sentinel, resolved in __post_init__

    def __post_init__(self):
        spectra = tuple(_as_spectrum(s) for s in self.local_spectra)
        object.__setattr__(self, "local_spectra", spectra)
        dim = 1
        for s in spectra:
            dim *= len(s)
            if dim > MAX_DIMENSION:
                raise BadParamsError(
                    f"total dimension exceeds {MAX_DIMENSION}"
                )
        tol = self.block_tolerance
        if tol < 0:
            emax = max((abs(e) for s in spectra for e in s), default=0.0)
            tol = DEFAULT_BLOCK_RTOL * emax
        object.__setattr__(self, "block_tolerance", float(tol))

    @property
    def n_subsystems(self) -> int:
        return len(self.local_spectra)

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.local_spectra)

    @cached_property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    @cached_property
    def total_energies(self) -> np.ndarray:
        """Total energy of every product-basis index (subsystem 1 slowest)."""
        arrays = [np.asarray(s, dtype=float) for s in self.local_spectra]
        return functools.reduce(np.add.outer, arrays).ravel()

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.total_energies.astype(complex))

    @cached_property
    def blocks(self) -> "BlockStructure":
        return build_blocks(self)

    @cached_property
    def uniform_mean_energy(self) -> float:
        """Mean total energy of the uniform distribution over basis states."""
        return float(sum(sum(s) / len(s) for s in self.local_spectra))

    @cached_property
    def local_spans(self) -> np.ndarray:
        return np.array([s[-1] - s[0] for s in self.local_spectra])

    def uniform_qubits(self) -> tuple[int, float] | None:
        """Return (N, gap) when every subsystem is a two-level system with
        the same gap, else None."""
        if any(len(s) != 2 for s in self.local_spectra):
            return None
        gaps = [s[1] - s[0] for s in self.local_spectra]
        g0 = gaps[0]
        if g0 <= 0:
            return None
        if any(abs(g - g0) > 1e-12 * g0 for g in gaps):
            return None
        return len(self.local_spectra), g0

    def identical_subsystems(self) -> bool:
        first = self.local_spectra[0]
        return all(s == first for s in self.local_spectra)


def qubit_system(n: int, omega0: float = 1.0,
                 block_tolerance: float = -1.0) -> CompositeSystem:
    """N two-level subsystems with levels (0, omega0)."""
    if n < 1:
        raise BadParamsError("need at least one qubit")
    if omega0 <= 0:
        raise BadParamsError("omega0 must be positive")
    return CompositeSystem(((0.0, float(omega0)),) * n, block_tolerance)


@dataclass(frozen=True)
class BlockStructure:
    """Partition of product-basis indices into total-energy classes."""

    energies: np.ndarray          # representative energy per block, ascending
    members: tuple[np.ndarray, ...]
    index_to_block: np.ndarray    # basis index -> block id

    @property
    def n_blocks(self) -> int:
        return len(self.energies)

    @cached_property
    def degeneracies(self) -> np.ndarray:
        return np.array([len(m) for m in self.members])

    @property
    def dim(self) -> int:
        return int(self.index_to_block.size)


def build_blocks(system: CompositeSystem) -> BlockStructure:
    """Group basis indices into total-energy blocks.

    Grouping is anchored at the smallest member of each block: a new block
    starts when an energy exceeds the block anchor by more than the
    tolerance, which bounds the within-block spread by the tolerance.
    Raises ``AmbiguousBlockingError`` when any two total energies differ by
    an amount inside (tol, 10 tol), i.e. when the tolerance sits inside a
    near-degenerate gap and the grouping would be arbitrary.
    """
    e = system.total_energies
    tol = system.block_tolerance
    order = np.argsort(e, kind="stable")
    es = e[order]

    if tol > 0:
        lo = np.searchsorted(es, es + tol, side="right")
        hi = np.searchsorted(es, es + 10.0 * tol, side="left")
        bad = np.nonzero(hi > lo)[0]
        if bad.size:
            i = int(bad[0])
            gap = es[lo[i]] - es[i]
            raise AmbiguousBlockingError(
                f"total-energy gap {gap:.6e} lies inside "
                f"({tol:.1e}, {10 * tol:.1e}); adjust block_tolerance"
            )

    boundaries = [0]
    anchor = es[0]
    for i in range(1, es.size):
        if es[i] - anchor > tol:
            boundaries.append(i)
            anchor = es[i]
    boundaries.append(es.size)

    members = []
    energies = []
    index_to_block = np.empty(es.size, dtype=np.int64)
    for b, (start, stop) in enumerate(zip(boundaries[:-1], boundaries[1:])):
        idx = np.sort(order[start:stop])
        members.append(idx)
        energies.append(float(np.mean(es[start:stop])))
        index_to_block[idx] = b
    return BlockStructure(np.asarray(energies), tuple(members), index_to_block)


@dataclass(frozen=True)
class GibbsData:
    """Thermal data at inverse temperature beta (k_B T = 1 units)."""

    system: CompositeSystem
    beta: float
    z: float
    log_z: float
    weights: np.ndarray        # e^{-beta E_i} / Z per basis index
    block_weights: np.ndarray  # representative weight per block

    @cached_property
    def gibbs_matrix(self) -> np.ndarray:
        return np.diag(self.weights.astype(complex))


def gibbs(system: CompositeSystem, beta: float) -> GibbsData:
    """Partition function and normalized Gibbs weights."""
    if beta <= 0:
        raise BadParamsError("beta must be positive")
    e = system.total_energies
    e0 = float(e.min())
    shifted = np.exp(-beta * (e - e0))
    s = float(shifted.sum())
    weights = shifted / s
    log_z = math.log(s) - beta * e0
    z = math.exp(log_z) if log_z < 700 else math.inf
    blocks = system.blocks
    block_weights = np.array([float(weights[m].mean()) for m in blocks.members])
    return GibbsData(system, float(beta), z, log_z, weights, block_weights)


def window_of(values, mu: float, epsilon: float) -> np.ndarray:
    """Window index m for each value, for half-open windows of width epsilon
    centered at mu + m*epsilon.

    Windows are open toward m = 0: for m > 0 the interval is closed on the
    left and open on the right, mirrored for m < 0, and open on both ends
    for m = 0.  A value exactly on a boundary therefore lands in the window
    farther from the center.
    """
    if epsilon <= 0:
        raise BadParamsError("epsilon must be positive")
    v = np.asarray(values, dtype=float)
    x = (v - mu) / epsilon
    m = np.rint(x).astype(np.int64)
    hi = mu + (m + 0.5) * epsilon
    lo = mu + (m - 0.5) * epsilon
    m = m + ((v >= hi) & (m >= 0)) - ((v <= lo) & (m <= 0))
    return m


@dataclass(frozen=True)
class EnergyWindows:
    """Finite-resolution coarse-graining of the block structure.

    Each block is assigned to exactly one window; ``rep_energies`` carries
    the degeneracy-weighted mean energy of the member blocks, so a window
    holding a single block reproduces that block exactly.
    """

    epsilon: float
    mu: float
    ms: tuple[int, ...]                      # sorted window labels
    block_members: dict[int, np.ndarray]     # m -> member block ids
    degeneracies: dict[int, int]             # g_m
    frequencies: dict[int, float]            # f_m = g_m / D
    rep_energies: dict[int, float]
    block_to_window: np.ndarray              # block id -> m

    def centers(self) -> dict[int, float]:
        return {m: self.mu + m * self.epsilon for m in self.ms}

    def populations(self, block_probs) -> dict[int, float]:
        """Aggregate per-block probabilities into window populations."""
        p = np.asarray(block_probs, dtype=float)
        return {m: float(p[ids].sum()) for m, ids in self.block_members.items()}


def energy_windows(system: CompositeSystem, epsilon: float,
                   mu: float | None = None) -> EnergyWindows:
    """Assign every total-energy block to a width-epsilon window.

    ``mu`` defaults to the uniform mean energy of the system.
    """
    if mu is None:
        mu = system.uniform_mean_energy
    blocks = system.blocks
    m_of_block = window_of(blocks.energies, mu, epsilon)
    degs = blocks.degeneracies
    d = blocks.dim

    ms = sorted(set(int(m) for m in m_of_block))
    block_members: dict[int, np.ndarray] = {}
    g: dict[int, int] = {}
    f: dict[int, float] = {}
    rep: dict[int, float] = {}
    for m in ms:
        ids = np.nonzero(m_of_block == m)[0]
        block_members[m] = ids
        gm = int(degs[ids].sum())
        g[m] = gm
        f[m] = gm / d
        rep[m] = float(np.average(blocks.energies[ids], weights=degs[ids]))
    return EnergyWindows(float(epsilon), float(mu), tuple(ms), block_members,
                         g, f, rep, m_of_block)
