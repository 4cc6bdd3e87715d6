"""Quantum states bound to a composite system, dephasing maps, constructors.

Two dephasing maps act on every state: full dephasing to the product energy
basis (kills all coherence) and block dephasing (kills only coherence
between different total energies, keeping internal coherence).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import (
    BadParamsError,
    DimensionMismatchError,
    NonHermitianError,
    NotPSDError,
)
from .linalg import hermiticity_defect
from .model import CompositeSystem, GibbsData, qubit_system

TRACE_ATOL = 1e-10
HERM_ATOL = 1e-12
MIN_EIG_ATOL = 1e-10
MAX_DENSE_QUBITS = 10


@dataclass(frozen=True)
class QuantumState:
    """Dense Hermitian unit-trace matrix bound to a CompositeSystem."""

    system: CompositeSystem
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        d = self.system.dim
        if m.shape != (d, d):
            raise DimensionMismatchError(
                f"state matrix shape {m.shape} does not match system dim {d}"
            )
        scale = max(1.0, float(np.max(np.abs(m))))
        if hermiticity_defect(m) > HERM_ATOL * scale:
            raise NonHermitianError("state matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise BadParamsError(f"state trace {tr} differs from 1 beyond 1e-10")
        wmin = float(np.linalg.eigvalsh(m)[0])
        if wmin < -MIN_EIG_ATOL:
            raise NotPSDError(f"state has eigenvalue {wmin:.3e} < -1e-10")

    @property
    def dim(self) -> int:
        return self.system.dim

    def diagonal(self) -> np.ndarray:
        """Real diagonal, roundoff negatives clipped to zero."""
        return np.clip(np.real(np.diag(self.matrix)), 0.0, None)


@dataclass(frozen=True)
class ClassicalEnergyData:
    """Classical energy statistics of a state: per-basis-index probabilities
    and the induced per-block distribution."""

    basis_probs: np.ndarray
    block_probs: np.ndarray


def pure_state(system: CompositeSystem, vector) -> QuantumState:
    v = np.asarray(vector, dtype=complex).ravel()
    if v.size != system.dim:
        raise DimensionMismatchError(
            f"vector length {v.size} does not match system dim {system.dim}"
        )
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise BadParamsError("zero vector")
    v = v / norm
    return QuantumState(system, np.outer(v, v.conj()))


def dephase_full(rho: QuantumState) -> QuantumState:
    """Project onto the product energy basis: keep the diagonal only."""
    return QuantumState(rho.system, np.diag(np.diag(rho.matrix).real.astype(complex)))


def dephase_blocks(rho: QuantumState) -> QuantumState:
    """Remove coherence between different total-energy blocks."""
    blk = rho.system.blocks.index_to_block
    mask = blk[:, None] == blk[None, :]
    out = np.where(mask, rho.matrix, 0.0)
    # exact Hermiticity/trace are preserved: the mask is symmetric
    return QuantumState(rho.system, out)


def is_block_diagonal(rho: QuantumState, atol: float = 1e-10) -> bool:
    blk = rho.system.blocks.index_to_block
    off = blk[:, None] != blk[None, :]
    if not off.any():
        return True
    return float(np.max(np.abs(rho.matrix[off]))) <= atol


def classical_data(rho: QuantumState) -> ClassicalEnergyData:
    p = rho.diagonal()
    blocks = rho.system.blocks
    pb = np.array([float(p[m].sum()) for m in blocks.members])
    return ClassicalEnergyData(p, pb)


def reduced_state(rho: QuantumState, i: int) -> QuantumState:
    """Partial trace down to subsystem ``i``."""
    dims = rho.system.dims
    n = len(dims)
    if not 0 <= i < n:
        raise BadParamsError(f"subsystem index {i} out of range")
    m = rho.matrix.reshape(*dims, *dims)
    row = list(range(n))
    col = list(range(n))
    col[i] = n  # leave the kept subsystem's column index open
    red = np.einsum(m, row + col, [i, n])
    sub = CompositeSystem((rho.system.local_spectra[i],),
                          rho.system.block_tolerance)
    return QuantumState(sub, red)


# ---------------------------------------------------------------------------
# named constructors
# ---------------------------------------------------------------------------

def _check_dense_size(n: int):
    if n > MAX_DENSE_QUBITS:
        raise BadParamsError(
            f"dense density matrices are limited to {MAX_DENSE_QUBITS} qubits; "
            "use the closed forms for larger registers"
        )


def ghz_vector(n: int, omega0: float = 1.0) -> tuple[CompositeSystem, np.ndarray]:
    if n < 1 or n > 20:
        raise BadParamsError("ghz vector supports 1 <= n <= 20")
    sys_ = qubit_system(n, omega0)
    v = np.zeros(sys_.dim, dtype=complex)
    v[0] = v[-1] = 1.0 / math.sqrt(2.0)
    return sys_, v


def ghz(n: int, omega0: float = 1.0) -> QuantumState:
    """Equal superposition of the all-ground and all-excited strings."""
    _check_dense_size(n)
    sys_, v = ghz_vector(n, omega0)
    return pure_state(sys_, v)


def dicke_vector(n: int, k: int, omega0: float = 1.0) -> tuple[CompositeSystem, np.ndarray]:
    if not 0 <= k <= n:
        raise BadParamsError("need 0 <= k <= n")
    if n < 1 or n > 20:
        raise BadParamsError("dicke vector supports 1 <= n <= 20")
    sys_ = qubit_system(n, omega0)
    v = np.zeros(sys_.dim, dtype=complex)
    amp = 1.0 / math.sqrt(math.comb(n, k))
    for excited in itertools.combinations(range(n), k):
        idx = sum(1 << (n - 1 - pos) for pos in excited)
        v[idx] = amp
    return sys_, v


def dicke(n: int, k: int, omega0: float = 1.0) -> QuantumState:
    """Symmetric superposition of all strings with k excitations."""
    _check_dense_size(n)
    sys_, v = dicke_vector(n, k, omega0)
    return pure_state(sys_, v)


def coherent_gibbs(system: CompositeSystem, beta: float) -> QuantumState:
    """Pure state whose amplitudes are square-root Gibbs weights."""
    g = model.gibbs(system, beta)
    return pure_state(system, np.sqrt(g.weights))


def two_qubit_psi(p0: float, p1: float, p2: float,
                  omega0: float = 1.0) -> QuantumState:
    """sqrt(p0)|00> + sqrt(p1/2)(|01>+|10>) + sqrt(p2)|11>."""
    probs = (p0, p1, p2)
    if any(p < -1e-12 for p in probs):
        raise BadParamsError("probabilities must be non-negative")
    total = sum(probs)
    if abs(total - 1.0) > 1e-9:
        raise BadParamsError(f"probabilities sum to {total}, expected 1")
    sys_ = qubit_system(2, omega0)
    a = math.sqrt(max(p0, 0.0) / total)
    b = math.sqrt(max(p1, 0.0) / (2.0 * total))
    c = math.sqrt(max(p2, 0.0) / total)
    return pure_state(sys_, np.array([a, b, b, c], dtype=complex))


def tensor_power(rho: QuantumState, n: int) -> QuantumState:
    if n < 1:
        raise BadParamsError("tensor power needs n >= 1")
    spectra = rho.system.local_spectra * n
    sys_ = CompositeSystem(spectra, rho.system.block_tolerance)
    out = rho.matrix
    for _ in range(n - 1):
        out = np.kron(out, rho.matrix)
    return QuantumState(sys_, out)


def uniform_superposition(indices, energies=None) -> QuantumState:
    """Uniform superposition over a set of levels of one energy ladder.

    ``energies`` defaults to the integer ladder 0..max(indices).
    """
    idx = sorted(set(int(i) for i in indices))
    if not idx or idx[0] < 0:
        raise BadParamsError("indices must be non-negative and non-empty")
    if energies is None:
        energies = list(range(idx[-1] + 1))
    if idx[-1] >= len(energies):
        raise BadParamsError("index outside the supplied ladder")
    sys_ = CompositeSystem((tuple(energies),))
    v = np.zeros(sys_.dim, dtype=complex)
    v[idx] = 1.0 / math.sqrt(len(idx))
    return pure_state(sys_, v)


def dense(system: CompositeSystem, matrix) -> QuantumState:
    return QuantumState(system, np.asarray(matrix, dtype=complex))


_EXAMPLE_LADDER = CompositeSystem(((0.0, 1.0, 2.0, 3.0),))


def supplemental_rho() -> QuantumState:
    """4-level ladder example state with one coherence per positive mode."""
    m = np.array([
        [0.50, 0.00, 0.10, 0.10],
        [0.00, 0.20, 0.00, 0.00],
        [0.10, 0.00, 0.25, 0.10],
        [0.10, 0.00, 0.10, 0.05],
    ], dtype=complex)
    return QuantumState(_EXAMPLE_LADDER, m)


def supplemental_sigma() -> QuantumState:
    """Companion state to :func:`supplemental_rho` with slightly damped modes."""
    m = np.array([
        [0.500, 0.099, 0.099, 0.099],
        [0.099, 0.250, 0.000, 0.000],
        [0.099, 0.000, 0.200, 0.000],
        [0.099, 0.000, 0.000, 0.050],
    ], dtype=complex)
    return QuantumState(_EXAMPLE_LADDER, m)


def make_state(kind: str, **params) -> QuantumState:
    """Dispatch constructor used by the CLI."""
    makers = {
        "ghz": ghz,
        "dicke": dicke,
        "coherent_gibbs": coherent_gibbs,
        "two_qubit_psi": two_qubit_psi,
        "tensor_power": tensor_power,
        "uniform_superposition": uniform_superposition,
        "dense": dense,
        "supplemental_rho": supplemental_rho,
        "supplemental_sigma": supplemental_sigma,
    }
    if kind not in makers:
        raise BadParamsError(f"unknown state kind {kind!r}")
    return makers[kind](**params)


# ---------------------------------------------------------------------------
# random ensembles (seeded; used by sweeps and property tests)
# ---------------------------------------------------------------------------

def random_pure_state(system: CompositeSystem, rng: np.random.Generator) -> QuantumState:
    d = system.dim
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return pure_state(system, v)


def random_mixed_state(system: CompositeSystem, rng: np.random.Generator,
                       rank: int | None = None) -> QuantumState:
    d = system.dim
    r = d if rank is None else max(1, min(rank, d))
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return QuantumState(system, m)
