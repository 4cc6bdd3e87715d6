"""Dense complex linear algebra kernel.

Hermitian eigendecomposition, fractional matrix powers, tensor products.
All functions are pure; Hermitian-only entry points verify their symmetry
precondition and raise instead of silently symmetrizing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianError, NotPSDError

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10
# Eigenvalues below SUPPORT_RTOL * max(eigenvalue) count as exact zeros when
# taking fractional powers; density matrices arrive with roundoff tails that
# would otherwise contaminate small powers.
SUPPORT_RTOL = 1e-12


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(np.asarray(a)))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the first factor's index varies slowest."""
    return np.kron(np.asarray(a), np.asarray(b))


def hermiticity_defect(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def check_hermitian(a, rtol: float = HERMITIAN_RTOL, what: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianError(f"{what} is not square: shape {a.shape}")
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    defect = hermiticity_defect(a)
    if defect > rtol * scale:
        raise NonHermitianError(
            f"{what} fails the Hermitian check: |A - A^dag| = {defect:.3e} "
            f"> {rtol:.1e} * {scale:.3e}"
        )
    return a


@dataclass(frozen=True)
class HermitianEigensystem:
    """Ascending eigenvalues and the unitary of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eigh(a) -> HermitianEigensystem:
    """Eigendecomposition of a Hermitian matrix (checked)."""
    a = check_hermitian(a)
    w, u = np.linalg.eigh(a)
    return HermitianEigensystem(w, u)


def psd_eigh(a, rtol: float = PSD_RTOL) -> HermitianEigensystem:
    """Like :func:`eigh` for a PSD matrix; roundoff-negative eigenvalues are
    clipped to zero, genuinely negative ones raise ``NotPSDError``."""
    es = eigh(a)
    w = es.eigenvalues.copy()
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -rtol * scale:
        raise NotPSDError(
            f"minimum eigenvalue {w[0]:.3e} below -{rtol:.1e} * {scale:.3e}"
        )
    np.clip(w, 0.0, None, out=w)
    return HermitianEigensystem(w, es.eigenvectors)


def support_powers(w: np.ndarray, alpha: float,
                   support_rtol: float = SUPPORT_RTOL) -> np.ndarray:
    """Elementwise ``w ** alpha`` with 0 ** alpha := 0 on the numerical kernel.

    Entries below ``support_rtol * max(w)`` are treated as exact zeros, so
    ``alpha = 0`` yields the support indicator and negative ``alpha`` the
    pseudo-inverse power.
    """
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    if w.size == 0:
        return out
    cut = support_rtol * float(w.max())
    on = w > cut
    out[on] = w[on] ** alpha
    return out


def mat_pow(a, alpha: float, support_rtol: float = SUPPORT_RTOL) -> np.ndarray:
    """``A ** alpha`` for PSD Hermitian ``A`` via eigendecomposition.

    ``alpha = 0`` returns the projector onto the support.  Negative ``alpha``
    is the pseudo-power restricted to the support.
    """
    es = psd_eigh(a)
    pw = support_powers(es.eigenvalues, alpha, support_rtol)
    u = es.eigenvectors
    return (u * pw) @ u.conj().T
