"""Exception taxonomy shared across the package.

Two branches: :class:`InputError` for invalid user-supplied parameters or
documents, :class:`NumericsError` for preconditions that fail while
processing otherwise well-formed input (symmetry checks, shape checks,
size limits).  The CLI maps the branches to distinct exit codes.
"""


class CoherenceLedgerError(Exception):
    """Base class for every error raised by this package."""


class InputError(CoherenceLedgerError):
    """Invalid user-supplied parameters or documents."""


class BadParamsError(InputError):
    """Constructor or channel parameters out of range."""


class BadAlphaError(InputError):
    """Renyi order alpha outside the accepted domain."""


class NumericsError(CoherenceLedgerError):
    """A numerical precondition failed during a computation."""


class NonHermitianError(NumericsError):
    """Matrix fails the Hermitian symmetry check."""


class NotPSDError(NumericsError):
    """Matrix has an eigenvalue below the positive-semidefinite tolerance."""


class NotPureError(NumericsError):
    """State is not rank one within tolerance."""


class NotBlockDiagonalError(NumericsError):
    """State carries coherence across total-energy blocks where forbidden."""


class AmbiguousBlockingError(NumericsError):
    """Total-energy gaps fall inside the grouping tolerance's grey zone."""


class DimensionMismatchError(NumericsError):
    """Operands have incompatible dimensions."""


class WrongSystemShapeError(NumericsError):
    """Operation requires a specific subsystem layout (e.g. uniform qubits)."""


class TooLargeError(NumericsError):
    """Requested size exceeds the dense-enumeration limit."""


class RangeExceededError(NumericsError):
    """Argument outside the numerically verified range."""


class QfiOutOfRangeError(NumericsError):
    """Quantum Fisher information exceeds its analytic ceiling beyond tolerance."""
