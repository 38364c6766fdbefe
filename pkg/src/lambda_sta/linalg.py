"""Small dense Hermitian linear algebra for the 3-level Hilbert space.

Everything here operates on plain numpy arrays: states are complex
3-vectors, operators are complex 3x3 matrices.  Exponentials of Hermitian
matrices are computed exactly through the spectral decomposition, so every
propagator built on top of this module is unitary to machine precision.
"""

from dataclasses import dataclass

import numpy as np

HERMITICITY_RTOL = 1e-10


class NotHermitian(ValueError):
    """Raised when an operation requires a Hermitian matrix and gets none."""


def hermiticity_defect(a):
    """Max entrywise deviation of ``a`` from its conjugate transpose."""
    a = np.asarray(a, dtype=complex)
    return float(np.abs(a - a.conj().T).max())


def require_hermitian(a):
    a = np.asarray(a, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    defect = hermiticity_defect(a)
    if defect > HERMITICITY_RTOL * scale:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds tolerance")
    return a


@dataclass(frozen=True)
class Spectral3:
    """Eigendecomposition of a 3x3 Hermitian matrix.

    ``eigenvalues`` are real and sorted ascending; ``eigenvectors[:, i]`` is
    the unit eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigendecompose(a):
    """Spectral decomposition of a Hermitian 3x3 matrix.

    Raises NotHermitian when the input fails the hermiticity check.
    """
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    return Spectral3(eigenvalues=w, eigenvectors=v)


def expi_hermitian(a, s):
    """exp(i*s*A) for Hermitian A, exact through the eigenbasis."""
    spec = hermitian_eigendecompose(a)
    v = spec.eigenvectors
    phases = np.exp(1j * s * spec.eigenvalues)
    return (v * phases) @ v.conj().T
