"""Dense complex linear algebra helpers.

All matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Tolerances are relative to the largest-magnitude entry, so callers may
rescale energies freely.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ValidationError

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class EigDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        # allows ``w, v = eigh(H)``
        return iter((self.eigenvalues, self.eigenvectors))


def max_norm(M):
    """Largest absolute entry of ``M`` (0 for empty input)."""
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def hermitian_defect(M):
    """max |M_ij - conj(M_ji)|."""
    M = np.asarray(M)
    return max_norm(M - M.conj().T)


def check_hermitian(M, rtol=HERMITIAN_RTOL, module="numerics"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {M.shape}",
                              module=module, code="not_square")
    defect = hermitian_defect(M)
    scale = max_norm(M)
    if defect > rtol * max(scale, np.finfo(float).tiny):
        raise ValidationError(
            f"matrix is not Hermitian: max asymmetry {defect:.3e} "
            f"(max entry {scale:.3e})", module=module, code="not_hermitian")
    return M


def eigh(H):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    H : (n, n) array_like
        Hermitian within ``1e-12`` times its largest entry.

    Returns
    -------
    EigDecomposition
        Eigenvalues in ascending order, eigenvectors as columns.

    Raises
    ------
    ValidationError
        If ``H`` is not square or not Hermitian; the message names the
        largest asymmetry found.
    """
    H = check_hermitian(np.asarray(H, dtype=complex))
    # symmetrise so LAPACK sees exactly Hermitian data
    w, v = np.linalg.eigh(0.5 * (H + H.conj().T))
    return EigDecomposition(w, v)


def eigvalsh(H):
    H = check_hermitian(np.asarray(H, dtype=complex))
    return np.linalg.eigvalsh(0.5 * (H + H.conj().T))


def kron(A, B):
    """Kronecker product; ``(m x n) (x) (p x q)`` gives ``(mp x nq)``."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def kron_all(*mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def commutator(A, B):
    return A @ B - B @ A


def dagger(A):
    return np.asarray(A).conj().T


def expm(A):
    """Matrix exponential (scaling and squaring)."""
    return scipy.linalg.expm(np.asarray(A, dtype=complex))


def second_derivative(samples, h):
    """Central second difference ``(f(x-h) - 2 f(x) + f(x+h)) / h**2``.

    ``samples`` is the triple ``(f(x-h), f(x), f(x+h))``.
    """
    if not h > 0:
        raise ValidationError(f"step must be positive, got {h}",
                              module="numerics", code="bad_step")
    fm, f0, fp = samples
    return (fm - 2.0 * f0 + fp) / (h * h)


def random_hermitian(n, rng):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (X + X.conj().T)


def random_unitary(n, rng):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(X)
    return q * (np.diag(r) / np.abs(np.diag(r)))
