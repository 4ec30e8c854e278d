"""Hamiltonian matrices for the qubit-resonator models.

One qubit::

    w_r b^dag b + w_q sz/2 - g_x (b + b^dag) sx/2 - i g_y (b - b^dag) sy/2

Several qubits (collective operators ``S_k``)::

    p_r w_r d^dag d + p_q w_q S_z - g_x (d + d^dag) S_x - i g_y (d - d^dag) S_y
        + s_x D_x S_x^2 + s_y D_y S_y^2

with resonator prefactor ``p_r`` in {1, 3}, qubit prefactor ``p_q`` in {1, 2}
and signs ``s_x, s_y``.  The "bare" two-qubit circuit model uses
``(p_r, p_q, s_x, s_y) = (1, 1, -1, +1)``; the sign-corrected model used for
two, three and N qubits uses ``(3, 2, +1, +1)``.

All energies are in units of ``omega_r`` unless the caller chooses otherwise.
"""
from dataclasses import dataclass, replace
import math

import numpy as np

from .errors import ConvergenceError, ValidationError
from .numerics import eigvalsh, kron
from .operators import allowed_spin_numbers, angular_momentum_block, fock, spins

MAX_FULL_TENSOR_QUBITS = 4
MAX_CUTOFF = 4096


@dataclass(frozen=True)
class ModelParams:
    omega_r: float
    omega_q: float
    g_x: float
    g_y: float
    n_qubits: int = 1
    d_x: float = 0.0
    d_y: float = 0.0
    sign_x: int = 1
    sign_y: int = 1
    resonator_prefactor: int = 1
    qubit_prefactor: int = 1

    def __post_init__(self):
        bad = None
        if not self.omega_r > 0:
            bad = f"omega_r must be positive, got {self.omega_r}"
        elif not self.omega_q > 0:
            bad = f"omega_q must be positive, got {self.omega_q}"
        elif int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            bad = f"n_qubits must be a positive integer, got {self.n_qubits}"
        elif self.sign_x not in (-1, 1) or self.sign_y not in (-1, 1):
            bad = f"signs must be +1 or -1, got ({self.sign_x}, {self.sign_y})"
        elif self.resonator_prefactor not in (1, 3):
            bad = f"resonator_prefactor must be 1 or 3, got {self.resonator_prefactor}"
        elif self.qubit_prefactor not in (1, 2):
            bad = f"qubit_prefactor must be 1 or 2, got {self.qubit_prefactor}"
        elif not all(map(math.isfinite, (self.g_x, self.g_y, self.d_x, self.d_y))):
            bad = "couplings must be finite"
        if bad:
            raise ValidationError(bad, module="models", code="bad_params")

    @property
    def ratio(self):
        return self.omega_q / self.omega_r

    @classmethod
    def one_qubit(cls, lambda_x, lambda_y, ratio, omega_r=1.0):
        """Single-qubit model from dimensionless couplings ``g / sqrt(w_r w_q)``."""
        omega_q = ratio * omega_r
        s = math.sqrt(omega_r * omega_q)
        return cls(omega_r, omega_q, lambda_x * s, lambda_y * s)

    @classmethod
    def qubit_qubit(cls, lambda_x, lambda_y, ratio, n_qubits=2, omega_r=1.0,
                    signs=(1, 1), prefactors=(3, 2)):
        """Multi-qubit model with ``D_k = g_k**2 / omega_r = lambda_k**2 omega_q``.

        The defaults give the sign-corrected model; pass ``signs=(-1, 1)`` and
        ``prefactors=(1, 1)`` for the bare circuit Hamiltonian.
        """
        omega_q = ratio * omega_r
        s = math.sqrt(omega_r * omega_q)
        return cls(omega_r, omega_q, lambda_x * s, lambda_y * s, n_qubits,
                   d_x=lambda_x ** 2 * omega_q, d_y=lambda_y ** 2 * omega_q,
                   sign_x=signs[0], sign_y=signs[1],
                   resonator_prefactor=prefactors[0], qubit_prefactor=prefactors[1])


@dataclass(frozen=True)
class FrameSpec:
    """Boson displacement ``b -> b + alpha`` applied before building matrices."""

    alpha: complex = 0.0


LAB_FRAME = FrameSpec()


def _boson(n_cut, frame):
    f = fock(n_cut)
    alpha = complex(frame.alpha if frame is not None else 0.0)
    a = f.a + alpha * f.identity
    return a, a.conj().T


def _assemble(p, a, ad, Sx, Sy, Sz, Sx2, Sy2, qubit_coeff):
    nb = a.shape[0]
    ns = Sz.shape[0]
    Ib = np.eye(nb, dtype=complex)
    Is = np.eye(ns, dtype=complex)
    H = p.resonator_prefactor * p.omega_r * kron(ad @ a, Is)
    H = H + qubit_coeff * p.omega_q * kron(Ib, Sz)
    H = H - p.g_x * kron(a + ad, Sx)
    H = H - 1j * p.g_y * kron(a - ad, Sy)
    if p.d_x:
        H = H + p.sign_x * p.d_x * kron(Ib, Sx2)
    if p.d_y:
        H = H + p.sign_y * p.d_y * kron(Ib, Sy2)
    return 0.5 * (H + H.conj().T)


def build_one_qubit(params, n_cut, frame=LAB_FRAME):
    """Single-qubit Hamiltonian on ``n_cut * 2`` states.

    Constant terms generated by the displacement are kept.
    """
    if params.n_qubits != 1 or params.d_x or params.d_y:
        raise ValidationError("build_one_qubit needs n_qubits = 1 and D_x = D_y = 0",
                              module="models", code="bad_params")
    a, ad = _boson(n_cut, frame)
    s = spins(1)
    # the coefficient convention of this model is w_q sigma_z / 2 = w_q S_z
    zero = np.zeros((2, 2), dtype=complex)
    return _assemble(replace(params, resonator_prefactor=1), a, ad,
                     s.Sx, s.Sy, s.Sz, zero, zero, qubit_coeff=1.0)


def build_multi_qubit(params, n_cut, frame=LAB_FRAME):
    """Full tensor-product Hamiltonian for 2 to 4 qubits."""
    N = params.n_qubits
    if N > MAX_FULL_TENSOR_QUBITS:
        raise ValidationError(
            f"{N} qubits is too many for the full tensor build; "
            "use build_collective_block for each spin block",
            module="models", code="too_many_qubits")
    if N < 2:
        raise ValidationError("build_multi_qubit needs at least two qubits; "
                              "use build_one_qubit", module="models", code="bad_params")
    a, ad = _boson(n_cut, frame)
    s = spins(N)
    return _assemble(params, a, ad, s.Sx, s.Sy, s.Sz, s.Sx @ s.Sx, s.Sy @ s.Sy,
                     qubit_coeff=params.qubit_prefactor)


def check_block(j, n_qubits):
    two_j = 2 * j
    if (abs(two_j - round(two_j)) > 1e-9 or j < 0 or two_j > n_qubits + 1e-9
            or (round(two_j) - n_qubits) % 2):
        raise ValidationError(
            f"j = {j} is not an allowed total spin for {n_qubits} qubits",
            module="models", code="bad_block")


def build_collective_block(params, j, n_cut, frame=LAB_FRAME):
    """Hamiltonian restricted to the collective-spin block of total spin ``j``.

    Inside the block ``S_k -> J_k``, so with equal couplings and equal
    ``D`` this is ``p_r w_r t^dag t + p_q w_q J_z + D (j(j+1) - J_z^2) - g (...)``.
    Unequal couplings are accepted as well; the block structure holds for
    any collective Hamiltonian.
    """
    check_block(j, params.n_qubits)
    a, ad = _boson(n_cut, frame)
    b = angular_momentum_block(j)
    return _assemble(params, a, ad, b.Jx, b.Jy, b.Jz, b.Jx @ b.Jx, b.Jy @ b.Jy,
                     qubit_coeff=params.qubit_prefactor)


def build(params, n_cut, frame=LAB_FRAME, j=None):
    """Dispatch to the right builder for ``params`` (and block ``j`` if given)."""
    if j is not None:
        return build_collective_block(params, j, n_cut, frame)
    if params.n_qubits == 1:
        return build_one_qubit(params, n_cut, frame)
    return build_multi_qubit(params, n_cut, frame)


def spin_dim(params, j=None):
    return int(round(2 * j + 1)) if j is not None else 2 ** params.n_qubits


def converge_cutoff(params, n_cut=16, frame=LAB_FRAME, j=None, k=6, tol=1e-8,
                    max_cut=MAX_CUTOFF):
    """Double the Fock cutoff until the lowest ``k`` levels move by less than ``tol * omega_r``.

    Returns
    -------
    n_cut : int
        The larger cutoff of the last converged pair.
    levels : ndarray
        Lowest eigenvalues at that cutoff.
    """
    n = max(int(n_cut), 2)
    prev = np.sort(eigvalsh(build(params, n, frame, j)))[:k]
    while True:
        m = 2 * n
        if m > max_cut:
            raise ConvergenceError(
                f"Fock cutoff did not converge below n_cut = {max_cut}",
                module="models", code="cutoff_not_converged")
        cur = np.sort(eigvalsh(build(params, m, frame, j)))[:k]
        kk = min(len(prev), len(cur))
        if np.max(np.abs(cur[:kk] - prev[:kk])) < tol * params.omega_r:
            return m, cur
        n, prev = m, cur


def collective_blocks(n_qubits):
    return allowed_spin_numbers(n_qubits)
