"""Elementary operators: truncated boson mode, qubit Paulis, collective
spins, angular-momentum blocks and the parity / excitation-number pair.

Basis convention used everywhere in the package: boson index major, spin
index minor.  The spin index is the binary string ``q1 ... qN`` with qubit 1
the most significant bit and ``q = 1`` meaning the excited state (the
eigenvalue of ``sigma_plus @ sigma_minus``).  For a single qubit the basis
is therefore ``(|down>, |up>)`` and ``sigma_z = diag(-1, +1)``.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import ValidationError
from .numerics import kron_all

MAX_QUBITS = 12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


@dataclass(frozen=True)
class FockOperators:
    n_cut: int
    a: np.ndarray
    a_dag: np.ndarray
    n: np.ndarray

    @property
    def identity(self):
        return np.eye(self.n_cut, dtype=complex)


@dataclass(frozen=True)
class SpinOperators:
    n_qubits: int
    sx: tuple
    sy: tuple
    sz: tuple
    sp: tuple
    sm: tuple
    Sx: np.ndarray
    Sy: np.ndarray
    Sz: np.ndarray

    @property
    def dim(self):
        return 2 ** self.n_qubits

    @property
    def identity(self):
        return np.eye(self.dim, dtype=complex)

    @property
    def S2(self):
        return self.Sx @ self.Sx + self.Sy @ self.Sy + self.Sz @ self.Sz

    @property
    def excitations(self):
        """sum_i sigma_i^+ sigma_i^-  (number of excited qubits)."""
        return sum(p @ m for p, m in zip(self.sp, self.sm))


@dataclass(frozen=True)
class AngularMomentumBlock:
    j: float
    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray

    @property
    def dim(self):
        return self.Jz.shape[0]

    @property
    def J2(self):
        return self.j * (self.j + 1)

    @property
    def m_values(self):
        return np.real(np.diag(self.Jz))

    @property
    def Jp(self):
        return self.Jx + 1j * self.Jy

    @property
    def Jm(self):
        return self.Jx - 1j * self.Jy


@dataclass(frozen=True)
class SymmetryOperators:
    parity: np.ndarray
    excitation: np.ndarray


def fock(n_cut):
    """Annihilation, creation and number operators on ``n_cut`` Fock levels."""
    if int(n_cut) != n_cut or n_cut < 2:
        raise ValidationError(f"n_cut must be an integer >= 2, got {n_cut}",
                              module="operators", code="bad_cutoff")
    n_cut = int(n_cut)
    a = np.diag(np.sqrt(np.arange(1, n_cut, dtype=float)), 1).astype(complex)
    n = np.diag(np.arange(n_cut, dtype=float)).astype(complex)
    return FockOperators(n_cut, a, a.conj().T.copy(), n)


def _embed(op, site, n_qubits):
    mats = [np.eye(2, dtype=complex)] * n_qubits
    mats[site] = op
    return kron_all(*mats)


def spins(n_qubits):
    """Per-qubit Pauli operators and collective ``S_k = sum_i sigma_i^k / 2``."""
    if int(n_qubits) != n_qubits or not 1 <= n_qubits <= MAX_QUBITS:
        raise ValidationError(
            f"number of qubits must be in [1, {MAX_QUBITS}], got {n_qubits}",
            module="operators", code="bad_qubit_count")
    N = int(n_qubits)
    sx = tuple(_embed(SIGMA_X, i, N) for i in range(N))
    sy = tuple(_embed(SIGMA_Y, i, N) for i in range(N))
    sz = tuple(_embed(SIGMA_Z, i, N) for i in range(N))
    sp = tuple(_embed(SIGMA_PLUS, i, N) for i in range(N))
    sm = tuple(_embed(SIGMA_MINUS, i, N) for i in range(N))
    return SpinOperators(N, sx, sy, sz, sp, sm,
                         0.5 * sum(sx), 0.5 * sum(sy), 0.5 * sum(sz))


def _as_spin_number(j):
    two_j = 2 * Fraction(j).limit_denominator(4)
    if two_j.denominator != 1 or two_j < 0:
        raise ValidationError(f"spin number must be a non-negative half-integer, got {j}",
                              module="operators", code="bad_spin")
    return int(two_j)


def angular_momentum_block(j):
    """Spin-``j`` matrices in the ``|j, m>`` basis, ``m = -j, ..., j`` ascending."""
    two_j = _as_spin_number(j)
    j = two_j / 2
    m = -j + np.arange(two_j + 1)
    Jp = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    for k in range(two_j):
        Jp[k + 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    Jm = Jp.conj().T
    return AngularMomentumBlock(j, 0.5 * (Jp + Jm), (Jp - Jm) / 2j,
                                np.diag(m).astype(complex))


def allowed_spin_numbers(n_qubits):
    """Total-spin values ``j`` that occur for ``n_qubits`` spin-1/2 particles, descending."""
    N = int(n_qubits)
    return [N / 2 - k for k in range(N // 2 + 1)]


def spin_multiplicity(n_qubits, j):
    """Number of times the irreducible block ``j`` appears in ``(1/2)^(x N)``."""
    N = int(n_qubits)
    k = N / 2 - j
    if k < 0 or abs(k - round(k)) > 1e-9:
        return 0
    k = int(round(k))
    return comb(N, k) - (comb(N, k - 1) if k >= 1 else 0)


def symmetry_ops(n_cut, n_qubits):
    """Parity ``exp(i pi N)`` and total excitation number ``N`` on Fock (x) spins."""
    f = fock(n_cut)
    s = spins(n_qubits)
    exc_spin = np.real(np.diag(s.excitations))
    exc = (np.arange(f.n_cut)[:, None] + exc_spin[None, :]).ravel()
    parity = np.where(np.round(exc).astype(int) % 2 == 0, 1.0, -1.0)
    return SymmetryOperators(np.diag(parity).astype(complex), np.diag(exc).astype(complex))


def block_symmetry_ops(n_cut, j, n_qubits):
    """Parity and excitation number restricted to one collective-spin block.

    Inside the block the number of excited qubits is ``m + N/2``.
    """
    f = fock(n_cut)
    blk = angular_momentum_block(j)
    exc_spin = blk.m_values + n_qubits / 2
    exc = (np.arange(f.n_cut)[:, None] + exc_spin[None, :]).ravel()
    parity = np.where(np.round(exc).astype(int) % 2 == 0, 1.0, -1.0)
    return SymmetryOperators(np.diag(parity).astype(complex), np.diag(exc).astype(complex))
