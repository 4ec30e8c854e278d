"""Numerical Schrieffer-Wolff transformation to second order.

Given an unperturbed Hamiltonian ``H0`` that commutes with a projector
``P`` and a perturbation ``V``, the first-order generator solves
``[S1, H0] = -V_od`` where ``V_od = P V Q + Q V P``.  The projected
second-order Hamiltonian is ``P (H0 + V_d + 1/2 [S1, V_od]) P``.

``S1`` is built in the eigenbases of ``P H0 P`` and ``Q H0 Q`` separately,
so degeneracies inside one block are harmless; only cross-block near
degeneracies that ``V`` actually couples are an error.

The split builders at the bottom choose the low-energy subspace for each
model: spin-down for one qubit, the fermionic vacuum (qubit ground state of
``2 w_q S_z + D_x S_x^2 + D_y S_y^2``) for two qubits, and one or more
``|j, m>`` levels for the collective model.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegeneracyError, ValidationError
from .models import LAB_FRAME, build_collective_block, build_multi_qubit, build_one_qubit
from .numerics import check_hermitian, commutator, dagger, eigh, kron, max_norm
from .operators import angular_momentum_block, fock, spins

DEGENERACY_RTOL = 1e-8
COUPLING_RTOL = 1e-12
BLOCK_RTOL = 1e-10


@dataclass(frozen=True)
class BlockSplit:
    """Low-energy basis ``W`` (orthonormal columns), ``H0`` and ``V``.

    ``V`` holds only the block-off-diagonal part of the perturbation; any
    block-diagonal remainder lives in ``V_diag`` and enters the effective
    Hamiltonian at first order.
    """

    W: np.ndarray
    H0: np.ndarray
    V: np.ndarray
    V_diag: np.ndarray | None = None

    @property
    def P(self):
        return self.W @ dagger(self.W)

    @property
    def dim(self):
        return self.H0.shape[0]


@dataclass(frozen=True)
class SWResult:
    S1: np.ndarray
    residual: float
    H_eff: np.ndarray | None = None


def make_split(W, H0, V):
    """Validate ``H0`` against the low-energy basis ``W`` and split ``V``.

    Raises
    ------
    ValidationError
        If ``W`` is not an isometry or ``H0`` couples ``P`` and ``Q``.
    """
    W = np.asarray(W, dtype=complex)
    H0 = check_hermitian(np.asarray(H0, dtype=complex), rtol=1e-10, module="swt")
    V = check_hermitian(np.asarray(V, dtype=complex), rtol=1e-10, module="swt")
    if W.ndim != 2 or W.shape[0] != H0.shape[0] or H0.shape != V.shape:
        raise ValidationError("shape mismatch between W, H0 and V", module="swt", code="bad_split")
    if max_norm(dagger(W) @ W - np.eye(W.shape[1])) > 1e-10:
        raise ValidationError("W must have orthonormal columns", module="swt", code="bad_split")
    P = W @ dagger(W)
    Q = np.eye(P.shape[0]) - P
    leak = max_norm(P @ H0 @ Q)
    if leak > BLOCK_RTOL * max(max_norm(H0), 1e-300):
        raise ValidationError(f"H0 is not block diagonal: |P H0 Q| = {leak:.3e}",
                              module="swt", code="bad_split")
    V_od = P @ V @ Q + Q @ V @ P
    V_d = P @ V @ P + Q @ V @ Q
    return BlockSplit(W, H0, V_od, V_d if max_norm(V_d) > 0 else None)


def _complement(W):
    n, k = W.shape
    if k == n:
        return np.zeros((n, 0), dtype=complex)
    return scipy.linalg.null_space(dagger(W))


def _block_eig(H0, B):
    if B.shape[1] == 0:
        return np.zeros(0), B
    w, u = eigh(dagger(B) @ H0 @ B)
    return w, B @ u


def sw_generator(split):
    """First-order generator ``S1`` with ``[S1, H0] = -V``."""
    W = split.W
    Wq = _complement(W)
    Ep, Xp = _block_eig(split.H0, W)
    Eq, Xq = _block_eig(split.H0, Wq)
    Vpq = dagger(Xp) @ split.V @ Xq
    gaps = Ep[:, None] - Eq[None, :]
    h_scale = max(max_norm(split.H0), 1e-300)
    v_scale = max_norm(split.V)
    bad = (np.abs(gaps) < DEGENERACY_RTOL * h_scale) & (np.abs(Vpq) > COUPLING_RTOL * v_scale)
    if np.any(bad):
        i, k = np.argwhere(bad)[0]
        raise DegeneracyError(
            f"near-degenerate cross-block pair: low level {i} (E = {Ep[i]:.6g}) and "
            f"high level {k} (E = {Eq[k]:.6g}) coupled with |V| = {abs(Vpq[i, k]):.3e}",
            module="swt", code="degenerate_pair")
    with np.errstate(divide="ignore", invalid="ignore"):
        Spq = np.where(bad | (Vpq == 0), 0.0, Vpq / np.where(gaps == 0, 1.0, gaps))
    S1 = Xp @ Spq @ dagger(Xq)
    S1 = S1 - dagger(S1)
    residual = max_norm(commutator(S1, split.H0) + split.V)
    return SWResult(S1, residual)


def sw_effective(split):
    """Second-order effective Hamiltonian in the basis ``W`` of the low-energy block."""
    res = sw_generator(split)
    W = split.W
    H = split.H0 + 0.5 * commutator(res.S1, split.V)
    if split.V_diag is not None:
        H = H + split.V_diag
    H_eff = dagger(W) @ H @ W
    H_eff = 0.5 * (H_eff + dagger(H_eff))
    return SWResult(res.S1, res.residual, H_eff)


def transformed(split, S1):
    """``exp(S1) (H0 + V) exp(-S1)``; a change of frame with unchanged spectrum."""
    U = scipy.linalg.expm(S1)
    H = split.H0 + split.V + (split.V_diag if split.V_diag is not None else 0)
    return U @ H @ dagger(U)


# --- model splits ----------------------------------------------------------------

def _spin_basis(n_cut, spin_vectors):
    """Columns ``|n> (x) v`` for every boson level ``n`` and spin vector ``v``."""
    Ib = np.eye(n_cut, dtype=complex)
    cols = [kron(Ib[:, [n]], v.reshape(-1, 1)) for n in range(n_cut) for v in spin_vectors]
    return np.hstack(cols)


def one_qubit_split(params, n_cut, frame=LAB_FRAME):
    """Spin-down subspace of the single-qubit model; ``W`` maps Fock states ``|n, down>``."""
    H = build_one_qubit(params, n_cut, frame)
    f = fock(n_cut)
    s = spins(1)
    H0 = params.omega_r * kron(f.n, s.identity) + params.omega_q * kron(f.identity, s.Sz)
    down = np.array([1.0, 0.0], dtype=complex)
    return make_split(_spin_basis(n_cut, [down]), H0, H - H0)


def qubit_ground(params, j=None):
    """Lowest eigenvector of the qubit part ``p_q w_q S_z + s_x D_x S_x^2 + s_y D_y S_y^2``."""
    if j is None:
        s = spins(params.n_qubits)
        Sx, Sy, Sz = s.Sx, s.Sy, s.Sz
    else:
        b = angular_momentum_block(j)
        Sx, Sy, Sz = b.Jx, b.Jy, b.Jz
    Hq = (params.qubit_prefactor * params.omega_q * Sz
          + params.sign_x * params.d_x * Sx @ Sx + params.sign_y * params.d_y * Sy @ Sy)
    w, v = eigh(Hq)
    if len(w) > 1 and w[1] - w[0] < DEGENERACY_RTOL * max(max_norm(Hq), 1e-300):
        raise DegeneracyError("qubit ground state is degenerate", module="swt",
                              code="degenerate_qubit_ground")
    return w, v


def qubit_hamiltonian_split(params, n_cut, frame=LAB_FRAME, include_resonator=True):
    """Split of the multi-qubit model with the qubit ground state as the low block."""
    H = build_multi_qubit(params, n_cut, frame)
    _, v = qubit_ground(params)
    s = spins(params.n_qubits)
    f = fock(n_cut)
    Hq = (params.qubit_prefactor * params.omega_q * s.Sz
          + params.sign_x * params.d_x * s.Sx @ s.Sx + params.sign_y * params.d_y * s.Sy @ s.Sy)
    H0 = kron(f.identity, Hq)
    if include_resonator:
        H0 = H0 + params.resonator_prefactor * params.omega_r * kron(f.n, s.identity)
    V = H - H0
    if not include_resonator:
        V = V - params.resonator_prefactor * params.omega_r * kron(f.n, s.identity)
    return make_split(_spin_basis(n_cut, [v[:, 0]]), H0, V)


def collective_split(params, j, n_cut, low_m=None, include_resonator=True):
    """Split of one collective block with the levels ``m in low_m`` as the low block.

    ``low_m`` defaults to the ground level of the qubit part.  With
    ``include_resonator=False`` the boson energy is moved out of ``H0``, which
    is the static limit where the generator has the closed form
    ``a_{j,m} t |m+1><m| + b_{j,m} t^dag |m-1><m|``.
    """
    H = build_collective_block(params, j, n_cut)
    b = angular_momentum_block(j)
    f = fock(n_cut)
    Hq = (params.qubit_prefactor * params.omega_q * b.Jz
          + params.sign_x * params.d_x * b.Jx @ b.Jx + params.sign_y * params.d_y * b.Jy @ b.Jy)
    if max_norm(Hq - np.diag(np.diag(Hq))) > 1e-12 * max(max_norm(Hq), 1e-300):
        raise ValidationError("collective split needs D_x = D_y (qubit part diagonal in m)",
                              module="swt", code="bad_split")
    m_vals = b.m_values
    if low_m is None:
        low_m = [m_vals[int(np.argmin(np.real(np.diag(Hq))))]]
    Is = np.eye(b.dim, dtype=complex)
    vecs = []
    for m in low_m:
        idx = np.flatnonzero(np.abs(m_vals - m) < 1e-9)
        if not idx.size:
            raise ValidationError(f"m = {m} not in block j = {j}", module="swt", code="bad_split")
        vecs.append(Is[:, idx[0]])
    H0 = kron(f.identity, Hq)
    if include_resonator:
        H0 = H0 + params.resonator_prefactor * params.omega_r * kron(f.n, Is)
    V = H - H0
    if not include_resonator:
        V = V - params.resonator_prefactor * params.omega_r * kron(f.n, Is)
    return make_split(_spin_basis(n_cut, vecs), H0, V)


def closed_form_generator_elements(params, j, m):
    """``(a_{j,m}, b_{j,m})`` of the static-limit collective generator.

    ``a = g sqrt(j(j+1) - m(m+1)) / (-2 W_q + D (1 + 2m))`` and
    ``b = g sqrt(j(j+1) - m(m-1)) / (2 W_q + D (1 - 2m))`` with the model's
    qubit prefactor in place of the 2.
    """
    g, D = params.g_x, params.d_x
    pq = params.qubit_prefactor * params.omega_q
    jj = j * (j + 1)
    a = g * np.sqrt(max(jj - m * (m + 1), 0.0)) / (-pq + D * (1 + 2 * m))
    b = g * np.sqrt(max(jj - m * (m - 1), 0.0)) / (pq + D * (1 - 2 * m))
    return a, b


def one_qubit_closed_form_generator(params, n_cut):
    """Large-``omega_q`` generator
    ``(g_x + g_y)/(2 w_q) (b^dag s- - b s+) + (g_x - g_y)/(2 w_q) (b s- - b^dag s+)``."""
    f = fock(n_cut)
    sp = np.array([[0, 0], [1, 0]], dtype=complex)
    sm = sp.T.copy()
    c1 = (params.g_x + params.g_y) / (2 * params.omega_q)
    c2 = (params.g_x - params.g_y) / (2 * params.omega_q)
    return (c1 * (kron(f.a_dag, sm) - kron(f.a, sp))
            + c2 * (kron(f.a, sm) - kron(f.a_dag, sp)))


def quadratic_form_matrix(A, B, C0, n_cut):
    """Matrix of ``A b^dag b + B (b^2 + b^dag^2) + C0`` on ``n_cut`` Fock levels."""
    f = fock(n_cut)
    return A * f.n + B * (f.a @ f.a + f.a_dag @ f.a_dag) + C0 * f.identity
