import numpy as np
import pytest

from qptsim import operators as op
from qptsim.errors import ValidationError
from qptsim.numerics import commutator, eigvalsh, max_norm


def test_fock_small():
    f = op.fock(2)
    assert np.array_equal(f.a, [[0, 1], [0, 0]])
    f4 = op.fock(4)
    assert np.allclose(np.diag(f4.a, 1), np.sqrt([1, 2, 3]))


def test_fock_commutator_truncation():
    n = 7
    f = op.fock(n)
    c = commutator(f.a, f.a_dag)
    expected = np.eye(n)
    expected[-1, -1] = 1 - n
    assert np.allclose(c, expected)


@pytest.mark.parametrize("bad", [0, 1, 2.5])
def test_fock_rejects(bad):
    with pytest.raises(ValidationError):
        op.fock(bad)


def test_spins_eigenvalues():
    assert np.allclose(eigvalsh(op.spins(1).Sz), [-0.5, 0.5])
    assert np.allclose(eigvalsh(op.spins(2).Sz), [-1, 0, 0, 1])
    s2 = eigvalsh(op.spins(3).S2)
    assert np.allclose(s2, [0.75] * 4 + [3.75] * 4)


def test_spins_basis_convention():
    # qubit 1 is the most significant bit and index 1 is the excited state
    s = op.spins(2)
    assert np.allclose(np.diag(s.excitations), [0, 1, 1, 2])
    assert np.allclose(np.diag(s.sz[0]), [-1, -1, 1, 1])


@pytest.mark.parametrize("N", [0, 13])
def test_spins_range(N):
    with pytest.raises(ValidationError):
        op.spins(N)


def test_angular_momentum_blocks():
    b = op.angular_momentum_block(0.5)
    assert np.allclose(b.Jx, op.SIGMA_X / 2)
    assert np.allclose(b.Jy, op.SIGMA_Y / 2)
    assert np.allclose(b.Jz, op.SIGMA_Z / 2)
    b1 = op.angular_momentum_block(1)
    assert np.allclose(b1.Jz, np.diag([-1, 0, 1]))
    assert np.isclose(b1.Jp[1, 0], np.sqrt(2))
    assert np.allclose(eigvalsh(op.angular_momentum_block(1.5).Jx), [-1.5, -0.5, 0.5, 1.5])


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 2, 3.5])
def test_block_algebra(j):
    b = op.angular_momentum_block(j)
    assert max_norm(commutator(b.Jx, b.Jy) - 1j * b.Jz) < 1e-12
    J2 = b.Jx @ b.Jx + b.Jy @ b.Jy + b.Jz @ b.Jz
    assert max_norm(J2 - b.J2 * np.eye(b.dim)) < 1e-12


def test_multiplicities():
    for N in range(1, 9):
        total = sum((2 * j + 1) * op.spin_multiplicity(N, j) for j in op.allowed_spin_numbers(N))
        assert total == 2 ** N
    assert op.spin_multiplicity(3, 0.5) == 2
    assert op.spin_multiplicity(4, 0) == 2
    assert op.spin_multiplicity(4, 2.5) == 0


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_block_union_matches_full_space(N):
    s = op.spins(N)
    Wq, D = 1.3, 0.7
    full = np.sort(eigvalsh(2 * Wq * s.Sz + D * (s.S2 - s.Sz @ s.Sz)))
    parts = []
    for j in op.allowed_spin_numbers(N):
        b = op.angular_momentum_block(j)
        e = eigvalsh(2 * Wq * b.Jz + D * (b.J2 * np.eye(b.dim) - b.Jz @ b.Jz))
        parts += list(e) * op.spin_multiplicity(N, j)
    assert np.allclose(full, np.sort(parts), atol=1e-10)


def test_symmetry_ops():
    sym = op.symmetry_ops(2, 1)
    assert np.allclose(np.diag(sym.parity), [1, -1, -1, 1])
    assert np.array_equal(sym.parity @ sym.parity, np.eye(4))
    sym = op.symmetry_ops(5, 3)
    exc = np.real(np.diag(sym.excitation))
    assert exc.min() >= 0 and exc.max() <= 4 + 3
    assert np.allclose(exc, np.round(exc))
    assert np.allclose(np.exp(1j * np.pi * exc), np.diag(sym.parity))
