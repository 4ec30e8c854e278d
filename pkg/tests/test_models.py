import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qptsim import models as md
from qptsim.errors import ConvergenceError, ValidationError
from qptsim.models import FrameSpec, ModelParams
from qptsim.numerics import commutator, eigvalsh, max_norm
from qptsim.operators import block_symmetry_ops, spin_multiplicity, symmetry_ops


def _rel_commutator(H, O):
    return max_norm(commutator(H, O)) / max_norm(H)


def test_decoupled_one_qubit_spectrum():
    p = ModelParams(1.0, 7.3, 0.0, 0.0)
    w = eigvalsh(md.build(p, 10))
    expected = np.sort([m + s * 7.3 / 2 for m in range(10) for s in (-1, 1)])
    assert np.allclose(w, expected)
    assert w[0] == pytest.approx(-7.3 / 2)


def test_one_qubit_gap_example():
    p = ModelParams.one_qubit(0.5, 0.3, 200.0)
    w = eigvalsh(md.build(p, 60))
    ref = math.sqrt((1 - 0.25) * (1 - 0.09))
    assert ref == pytest.approx(0.8261, abs=1e-4)
    assert (w[1] - w[0]) == pytest.approx(ref, rel=0.02)


@settings(max_examples=20, deadline=None)
@given(g=st.floats(0.0, 3.0), ratio=st.floats(0.5, 20.0))
def test_jaynes_cummings_conserves_excitations(g, ratio):
    p = ModelParams(1.0, ratio, g, g)
    H = md.build(p, 10)
    assert _rel_commutator(H, symmetry_ops(10, 1).excitation) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(gx=st.floats(-2.0, 2.0), gy=st.floats(-2.0, 2.0), N=st.integers(1, 3))
def test_parity_commutes(gx, gy, N):
    if N == 1:
        p = ModelParams(1.0, 3.0, gx, gy)
    else:
        p = ModelParams(1.0, 3.0, gx, gy, N, d_x=gx * gx, d_y=0.5 * gy * gy, sign_x=-1,
                        resonator_prefactor=3, qubit_prefactor=2)
    H = md.build(p, 8)
    assert max_norm(commutator(H, symmetry_ops(8, N).parity)) <= 1e-12 * max(max_norm(H), 1e-300)


def test_two_qubit_decoupled_ground():
    p = ModelParams(1.0, 5.0, 0.0, 0.0, 2, resonator_prefactor=1, qubit_prefactor=2)
    w = eigvalsh(md.build(p, 6))
    assert w[0] == pytest.approx(-2 * 5.0)


def test_u1_depends_on_signs():
    corrected = ModelParams.qubit_qubit(0.7, 0.7, 4.0)
    bare = ModelParams.qubit_qubit(0.7, 0.7, 4.0, signs=(-1, 1), prefactors=(1, 1))
    N = symmetry_ops(8, 2).excitation
    assert _rel_commutator(md.build(corrected, 8), N) <= 1e-12
    assert _rel_commutator(md.build(bare, 8), N) > 1e-3


def test_too_many_qubits():
    p = ModelParams.qubit_qubit(0.5, 0.5, 4.0, n_qubits=5)
    with pytest.raises(ValidationError) as exc:
        md.build(p, 4)
    assert exc.value.code == "too_many_qubits"
    assert "build_collective_block" in str(exc.value)


def test_block_union_equals_full_tensor():
    p = ModelParams.qubit_qubit(0.6, 0.6, 3.0)
    n = 8
    full = np.sort(eigvalsh(md.build(p, n)))
    parts = []
    for j in md.collective_blocks(2):
        parts += list(eigvalsh(md.build_collective_block(p, j, n))) * spin_multiplicity(2, j)
    assert np.allclose(full, np.sort(parts), atol=1e-9)


def test_scalar_block_is_boson_ladder():
    p = ModelParams.qubit_qubit(0.9, 0.9, 3.0, n_qubits=4)
    w = eigvalsh(md.build_collective_block(p, 0, 6))
    assert np.allclose(w, 3 * np.arange(6))


def test_block_ground_state_without_coupling():
    N, Oq = 3, 2.0
    D = 1.5  # below 2 Oq
    p = ModelParams(1.0, Oq, 0.0, 0.0, N, d_x=D, d_y=D, resonator_prefactor=3, qubit_prefactor=2)
    j = N / 2
    H = md.build_collective_block(p, j, 4)
    w, v = np.linalg.eigh(H)
    # |j, -j> with the boson in vacuum: 2 Oq (-j) + D (j(j+1) - j^2)
    assert w[0] == pytest.approx(-2 * Oq * j + D * j)
    assert abs(v[0, 0]) == pytest.approx(1.0)


@pytest.mark.parametrize("j", [1.0, 2.5, -0.5, 0.25])
def test_bad_block(j):
    p = ModelParams.qubit_qubit(0.5, 0.5, 3.0, n_qubits=3)
    with pytest.raises(ValidationError):
        md.build_collective_block(p, j, 4)


@pytest.mark.parametrize("kwargs", [dict(omega_r=0), dict(omega_q=-1), dict(n_qubits=0),
                                    dict(sign_x=2), dict(resonator_prefactor=2),
                                    dict(qubit_prefactor=3), dict(g_x=math.nan)])
def test_params_validation(kwargs):
    base = dict(omega_r=1.0, omega_q=1.0, g_x=0.1, g_y=0.1)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        ModelParams(**base)


def test_frame_covariance():
    p = ModelParams.one_qubit(0.6, 0.4, 4.0)
    alpha = 0.7 - 0.5j
    n = 40
    shifted = eigvalsh(md.build(p, n, FrameSpec(alpha)))[:6]
    plain = eigvalsh(md.build(p, n + math.ceil(4 * abs(alpha) ** 2)))[:6]
    assert np.max(np.abs(shifted - plain)) < 1e-6


def test_collective_block_parity():
    p = ModelParams.qubit_qubit(1.2, 0.4, 3.0, n_qubits=5)
    for j in md.collective_blocks(5):
        H = md.build_collective_block(p, j, 6)
        P = block_symmetry_ops(6, j, 5).parity
        assert max_norm(commutator(H, P)) <= 1e-12 * max_norm(H)


def test_converge_cutoff_doubles():
    p = ModelParams.one_qubit(0.5, 0.2, 10.0)
    n, levels = md.converge_cutoff(p, 8)
    assert n >= 16 and n & (n - 1) == 0
    ref = eigvalsh(md.build(p, 2 * n))[:6]
    assert np.max(np.abs(levels - ref)) < 1e-8


def test_converge_cutoff_gives_up():
    p = ModelParams.one_qubit(2.0, 0.0, 200.0)
    with pytest.raises(ConvergenceError):
        md.converge_cutoff(p, 8, max_cut=32)
