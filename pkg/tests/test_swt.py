import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qptsim import effective as eff, swt
from qptsim.errors import DegeneracyError, ValidationError
from qptsim.models import ModelParams
from qptsim.numerics import eigvalsh, max_norm
from qptsim.verify import ab_generator_error, one_qubit_heff_error


def _two_level(E1, E2, v):
    H0 = np.diag([E1, E2]).astype(complex)
    V = np.array([[0, v], [np.conj(v), 0]], dtype=complex)
    return swt.make_split(np.eye(2, dtype=complex)[:, :1], H0, V)


@settings(max_examples=30)
@given(E1=st.floats(-5, 5), gap=st.floats(0.1, 5), re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_two_by_two_generator(E1, gap, re, im):
    v = complex(re, im)
    E2 = E1 + gap
    S = swt.sw_generator(_two_level(E1, E2, v)).S1
    expected = np.array([[0, v / (E1 - E2)], [-np.conj(v) / (E1 - E2), 0]])
    assert max_norm(S - expected) < 1e-12
    assert max_norm(S + S.conj().T) == 0


def test_zero_perturbation():
    H0 = np.diag([0.0, 1.0, 3.0]).astype(complex)
    W = np.eye(3, dtype=complex)[:, :2]
    res = swt.sw_effective(swt.make_split(W, H0, np.zeros((3, 3))))
    assert np.allclose(res.H_eff, np.diag([0.0, 1.0]))


def test_degenerate_pair_is_an_error():
    with pytest.raises(DegeneracyError) as exc:
        swt.sw_generator(_two_level(1.0, 1.0, 0.1))
    assert "low level 0" in str(exc.value)


def test_split_validation():
    H0 = np.array([[0, 1], [1, 2]], dtype=complex)
    with pytest.raises(ValidationError):
        swt.make_split(np.eye(2, dtype=complex)[:, :1], H0, np.zeros((2, 2)))
    with pytest.raises(ValidationError):
        swt.make_split(np.ones((2, 1), dtype=complex), np.eye(2), np.zeros((2, 2)))


def test_block_diagonal_part_of_v_enters_first_order():
    H0 = np.diag([0.0, 0.0, 4.0]).astype(complex)
    V = np.zeros((3, 3), dtype=complex)
    V[0, 1] = V[1, 0] = 0.3  # inside the low block
    V[0, 2] = V[2, 0] = 0.1
    W = np.eye(3, dtype=complex)[:, :2]
    H = swt.sw_effective(swt.make_split(W, H0, V)).H_eff
    assert H[0, 1] == pytest.approx(0.3)
    assert H[0, 0].real == pytest.approx(-0.01 / 4)


def test_one_qubit_generator_closed_form():
    R = 1e4
    p = ModelParams.one_qubit(0.1, 0.05, R)
    n = 10
    S = swt.sw_generator(swt.one_qubit_split(p, n)).S1
    ref = swt.one_qubit_closed_form_generator(p, n)
    assert max_norm(S - ref) / max_norm(ref) <= 5 / R


def test_one_qubit_heff_matches_quadratic_form():
    assert one_qubit_heff_error(0.1, 0.05, 1e4) < 1e-3


def test_one_qubit_heff_boson_part():
    # Away from the top Fock level the numerical H_eff differs from the
    # closed form by the constant lx*ly*omega_r/2 that the closed form drops.
    lx, ly, R, n = 0.1, 0.05, 1e4, 12
    p = ModelParams.one_qubit(lx, ly, R)
    H = swt.sw_effective(swt.one_qubit_split(p, n)).H_eff
    q = eff.normal_effective(eff.couplings(p))
    ref = swt.quadratic_form_matrix(q.A, q.B, q.C0, n)
    diff = (H - ref)[:-1, :-1]
    assert max_norm(diff - 0.5 * lx * ly * np.eye(n - 1)) < 1e-3 * lx * ly


def test_second_order_scaling():
    errs = [one_qubit_heff_error(0.2 * f, 0.1 * f, 1e4) for f in (1, 0.5, 0.25)]
    assert errs[0] / errs[1] >= 2 and errs[1] / errs[2] >= 2


def test_collective_generator_closed_forms():
    p = ModelParams.qubit_qubit(0.8, 0.8, 50.0, n_qubits=3)
    split = swt.collective_split(p, 1.5, 6, include_resonator=False)
    S = swt.sw_generator(split).S1
    a, _ = swt.closed_form_generator_elements(p, 1.5, -1.5)
    for n in range(1, 6):
        assert abs(S[(n - 1) * 4 + 1, n * 4] - a * np.sqrt(n)) < 1e-10
    assert max(ab_generator_error(N) for N in (2, 3, 4, 5)) < 1e-10


def test_two_qubit_effective_gap():
    lx, ly, R = 0.3, 0.2, 1e4
    p = ModelParams.qubit_qubit(lx, ly, R)
    res = swt.sw_effective(swt.qubit_hamiltonian_split(p, 8))
    w = eigvalsh(res.H_eff)
    assert (w[1] - w[0]) == pytest.approx(eff.two_qubit_gap(lx, ly).value, rel=1e-2)


def _splits():
    yield swt.one_qubit_split(ModelParams.one_qubit(0.4, 0.1, 20.0), 10)
    yield swt.qubit_hamiltonian_split(ModelParams.qubit_qubit(0.5, 0.2, 20.0), 6)
    yield swt.qubit_hamiltonian_split(ModelParams.qubit_qubit(0.5, 0.2, 20.0, n_qubits=3), 5)
    yield swt.collective_split(ModelParams.qubit_qubit(0.7, 0.7, 20.0, n_qubits=5), 2.5, 6)


@pytest.mark.parametrize("split", list(_splits()))
def test_residual_and_frame_change(split):
    res = swt.sw_generator(split)
    assert res.residual <= 1e-9 * max_norm(split.V)
    assert max_norm(res.S1 + res.S1.conj().T) < 1e-14
    H = split.H0 + split.V + (split.V_diag if split.V_diag is not None else 0)
    assert np.max(np.abs(eigvalsh(swt.transformed(split, res.S1)) - eigvalsh(H))) < 1e-9


def test_rank_one_perturbation_theory(rng):
    n = 10
    E = np.concatenate([[0.0], np.sort(rng.uniform(1, 4, n - 1))])
    V = np.zeros((n, n), dtype=complex)
    V[0, 1:] = 0.1 * (rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
    V = V + V.conj().T
    split = swt.make_split(np.eye(n, dtype=complex)[:, :1], np.diag(E).astype(complex), V)
    shift = swt.sw_effective(split).H_eff[0, 0].real
    assert shift == pytest.approx(np.sum(np.abs(V[0, 1:]) ** 2 / (0 - E[1:])), abs=1e-10)
