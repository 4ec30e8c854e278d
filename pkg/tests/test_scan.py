import math

import numpy as np
import pytest

from qptsim import effective as eff, scan
from qptsim.errors import ConvergenceError, ValidationError
from qptsim.models import FrameSpec, ModelParams, build
from qptsim.numerics import eigh


def test_decoupled_one_qubit():
    for ratio in (0.5, 3.0):
        r = scan.spectrum(ModelParams(1.0, ratio, 0.0, 0.0))
        assert r.ground_energy == pytest.approx(-ratio / 2)
        assert r.n_G == 0.0
        assert r.gap == pytest.approx(min(1.0, ratio))
        assert np.all(np.diff(r.eigenvalues) >= 0)
        assert r.excitations[0] == 0.0


def test_superradiant_occupation():
    r = scan.spectrum(ModelParams.one_qubit(1.5, 0.0, 50.0))
    assert r.n_G == pytest.approx(22.569, rel=0.05)


def test_displaced_frame_reports_lab_occupation():
    p = ModelParams.one_qubit(1.5, 0.0, 50.0)
    alpha = eff.superradiant_frame(eff.couplings(p)).alpha
    lab = scan.spectrum(p)
    shifted = scan.spectrum(p, frame=FrameSpec(alpha))
    assert shifted.n_G == pytest.approx(lab.n_G, rel=1e-6)
    assert shifted.ground_energy == pytest.approx(lab.ground_energy, abs=1e-7)
    assert math.isnan(shifted.parity)


def test_superradiant_doublet_occupation_agrees():
    p = ModelParams.one_qubit(1.5, 0.0, 50.0)
    n = 256
    w, v = eigh(build(p, n))
    occ = [float(np.dot(np.repeat(np.arange(n), 2), np.abs(v[:, k]) ** 2)) for k in (0, 1)]
    assert w[1] - w[0] < 1e-8
    assert occ[0] == pytest.approx(occ[1], rel=0.01)


def test_two_qubit_inhibition():
    r = scan.spectrum(ModelParams.qubit_qubit(2.5, 2.5, 50.0))
    assert r.n_G < 5


@pytest.mark.parametrize("lx, ly", [(0.2, 0.1), (0.6, 0.6), (0.8, 0.3)])
def test_normal_phase_parity(lx, ly):
    r = scan.spectrum(ModelParams.one_qubit(lx, ly, 20.0))
    assert abs(abs(r.parity) - 1) < 1e-8


def test_collective_takes_lowest_block():
    p = ModelParams.qubit_qubit(2.6, 2.6, 50.0, n_qubits=3)
    r = scan.spectrum(p, model="collective")
    assert r.block_j == 0.5
    per_block = [scan.spectrum(p, j=j).ground_energy for j in (1.5, 0.5)]
    assert r.ground_energy == pytest.approx(min(per_block))


def test_collective_crossover_in_half_spin_block():
    lam = np.linspace(2.0, 2.9, 10)
    n = [scan.spectrum(ModelParams.qubit_qubit(x, x, 50.0, n_qubits=3), j=0.5).n_G for x in lam]
    assert n[0] < 1e-6 and n[-1] > 1.0
    # the fully symmetric block keeps the exact vacuum over the same window
    top = [scan.spectrum(ModelParams.qubit_qubit(x, x, 50.0, n_qubits=3), j=1.5).n_G
           for x in (2.0, 2.9)]
    assert max(top) < 1e-12


def test_spectrum_nonconvergence():
    with pytest.raises(ConvergenceError):
        scan.spectrum(ModelParams.one_qubit(2.0, 0.0, 200.0), max_cut=32)


def test_grid_rows_and_thresholds():
    spec = scan.GridSpec(lambda_x=(0.0, 1.5, 3), lambda_y=(0.0, 1.5, 3), ratio=50.0)
    rows = scan.scan_grid(spec)
    assert len(rows) == 9
    assert [(r.lambda_x, r.lambda_y) for r in rows][:3] == [(0.0, 0.0), (0.0, 0.75), (0.0, 1.5)]
    for r in rows:
        if max(r.lambda_x, r.lambda_y) < 1:
            assert r.n_G < 0.5
            assert r.analytic_phase == "Normal"
    row = next(r for r in rows if (r.lambda_x, r.lambda_y) == (1.5, 0.0))
    assert row.n_G > 10 and row.analytic_phase == "SuperradiantX"


def test_single_point_grid_equals_spectrum():
    spec = scan.GridSpec(lambda_x=(0.4, 0.4, 1), lambda_y=(0.2, 0.2, 1), ratio=10.0)
    (row,) = scan.scan_grid(spec)
    r = scan.spectrum(spec.params_at(row.gx, row.gy))
    assert (row.ground_energy, row.gap, row.n_G, row.parity) == (r.ground_energy, r.gap, r.n_G, r.parity)


def test_grid_determinism_across_threads():
    spec = scan.GridSpec(lambda_x=(0.1, 1.4, 4), lambda_y=(0.0, 1.2, 3), ratio=20.0)
    outs = {scan.rows_to_csv(scan.scan_grid(spec, threads=t)) for t in (1, 1, 3, 8)}
    assert len(outs) == 1


def test_grid_error_rows(monkeypatch):
    real = scan.spectrum

    def flaky(params, *a, **k):
        if params.g_x > 1:
            raise ConvergenceError("boom", module="models", code="cutoff_not_converged")
        return real(params, *a, **k)

    monkeypatch.setattr(scan, "spectrum", flaky)
    spec = scan.GridSpec(gx=(0.0, 2.0, 3), gy=(0.0, 0.0, 1), ratio=4.0)
    rows = scan.scan_grid(spec, threads=2)
    assert len(rows) == 3
    assert rows[0].error is None and rows[2].error.startswith("models:cutoff_not_converged")
    assert math.isnan(rows[2].ground_energy)


def test_csv_format():
    spec = scan.GridSpec(lambda_x=(0.3, 0.3, 1), lambda_y=(0.1, 0.1, 1), ratio=10.0)
    text = scan.rows_to_csv(scan.scan_grid(spec))
    header, line = text.strip().split("\n")
    assert header == "gx,gy,lambda_x,lambda_y,ground_energy,gap,n_G,parity,analytic_phase,analytic_gap"
    fields = line.split(",")
    assert len(fields) == 10
    # shortest round-trip representation
    assert all(float(f) == float(repr(float(f))) for i, f in enumerate(fields) if i != 8)


@pytest.mark.parametrize("kwargs", [dict(), dict(lambda_x=(0, 1, 3), gx=(0, 1, 3)),
                                    dict(lambda_x=(0, 1, 0)), dict(lambda_x=(0, math.inf, 3)),
                                    dict(lambda_x=(0, 1, 3), model="nope")])
def test_gridspec_validation(kwargs):
    with pytest.raises(ValidationError):
        scan.GridSpec(**kwargs)


def test_collective_grid_uses_equal_couplings():
    spec = scan.GridSpec(model="collective", n_qubits=3, lambda_x=(2.2, 2.7, 2), ratio=50.0)
    rows = scan.scan_grid(spec)
    assert all(r.lambda_x == r.lambda_y for r in rows)
    assert rows[0].analytic_phase == "Normal" and rows[1].analytic_phase == "U1Line"


# --- transition detection --------------------------------------------------------

def test_detects_second_order_on_axis():
    lam = np.linspace(0.5, 1.5, 101)
    rep = scan.detect_transitions(scan.analytic_rows([(x, 0.0) for x in lam]), "lambda_x")
    assert len(rep.points) == 1
    (pt,) = rep.points
    assert pt.order == "second" and abs(pt.coordinate - 1.0) <= 0.01 + 1e-12
    assert pt.coordinate in lam


def test_detects_first_order_on_diagonal():
    lx = np.linspace(0.9, 1.7, 81)
    rows = scan.analytic_rows([(x, 2.6 - x) for x in lx])
    rep = scan.detect_transitions(rows, "lambda_x")
    assert rep.orders == ["first"]
    assert rep.points[0].coordinate == pytest.approx(1.3, abs=0.01 + 1e-12)
    arc = scan.detect_transitions(rows, "arclength")
    assert arc.orders == ["first"]


def test_constant_rows_give_empty_report():
    rows = scan.analytic_rows([(x, 0.0) for x in np.linspace(0.1, 0.9, 20)])
    assert scan.detect_transitions(rows, "lambda_x").points == []


def test_too_few_points():
    rows = scan.analytic_rows([(x, 0.0) for x in (0.1, 0.2, 0.3, 0.4)])
    with pytest.raises(ValidationError):
        scan.detect_transitions(rows, "lambda_x")


def test_numerical_crossover_located():
    # at R = 50 the crossover is smooth; with a window wide enough that it is
    # a minority of the points the detector places it within one step of 1
    spec = scan.GridSpec(lambda_x=(0.2, 1.8, 33), lambda_y=(0.0, 0.0, 1), ratio=50.0)
    rows = scan.scan_grid(spec, threads=4)
    rep = scan.detect_transitions(rows, "lambda_x")
    assert rep.orders == ["second"]
    assert abs(rep.points[0].coordinate - 1.0) <= 0.05 + 1e-12
