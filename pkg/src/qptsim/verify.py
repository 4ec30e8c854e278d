"""Named self-checks: the acceptance criteria plus the per-module invariants.

Each check returns ``(passed, detail)``.  The runner adds wall time and,
for acceptance checks, compares it with the allowed budget.
"""
from dataclasses import dataclass
import math
import time
import warnings

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import circuit, effective as eff, scan, swt
from .models import FrameSpec, ModelParams, build, collective_blocks
from .numerics import (commutator, eigvalsh, kron, max_norm, random_hermitian,
                       random_unitary)
from .operators import (angular_momentum_block, allowed_spin_numbers, spin_multiplicity,
                        spins, symmetry_ops, block_symmetry_ops)


@dataclass(frozen=True)
class CheckResult:
    name: str
    kind: str
    passed: bool
    detail: str
    seconds: float
    budget: float | None = None


@dataclass(frozen=True)
class _Check:
    name: str
    kind: str
    func: object
    budget: float | None
    summary: str


REGISTRY: dict[str, _Check] = {}


def _register(name, kind="invariant", budget=None, summary=""):
    def deco(func):
        REGISTRY[name] = _Check(name, kind, func, budget, summary)
        return func
    return deco


def run_check(name, seed=0):
    chk = REGISTRY[name]
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", circuit.TwoLevelWarning)
        ok, detail = chk.func(rng)
    dt = time.perf_counter() - t0
    if chk.budget is not None and dt > chk.budget:
        ok, detail = False, f"{detail}; runtime {dt:.2f} s over budget {chk.budget} s"
    return CheckResult(name, chk.kind, bool(ok), detail, dt, chk.budget)


def run_all(seed=0, kinds=None):
    return [run_check(n, seed) for n, c in REGISTRY.items() if kinds is None or c.kind in kinds]


def format_result(r):
    status = "PASS" if r.passed else "FAIL"
    return f"{status} {r.name} ({r.seconds:.2f} s): {r.detail}"


# --- shared helpers ------------------------------------------------------------

def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _models_for_symmetry():
    """Representative lab-frame models of every builder and convention."""
    out = [("one_qubit", ModelParams.one_qubit(0.7, 0.3, 5.0), None, 12),
           ("jc", ModelParams.one_qubit(0.6, 0.6, 5.0), None, 12)]
    for N in (2, 3, 4):
        out.append((f"corrected_N{N}", ModelParams.qubit_qubit(0.9, 0.4, 5.0, n_qubits=N), None, 8))
        out.append((f"bare_N{N}", ModelParams.qubit_qubit(0.9, 0.4, 5.0, n_qubits=N,
                                                          signs=(-1, 1), prefactors=(1, 1)), None, 8))
    for N in (3, 6):
        for j in collective_blocks(N):
            out.append((f"block_N{N}_j{j}", ModelParams.qubit_qubit(1.1, 0.8, 5.0, n_qubits=N), j, 8))
    return out


def _sym(params, n_cut, j):
    if j is None:
        return symmetry_ops(n_cut, params.n_qubits)
    return block_symmetry_ops(n_cut, j, params.n_qubits)


def analytic_energy_rows(points, ratio=50.0):
    """GridRows whose ground energy is the analytic branch formula."""
    return scan.analytic_rows(points, ratio=ratio)


# --- acceptance criteria -------------------------------------------------------

@_register("AC1_normal_phase_gap", "acceptance", 10.0,
           "one-qubit gap vs sqrt((1-lx^2)(1-ly^2)) at R=200")
def ac1(rng):
    worst = 0.0
    for lx in (0.3, 0.5, 0.7):
        for ly in (0.3, 0.5, 0.7):
            res = scan.spectrum(ModelParams.one_qubit(lx, ly, 200.0))
            ref = math.sqrt((1 - lx ** 2) * (1 - ly ** 2))
            worst = max(worst, _rel(res.gap, ref))
    return worst < 0.02, f"max relative gap error {worst:.3e} (limit 2e-2)"


@_register("AC2_superradiant_order_parameter", "acceptance", 5.0,
           "n_G at lx=1.5, R=50 vs |alpha|^2; n_G small at lx<=0.9")
def ac2(rng):
    target = eff.displacement_squared(1.5, 50.0)
    res = scan.spectrum(ModelParams.one_qubit(1.5, 0.0, 50.0))
    err = _rel(res.n_G, target)
    small = [scan.spectrum(ModelParams.one_qubit(lx, 0.0, 50.0)).n_G for lx in (0.3, 0.6, 0.9)]
    ok = err < 0.05 and abs(target - 22.569) < 1e-3 and max(small) < 0.5
    return ok, (f"n_G={res.n_G:.4f} vs {target:.4f} (rel {err:.2e}, limit 5e-2); "
                f"max n_G at lx<=0.9: {max(small):.3f}")


@_register("AC3_goldstone_softening", "acceptance", 30.0,
           "gap at lx=ly=1.3 strictly decreasing in R; analytic eps~ = 0")
def ac3(rng):
    gaps = [scan.spectrum(ModelParams.one_qubit(1.3, 1.3, R)).gap for R in (20.0, 50.0, 100.0)]
    eps = eff.superradiant_frame(eff.Couplings(1.3, 1.3, 50.0)).epsilon_tilde
    ok = gaps[0] > gaps[1] > gaps[2] and eps == 0.0
    return ok, f"gaps {', '.join(f'{g:.4g}' for g in gaps)}; eps~ = {eps}"


@_register("AC4_transition_orders", "acceptance", 1.0,
           "detector on analytic ground energies: second order at 1, first order on the diagonal")
def ac4(rng):
    lam = np.linspace(0.5, 1.5, 101)
    rows = analytic_energy_rows([(x, 0.0) for x in lam])
    rep = scan.detect_transitions(rows, "lambda_x")
    step = lam[1] - lam[0]
    ok1 = (len(rep.points) == 1 and rep.points[0].order == "second"
           and abs(rep.points[0].coordinate - 1.0) <= step + 1e-12)
    # ray lx + ly = 2.6 crossing the diagonal at 1.3
    lx = np.linspace(0.9, 1.7, 81)
    rows = analytic_energy_rows([(x, 2.6 - x) for x in lx])
    rep2 = scan.detect_transitions(rows, "lambda_x")
    step2 = lx[1] - lx[0]
    ok2 = (len(rep2.points) == 1 and rep2.points[0].order == "first"
           and abs(rep2.points[0].coordinate - 1.3) <= step2 + 1e-12)
    return ok1 and ok2, (f"axis: {[(round(p.coordinate, 4), p.order) for p in rep.points]}; "
                         f"ray: {[(round(p.coordinate, 4), p.order) for p in rep2.points]}")


@_register("AC5_two_qubit_inhibition", "acceptance", 60.0,
           "two-qubit effective gap positive on [0,3]^2; no macroscopic n_G at (2.5, 2.5)")
def ac5(rng):
    grid = np.linspace(0.0, 3.0, 40)
    bad = skipped = 0
    for lx in grid:
        for ly in grid:
            g = eff.two_qubit_gap(lx, ly)
            if g.boundary:
                skipped += 1
                continue
            if not (g.stable and g.value is not None and g.value > 0):
                bad += 1
    res = scan.spectrum(ModelParams.qubit_qubit(2.5, 2.5, 50.0))
    return bad == 0 and res.n_G < 5, (f"{bad} non-positive gaps ({skipped} boundary points "
                                      f"skipped); n_G(2.5, 2.5) = {res.n_G:.3g}")


def _h3(lx, ly, omega_q=1.0):
    s = spins(2)
    return (2 * omega_q * s.Sz + lx ** 2 * omega_q * s.Sx @ s.Sx
            + ly ** 2 * omega_q * s.Sy @ s.Sy)


@_register("AC6_two_qubit_levels", "acceptance", 1.0,
           "{0, L1, L2, L1+L2} vs the 4x4 qubit Hamiltonian")
def ac6(rng):
    worst = 0.0
    for lx, ly in rng.uniform(0.0, 3.0, size=(100, 2)):
        w = np.sort(eigvalsh(_h3(lx, ly)))
        lv = eff.two_qubit_levels(lx, ly)
        ref = np.sort([0.0, lv.Lambda_1, lv.Lambda_2, lv.Lambda_1 + lv.Lambda_2])
        worst = max(worst, float(np.max(np.abs((w - w[0]) - ref))))
    return worst < 1e-10, f"max level error {worst:.2e} (limit 1e-10)"


def growth_factor(n_start, n_end, floor=0.01):
    """Occupation growth with a floor of ``floor`` photons, so 0 -> 0 counts as 1x."""
    return (n_end + floor) / (n_start + floor)


@_register("AC7_n_parity_effect", "acceptance", 120.0,
           "odd-N gap closes at sqrt(6); N=3 n_G grows >10x over [2.2, 2.7], N=2 <2x")
def ac7(rng):
    r6 = math.sqrt(6.0)
    g3 = eff.n_qubit_gap(r6, 3).value
    even = [eff.n_qubit_gap(lam, N).value for N in (2, 4) for lam in (1.5, r6, 2.5)]
    ok_an = abs(g3) < 1e-12 and all(abs(v - 3.0) < 1e-12 for v in even)
    growth = {}
    for N in (2, 3):
        n = [scan.spectrum(ModelParams.qubit_qubit(lam, lam, 50.0, n_qubits=N),
                           model="collective").n_G for lam in (2.2, 2.7)]
        growth[N] = (n, growth_factor(*n))
    ok = ok_an and growth[3][1] > 10 and growth[2][1] < 2
    return ok, (f"gap(N=3, sqrt 6) = {g3:.1e}; even-N gaps {sorted(set(round(v, 12) for v in even))}; "
                f"N=3 n_G {growth[3][0][0]:.3g} -> {growth[3][0][1]:.3g} (x{growth[3][1]:.3g}); "
                f"N=2 n_G {growth[2][0][0]:.3g} -> {growth[2][0][1]:.3g} (x{growth[2][1]:.3g})")


def _model_splits():
    yield "one_qubit", swt.one_qubit_split(ModelParams.one_qubit(0.3, 0.1, 20.0), 10)
    yield "two_qubit", swt.qubit_hamiltonian_split(ModelParams.qubit_qubit(0.5, 0.3, 20.0), 8)
    yield "three_qubit", swt.qubit_hamiltonian_split(
        ModelParams.qubit_qubit(0.5, 0.3, 20.0, n_qubits=3), 6)
    p = ModelParams.qubit_qubit(0.8, 0.8, 20.0, n_qubits=4)
    for j in collective_blocks(4):
        if j > 0:
            yield f"block_j{j}", swt.collective_split(p, j, 8)
            yield f"block_j{j}_static", swt.collective_split(p, j, 8, include_resonator=False)


def one_qubit_heff_error(lx, ly, ratio, n_cut=12):
    """Relative max-norm distance between the numerical and closed-form effective Hamiltonians."""
    p = ModelParams.one_qubit(lx, ly, ratio)
    H = swt.sw_effective(swt.one_qubit_split(p, n_cut)).H_eff
    q = eff.normal_effective(eff.couplings(p))
    ref = swt.quadratic_form_matrix(q.A, q.B, q.C0, n_cut)
    return max_norm(H - ref) / max_norm(ref)


def ab_generator_error(N, lam=0.8, ratio=50.0, n_cut=5):
    """Largest deviation of static-limit generator elements from the a/b closed forms."""
    p = ModelParams.qubit_qubit(lam, lam, ratio, n_qubits=N)
    worst = 0.0
    for j in collective_blocks(N):
        dim = int(round(2 * j + 1))
        if dim == 1:
            continue
        for low in range(dim):
            m = -j + low
            S = swt.sw_generator(swt.collective_split(p, j, n_cut, low_m=[m],
                                                      include_resonator=False)).S1
            a, b = swt.closed_form_generator_elements(p, j, m)
            for n in range(n_cut - 1):
                if low + 1 < dim and n >= 1:
                    worst = max(worst, abs(S[(n - 1) * dim + low + 1, n * dim + low] - a * math.sqrt(n)))
                if low >= 1:
                    worst = max(worst, abs(S[(n + 1) * dim + low - 1, n * dim + low] - b * math.sqrt(n + 1)))
    return worst


@_register("AC8_sw_engine", "acceptance", 10.0,
           "SW residuals, one-qubit effective Hamiltonian, collective generator elements")
def ac8(rng):
    worst_res = 0.0
    for _, split in _model_splits():
        res = swt.sw_generator(split)
        worst_res = max(worst_res, res.residual / max_norm(split.V))
    heff = one_qubit_heff_error(0.1, 0.05, 1e4)
    ab = max(ab_generator_error(N) for N in (2, 3, 4, 5))
    ok = worst_res <= 1e-9 and heff < 1e-3 and ab < 1e-10
    return ok, (f"max relative residual {worst_res:.1e}; H_eff relative error {heff:.1e}; "
                f"a/b element error {ab:.1e}")


@_register("AC9_circuit_formulas", "acceptance", 5.0,
           "matched inductance, decoupling limits, harmonic fluxonium")
def ac9(rng):
    from dataclasses import replace
    ref = circuit.reference_elements()
    el = replace(ref, L_1=3e-9, L_2=circuit.matched_inductance(3e-9, 2e-9))
    p = circuit.derive_two_qubit(el)
    dx = _rel(p.D_x, p.g_x ** 2 / p.omega_r)
    base = circuit.derive_one_qubit(ref)
    gy = abs(circuit.derive_one_qubit(replace(ref, C_g=ref.C_g * 1e-14)).g_y) / abs(base.g_y)
    gx = abs(circuit.derive_one_qubit(replace(ref, L_1=ref.L_1 * 1e-14)).g_x) / abs(base.g_x)
    fl = circuit.fluxonium_levels(2.0, 0.5, 0.0, math.pi, flux_quantum=1.0, hbar=1.0)
    ho = _rel(fl.omega_q, 1 / math.sqrt(2.0 * 0.5))
    ok = dx < 1e-10 and gy < 1e-12 and gx < 1e-12 and ho < 1e-10
    return ok, (f"D_x vs g_x'^2/w_r' {dx:.1e}; g_y ratio {gy:.1e}; g_x ratio {gx:.1e}; "
                f"harmonic w_q error {ho:.1e}")


@_register("AC10_symmetry_suite", "acceptance", 5.0,
           "parity commutes with every model; U(1) only for JC and the corrected collective model")
def ac10(rng):
    worst = 0.0
    for _, p, j, n_cut in _models_for_symmetry():
        H = build(p, n_cut, j=j)
        worst = max(worst, max_norm(commutator(H, _sym(p, n_cut, j).parity)) / max_norm(H))
    u1 = []
    for label, p, n_cut in (
            ("jc", ModelParams.one_qubit(0.8, 0.8, 5.0), 12),
            ("corrected", ModelParams.qubit_qubit(0.8, 0.8, 5.0), 8),
            ("bare", ModelParams.qubit_qubit(0.8, 0.8, 5.0, signs=(-1, 1), prefactors=(1, 1)), 8)):
        H = build(p, n_cut)
        u1.append(max_norm(commutator(H, symmetry_ops(n_cut, p.n_qubits).excitation)) / max_norm(H))
    ok = worst <= 1e-12 and u1[0] <= 1e-12 and u1[1] <= 1e-12 and u1[2] > 1e-6
    return ok, (f"max parity commutator {worst:.1e}; [H, N] for JC {u1[0]:.1e}, "
                f"corrected {u1[1]:.1e}, bare {u1[2]:.2e}")


# --- numerics and operators --------------------------------------------------------

@_register("numerics_trace_and_unitary_invariance")
def inv_numerics(rng):
    worst_tr = worst_u = 0.0
    for n in (1, 2, 7, 64, 512):
        H = random_hermitian(n, rng)
        w = eigvalsh(H)
        worst_tr = max(worst_tr, abs(w.sum() - np.trace(H).real) / max_norm(H))
        if n <= 64:
            U = random_unitary(n, rng)
            worst_u = max(worst_u, float(np.max(np.abs(eigvalsh(U @ H @ U.conj().T) - w))))
    kron_ok = all(kron(np.ones((a, b)), np.ones((c, d))).shape == (a * c, b * d)
                  for a in (1, 2, 3) for b in (1, 4) for c in (2, 5) for d in (1, 3))
    return worst_tr < 1e-9 and worst_u < 1e-9 and kron_ok, (
        f"trace {worst_tr:.1e}, unitary {worst_u:.1e}, kron shapes {kron_ok}")


@_register("operators_multiplicities_and_blocks")
def inv_operators(rng):
    ok = True
    detail = []
    for N in (1, 2, 3, 4):
        s = spins(N)
        S2 = eigvalsh(s.S2)
        total = sum((2 * j + 1) * spin_multiplicity(N, j) for j in allowed_spin_numbers(N))
        counts = {j: int(np.sum(np.abs(S2 - j * (j + 1)) < 1e-9)) // int(2 * j + 1)
                  for j in allowed_spin_numbers(N)}
        ok &= total == 2 ** N and all(counts[j] == spin_multiplicity(N, j) for j in counts)
        Wq, D = 1.0, 1.7
        full = np.sort(eigvalsh(2 * Wq * s.Sz + D * (s.S2 - s.Sz @ s.Sz)))
        parts = []
        for j in allowed_spin_numbers(N):
            b = angular_momentum_block(j)
            e = eigvalsh(2 * Wq * b.Jz + D * (b.J2 * np.eye(b.dim) - b.Jz @ b.Jz))
            parts.extend(list(e) * spin_multiplicity(N, j))
        ok &= bool(np.allclose(full, np.sort(parts), atol=1e-10))
        sym = symmetry_ops(3, N)
        ok &= bool(np.allclose(np.exp(1j * np.pi * np.diag(sym.excitation)), np.diag(sym.parity)))
        detail.append(f"N={N}: sum {total}")
    return ok, "; ".join(detail)


# --- models ---------------------------------------------------------------------

@_register("models_frame_covariance_and_hermiticity")
def inv_models(rng):
    p = ModelParams.one_qubit(0.6, 0.2, 4.0)
    alpha = 0.8 + 0.3j
    n_cut = 40
    assert abs(alpha) ** 2 + 6 * abs(alpha) < n_cut / 2
    shifted = eigvalsh(build(p, n_cut, FrameSpec(alpha)))[:6]
    plain = eigvalsh(build(p, n_cut + math.ceil(4 * abs(alpha) ** 2)))[:6]
    cov = float(np.max(np.abs(shifted - plain)))
    herm = 0.0
    for _, q, j, nc in _models_for_symmetry():
        H = build(q, nc, j=j)
        herm = max(herm, max_norm(H - H.conj().T))
    return cov < 1e-6 and herm == 0.0, f"frame covariance {cov:.1e}; hermiticity defect {herm:.1e}"


# --- effective ------------------------------------------------------------------

@_register("effective_bogoliubov_grid")
def inv_bogoliubov(rng):
    worst = 0.0
    for lx in np.linspace(0, 2, 50):
        for ly in np.linspace(0, 2, 50):
            c = eff.Couplings(lx, ly, 10.0)
            b = eff.bogoliubov(eff.normal_effective(c), c)
            if b.epsilon is None:
                continue
            worst = max(worst, abs(b.epsilon ** 2 - (1 - lx ** 2) * (1 - ly ** 2)))
    return worst < 1e-12, f"max |eps^2 - (1-lx^2)(1-ly^2)| = {worst:.1e}"


@_register("effective_mirror_and_continuity")
def inv_mirror(rng):
    ok = True
    for lx, ly in ((1.4, 0.5), (2.0, 1.2), (1.1, 0.0)):
        a = eff.superradiant_frame(eff.Couplings(lx, ly, 30.0))
        b = eff.superradiant_frame(eff.Couplings(ly, lx, 30.0))
        ok &= abs(b.alpha - 1j * a.alpha) < 1e-12 and abs(a.epsilon_tilde - b.epsilon_tilde) < 1e-12
        ga = eff.ground_state(eff.Couplings(lx, ly, 30.0))
        gb = eff.ground_state(eff.Couplings(ly, lx, 30.0))
        ok &= abs(ga.epsilon_G - gb.epsilon_G) < 1e-12 and abs(ga.n_G - gb.n_G) < 1e-12
    jump1 = abs(eff.ground_energy(eff.Couplings(1 + 1e-13, 0.3, 30.0))
                - eff.ground_energy(eff.Couplings(1 - 1e-13, 0.3, 30.0)))
    jump2 = abs(eff.ground_energy(eff.Couplings(1.5, 1.5 - 1e-14, 30.0))
                - eff.ground_energy(eff.Couplings(1.5 - 1e-14, 1.5, 30.0)))
    # one-sided slopes across the diagonal at lambda = 1.5 along (1, -1)
    h = 1e-6
    e = lambda lx, ly: eff.ground_energy(eff.Couplings(lx, ly, 30.0))
    left = (e(1.5, 1.5) - e(1.5 - h, 1.5 + h)) / h
    right = (e(1.5 + h, 1.5 - h) - e(1.5, 1.5)) / h
    kink = 30.0 / 2 * (1.5 - 1.5 ** -3)
    ok &= jump1 < 1e-10 and jump2 < 1e-10 and abs((right - left) / 2 + kink) < 1e-4 * kink
    return ok, f"jumps {jump1:.1e}, {jump2:.1e}; slopes {left:.4f} / {right:.4f}"


@_register("effective_qubit_ground_label")
def inv_ground_label(rng):
    bad = []
    for N in range(1, 9):
        for ratio in (0.5, 1.9, 2.1, 5.0):
            best = None
            for j in allowed_spin_numbers(N):
                b = angular_momentum_block(j)
                e = np.real(np.diag(2 * b.Jz + ratio * (b.J2 * np.eye(b.dim) - b.Jz @ b.Jz)))
                k = int(np.argmin(e))
                if best is None or e[k] < best[0] - 1e-12:
                    best = (e[k], j, b.m_values[k])
            if eff.qubit_ground_label(N, ratio, 1.0) != (best[1], best[2]):
                bad.append((N, ratio))
    return not bad, f"mismatches: {bad}"


@_register("effective_two_qubit_gap_positive")
def inv_two_qubit_gap(rng):
    grid = np.linspace(0.0, 3.0, 40)
    vals = [eff.two_qubit_gap(x, y) for x in grid for y in grid]
    bad = [g for g in vals if not g.boundary and not (g.stable and g.value > 0)]
    return not bad, f"{len(bad)} non-positive of {len(vals)}"


@_register("effective_n_qubit_gap_continuity")
def inv_n_gap(rng):
    """Odd N is continuous at lambda^2 = 2; even N jumps from 2 to 3 (recorded, not asserted away)."""
    lo, hi = math.sqrt(2) * (1 - 1e-9), math.sqrt(2) * (1 + 1e-9)
    odd = [abs(eff.n_qubit_gap(hi, N).value - eff.n_qubit_gap(lo, N).value) for N in (1, 3, 5, 7)]
    even = [eff.n_qubit_gap(hi, N).value - eff.n_qubit_gap(lo, N).value for N in (2, 4)]
    ok = max(odd) < 1e-6 and all(abs(d - 1.0) < 1e-6 for d in even)
    return ok, f"odd-N jumps {max(odd):.1e}; even-N jumps {even}"


# --- swt ------------------------------------------------------------------------

@_register("swt_frame_change_and_perturbation_theory")
def inv_swt(rng):
    worst = 0.0
    for _, split in _model_splits():
        S1 = swt.sw_generator(split).S1
        H = split.H0 + split.V + (split.V_diag if split.V_diag is not None else 0)
        worst = max(worst, float(np.max(np.abs(eigvalsh(swt.transformed(split, S1)) - eigvalsh(H)))))
    # rank-one P: second-order shift of an isolated level
    n = 12
    E = np.sort(rng.uniform(1, 5, n))
    E[0] = 0.0
    H0 = np.diag(E).astype(complex)
    V = np.zeros((n, n), dtype=complex)
    V[0, 1:] = 0.05 * (rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
    V = V + V.conj().T
    W = np.eye(n, dtype=complex)[:, :1]
    heff = swt.sw_effective(swt.make_split(W, H0, V)).H_eff[0, 0].real
    pt = float(np.sum(np.abs(V[0, 1:]) ** 2 / (E[0] - E[1:])))
    return worst < 1e-9 and abs(heff - pt) < 1e-10, (
        f"spectrum change under exp(S1) {worst:.1e}; rank-one PT error {abs(heff - pt):.1e}")


@_register("swt_second_order_scaling")
def inv_sw_scaling(rng):
    errs = [one_qubit_heff_error(0.2 * f, 0.1 * f, 1e4) for f in (1, 0.5, 0.25)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    return min(ratios) >= 2, f"errors {['%.2e' % e for e in errs]}, halving ratios {['%.2f' % r for r in ratios]}"


# --- circuit --------------------------------------------------------------------

def fluxonium_grid_oracle(C, L, E_J, phi_ext, flux_quantum=1.0, hbar=1.0, points=6001, width=12.0):
    """Finite-difference position-grid solution: ``(E1 - E0) / hbar`` and ``|<0|Phi|1>|``."""
    w_ho = 1 / math.sqrt(L * C)
    zpf = math.sqrt(hbar / (2 * C * w_ho))
    x = np.linspace(-width * zpf, width * zpf, points)
    h = x[1] - x[0]
    kin = hbar ** 2 / (2 * C * h * h)
    diag = 2 * kin + x ** 2 / (2 * L) - E_J * np.cos((x + phi_ext) / flux_quantum)
    w, v = eigh_tridiagonal(diag, -kin * np.ones(points - 1), select="i", select_range=(0, 1))
    return (w[1] - w[0]) / hbar, abs(float(np.sum(v[:, 0] * x * v[:, 1])))


@_register("circuit_invariants")
def inv_circuit(rng):
    from dataclasses import replace
    ref = circuit.reference_elements()
    s = 3.7
    scaled = replace(ref, C_r=ref.C_r * s, C_q=ref.C_q * s, C_g=ref.C_g * s,
                     L_r=ref.L_r / s, L_1=ref.L_1 / s, L_2=ref.L_2 / s)
    a, b = circuit.derive_one_qubit(ref), circuit.derive_one_qubit(scaled)
    dim = _rel(b.Omega_r * math.sqrt(scaled.L_r * scaled.C_r), a.Omega_r * math.sqrt(ref.L_r * ref.C_r))
    perm = replace(ref, C_r=ref.C_q, C_q=ref.C_g, C_g=ref.C_r, L_r=ref.L_2, L_1=ref.L_r, L_2=ref.L_1)
    p = circuit.derive_one_qubit(perm)
    exch = max(_rel(p.C_sigma2, a.C_sigma2), _rel(p.L_sigma2, a.L_sigma2))
    perm2 = replace(ref, C_q=ref.C_g, C_g=ref.C_q, L_1=ref.L_r, L_r=ref.L_1)
    a2, p2 = circuit.derive_two_qubit(ref), circuit.derive_two_qubit(perm2)
    exch = max(exch, _rel(p2.C_sigma2, a2.C_sigma2), _rel(p2.L_sigma2, a2.L_sigma2))
    ej = np.linspace(2.0, 6.0, 9)
    wq = [circuit.fluxonium_levels(1.0, 1.0, e, math.pi, 1.0, 1.0).omega_q for e in ej]
    mono = bool(np.all(np.diff(wq) < 0))
    fl = circuit.fluxonium_levels(1.0, 1.0, 2.0, math.pi, 1.0, 1.0)
    o_w, o_phi = fluxonium_grid_oracle(1.0, 1.0, 2.0, math.pi)
    grid = max(_rel(fl.omega_q, o_w), _rel(fl.phi0_q, o_phi))
    ok = dim < 1e-12 and exch < 1e-14 and mono and grid < 1e-5
    return ok, (f"scaling {dim:.1e}; exchange {exch:.1e}; monotone in E_J {mono}; "
                f"grid oracle {grid:.1e}")


# --- scan -----------------------------------------------------------------------

@_register("scan_parity_and_determinism")
def inv_scan(rng):
    par = [scan.spectrum(ModelParams.one_qubit(lx, ly, 20.0)).parity
           for lx, ly in ((0.2, 0.1), (0.5, 0.7), (0.8, 0.3))]
    par_ok = all(abs(abs(p) - 1) < 1e-8 for p in par)
    spec = scan.GridSpec(lambda_x=(0.0, 1.5, 3), lambda_y=(0.0, 1.5, 3), ratio=20.0)
    a = scan.rows_to_csv(scan.scan_grid(spec, threads=1))
    b = scan.rows_to_csv(scan.scan_grid(spec, threads=1))
    c = scan.rows_to_csv(scan.scan_grid(spec, threads=4))
    return par_ok and a == b == c, f"parities {par}; csv identical across runs/threads {a == b == c}"
