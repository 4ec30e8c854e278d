"""Exact diagonalisation driver, phase-diagram grids and transition detection."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os

import numpy as np

from . import effective as eff
from .errors import QptsimError, ValidationError
from .models import (LAB_FRAME, MAX_CUTOFF, FrameSpec, ModelParams, build,
                     collective_blocks, converge_cutoff, spin_dim)
from .numerics import eigh
from .operators import block_symmetry_ops, symmetry_ops

MODELS = ("one_qubit", "multi_qubit", "collective")


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    ground_energy: float
    n_G: float
    parity: float
    excitation: float
    gap: float
    cutoff_used: int
    converged: bool
    block_j: float | None = None
    frame_alpha: complex = 0j

    @property
    def excitations(self):
        """Eigenvalues measured from the ground state."""
        return self.eigenvalues - self.ground_energy


def _observables(params, n_cut, frame, j):
    H = build(params, n_cut, frame, j)
    w, v = eigh(H)
    psi = v[:, 0]
    ns = spin_dim(params, j)
    amp = psi.reshape(n_cut, ns)
    alpha = complex(frame.alpha)
    pops = np.sum(np.abs(amp) ** 2, axis=1)
    n_frame = float(np.dot(np.arange(n_cut), pops))
    # <b> in the displaced frame
    b_mean = complex(np.sum(np.conj(amp[:-1]) * amp[1:] * np.sqrt(np.arange(1, n_cut))[:, None]))
    n_lab = n_frame + 2 * (np.conj(alpha) * b_mean).real + abs(alpha) ** 2
    if j is None:
        sym = symmetry_ops(n_cut, params.n_qubits)
    else:
        sym = block_symmetry_ops(n_cut, j, params.n_qubits)
    if alpha != 0:
        parity = math.nan  # the parity operator is not diagonal in a displaced frame
        exc = math.nan
    else:
        parity = float(np.real(np.vdot(psi, np.diag(sym.parity) * psi)))
        exc = float(np.real(np.vdot(psi, np.diag(sym.excitation) * psi)))
    return w, max(n_lab, 0.0), parity, exc


def _block_spectrum(params, n_cut, frame, j, k, tol, max_cut):
    used, _ = converge_cutoff(params, n_cut, frame, j, k=k, tol=tol, max_cut=max_cut)
    w, n_G, parity, exc = _observables(params, used, frame, j)
    return w, n_G, parity, exc, used


def spectrum(params, n_cut=16, frame=LAB_FRAME, j=None, model=None, k=6, tol=1e-8,
             max_cut=MAX_CUTOFF):
    """Converged low-lying spectrum and ground-state observables.

    Parameters
    ----------
    params : ModelParams
    n_cut : int
        Starting Fock cutoff; it is doubled until the lowest ``k`` levels
        move by less than ``tol * omega_r``.
    frame : FrameSpec
        Boson displacement used to build the matrix.  ``n_G`` is always
        reported in the undisplaced frame.
    j : float, optional
        Restrict to one collective-spin block.  With ``model="collective"``
        and ``j=None`` every allowed block is diagonalised and the lowest
        level wins; ``eigenvalues`` then lists each block's levels once,
        ignoring multiplicities.
    """
    if model is None:
        model = "collective" if j is not None else ("one_qubit" if params.n_qubits == 1
                                                    else "multi_qubit")
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}", module="scan", code="bad_model")
    if model != "collective":
        w, n_G, parity, exc, used = _block_spectrum(params, n_cut, frame, None, k, tol, max_cut)
        return SpectrumResult(w, float(w[0]), n_G, parity, exc, float(w[1] - w[0]), used, True,
                              None, complex(frame.alpha))
    blocks = [j] if j is not None else collective_blocks(params.n_qubits)
    results = [(b,) + _block_spectrum(params, n_cut, frame, b, k, tol, max_cut) for b in blocks]
    best = min(results, key=lambda r: r[1][0])
    levels = np.sort(np.concatenate([r[1] for r in results]))
    b, w, n_G, parity, exc, used = best
    return SpectrumResult(levels, float(levels[0]), n_G, parity, exc,
                          float(levels[1] - levels[0]), max(r[5] for r in results), True,
                          b, complex(frame.alpha))


# --- grids ---------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Parameter grid.  Couplings are given either as ``lambda_*`` or as ``g*``.

    Ranges are ``(start, stop, count)`` triples.  For the collective model
    only the x range is used and ``g_y = g_x``.
    """

    model: str = "one_qubit"
    ratio: float = 50.0
    omega_r: float = 1.0
    lambda_x: tuple | None = None
    lambda_y: tuple | None = None
    gx: tuple | None = None
    gy: tuple | None = None
    n_qubits: int = 1
    sign_x: int = 1
    sign_y: int = 1
    resonator_prefactor: int | None = None
    qubit_prefactor: int | None = None
    j: float | None = None
    n_cut: int = 16
    displaced_frame: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValidationError(f"unknown model {self.model!r}", module="scan", code="bad_model")
        by_lambda = self.lambda_x is not None or self.lambda_y is not None
        by_g = self.gx is not None or self.gy is not None
        if by_lambda == by_g:
            raise ValidationError("give either lambda_x/lambda_y or gx/gy ranges",
                                  module="scan", code="bad_grid")
        for rng in (self.lambda_x, self.lambda_y, self.gx, self.gy):
            if rng is None:
                continue
            if len(rng) != 3 or int(rng[2]) != rng[2] or rng[2] < 1:
                raise ValidationError(f"range must be (start, stop, count>=1), got {rng}",
                                      module="scan", code="bad_grid")
            if not (math.isfinite(rng[0]) and math.isfinite(rng[1])):
                raise ValidationError("ranges must be finite", module="scan", code="bad_grid")
        if not self.ratio > 0 or not self.omega_r > 0:
            raise ValidationError("ratio and omega_r must be positive",
                                  module="scan", code="bad_grid")

    @property
    def omega_q(self):
        return self.ratio * self.omega_r

    def _axis(self, rng):
        if rng is None:
            return np.array([0.0])
        start, stop, count = rng
        return np.linspace(start, stop, int(count))

    def points(self):
        """``(g_x, g_y)`` pairs in row-major order (x outer, y inner)."""
        s = math.sqrt(self.omega_r * self.omega_q)
        if self.lambda_x is not None or self.lambda_y is not None:
            xs, ys = self._axis(self.lambda_x) * s, self._axis(self.lambda_y) * s
        else:
            xs, ys = self._axis(self.gx), self._axis(self.gy)
        if self.model == "collective":
            return [(float(x), float(x)) for x in xs]
        return [(float(x), float(y)) for x in xs for y in ys]

    def params_at(self, g_x, g_y):
        N = self.n_qubits if self.model != "one_qubit" else 1
        if self.model == "one_qubit":
            return ModelParams(self.omega_r, self.omega_q, g_x, g_y)
        pr = self.resonator_prefactor or 3
        pq = self.qubit_prefactor or 2
        return ModelParams(self.omega_r, self.omega_q, g_x, g_y, N,
                           d_x=g_x ** 2 / self.omega_r, d_y=g_y ** 2 / self.omega_r,
                           sign_x=self.sign_x, sign_y=self.sign_y,
                           resonator_prefactor=pr, qubit_prefactor=pq)


@dataclass(frozen=True)
class GridRow:
    gx: float
    gy: float
    lambda_x: float
    lambda_y: float
    ground_energy: float
    gap: float
    n_G: float
    parity: float
    analytic_phase: str
    analytic_gap: float
    error: str | None = field(default=None, compare=False)


CSV_COLUMNS = ("gx", "gy", "lambda_x", "lambda_y", "ground_energy", "gap", "n_G", "parity",
               "analytic_phase", "analytic_gap")


def _analytic(spec, c):
    """Analytic phase label and gap for one grid point (``nan`` when no closed form exists)."""
    if spec.model == "one_qubit":
        return str(eff.classify_phase(c)), _num(eff.analytic_gap(c))
    N = spec.n_qubits
    symmetric = abs(c.lambda_x - c.lambda_y) <= 1e-12
    pr = spec.resonator_prefactor or 3
    pq = spec.qubit_prefactor or 2
    conventional = (spec.sign_x, spec.sign_y, pr, pq) == (1, 1, 3, 2)
    if not conventional:
        return "", math.nan
    if spec.model == "multi_qubit" and N == 2 and not symmetric:
        gap = eff.two_qubit_gap(c.lambda_x, c.lambda_y, spec.omega_r)
        return ("Normal" if gap.stable else "Unstable"), _num(gap.value)
    if symmetric:
        gap = eff.n_qubit_gap(c.lambda_x, N, spec.omega_r)
        if gap.value is not None and abs(gap.value) <= 1e-12:
            label = eff.PhaseLabel.CRITICAL
        elif gap.value > 0:
            label = eff.PhaseLabel.NORMAL
        else:
            label = eff.PhaseLabel.U1_LINE
        return str(label), _num(gap.value)
    return "", math.nan


def _num(x):
    return math.nan if x is None else float(x)


def evaluate_point(spec, g_x, g_y):
    params = spec.params_at(g_x, g_y)
    c = eff.Couplings(abs(g_x) / math.sqrt(spec.omega_r * spec.omega_q),
                      abs(g_y) / math.sqrt(spec.omega_r * spec.omega_q),
                      spec.ratio, spec.omega_r)
    phase, agap = _analytic(spec, c)
    frame = LAB_FRAME
    if spec.displaced_frame and spec.model == "one_qubit":
        label = eff.classify_phase(c)
        if label in (eff.PhaseLabel.SUPERRADIANT_X, eff.PhaseLabel.SUPERRADIANT_Y):
            frame = FrameSpec(eff.superradiant_frame(c).alpha)
    try:
        res = spectrum(params, spec.n_cut, frame, j=spec.j, model=spec.model)
    except QptsimError as exc:
        return GridRow(g_x, g_y, c.lambda_x, c.lambda_y, math.nan, math.nan, math.nan, math.nan,
                       phase, agap, error=f"{exc.tag()}: {exc}")
    return GridRow(g_x, g_y, c.lambda_x, c.lambda_y, res.ground_energy, res.gap, res.n_G,
                   res.parity, phase, agap)


def resolve_threads(threads=0):
    """Worker count: explicit value, else ``QPTSIM_THREADS``, else the CPU count."""
    if not threads:
        threads = int(os.environ.get("QPTSIM_THREADS", "0") or 0)
    if not threads:
        threads = os.cpu_count() or 1
    return max(int(threads), 1)


def scan_grid(spec, threads=1):
    """Evaluate every grid point; rows come back in grid order regardless of ``threads``.

    Failed points are kept as rows with ``nan`` observables and ``error`` set.
    """
    pts = spec.points()
    if threads <= 1 or len(pts) == 1:
        return [evaluate_point(spec, gx, gy) for gx, gy in pts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: evaluate_point(spec, *p), pts))


def analytic_rows(lambdas, ratio=50.0, omega_r=1.0):
    """Rows whose energies come from the closed-form branch formulas, one per ``(lx, ly)``."""
    rows = []
    s = math.sqrt(omega_r * ratio * omega_r)
    for lx, ly in lambdas:
        c = eff.Couplings(float(lx), float(ly), ratio, omega_r)
        gs = eff.ground_state(c)
        rows.append(GridRow(lx * s, ly * s, float(lx), float(ly), gs.epsilon_G,
                            _num(eff.analytic_gap(c)), gs.n_G, math.nan,
                            str(gs.phase), _num(eff.analytic_gap(c))))
    return rows


def format_float(x):
    """Shortest round-trip decimal representation."""
    if isinstance(x, str):
        return x
    return repr(float(x))


def rows_to_csv(rows):
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(format_float(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


# --- transitions ---------------------------------------------------------------

@dataclass(frozen=True)
class TransitionPoint:
    index: int
    coordinate: float
    order: str  # "first" or "second"
    strength: float
    first_derivative_jump: float


@dataclass(frozen=True)
class TransitionReport:
    axis: str
    points: list

    @property
    def orders(self):
        return [p.order for p in self.points]


AXES = ("gx", "gy", "lambda_x", "lambda_y", "arclength")


def _coordinates(rows, axis):
    if axis == "arclength":
        xy = np.array([[r.lambda_x, r.lambda_y] for r in rows])
        steps = np.hypot(*np.diff(xy, axis=0).T)
        return np.concatenate([[0.0], np.cumsum(steps)])
    if axis not in AXES:
        raise ValidationError(f"unknown axis {axis!r}", module="scan", code="bad_axis")
    return np.array([getattr(r, axis) for r in rows], dtype=float)


def _robust_threshold(values):
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    return med + 5 * (q3 - q1)


def detect_transitions(rows, axis="lambda_x", jump_factor=10.0, window=5):
    """Locate non-analytic points of the ground energy along a line of rows.

    The statistic is the change of the finite-difference second derivative
    between neighbouring points, which spikes at a jump of the second
    derivative (second order) as well as at a kink (first order).  Points
    above ``median + 5 IQR`` form clusters; each cluster is reported once,
    at its centre, and called first order when the first derivative jumps
    there by more than ``jump_factor`` times its typical change on either
    side.
    """
    if len(rows) < 5:
        raise ValidationError(f"need at least 5 points along the axis, got {len(rows)}",
                              module="scan", code="too_few_points")
    x = _coordinates(rows, axis)
    E = np.array([r.ground_energy for r in rows], dtype=float)
    steps = np.diff(x)
    h = float(np.mean(steps))
    if not h > 0 or np.max(np.abs(steps - h)) > 1e-6 * abs(h):
        raise ValidationError("rows must be uniformly spaced and increasing along the axis",
                              module="scan", code="nonuniform_axis")
    d1 = np.diff(E) / h                       # at midpoints, len n-1
    d2 = (E[:-2] - 2 * E[1:-1] + E[2:]) / h**2  # at interior points 1..n-2
    stat = np.abs(np.diff(d2))                # between interior points, len n-3
    floor = 1e-6 * max(float(np.max(np.abs(d2))), 1e-300)
    thresh = max(_robust_threshold(stat), floor)
    flagged = np.flatnonzero(stat > thresh)
    points = []
    if flagged.size:
        clusters = np.split(flagged, np.flatnonzero(np.diff(flagged) > 1) + 1)
        dd1 = np.abs(np.diff(d1))  # change of first derivative at interior point i+1
        for cl in clusters:
            # stat[k] sits between interior points k+1 and k+2
            lo, hi = cl[0] + 1, cl[-1] + 2
            centre = int(round(0.5 * (lo + hi)))
            seg = dd1[lo - 1:hi]
            peak = lo + int(np.argmax(seg))
            left = dd1[max(lo - 1 - window, 0):lo - 1]
            right = dd1[hi:hi + window]
            typical = max(np.median(left) if left.size else 0.0,
                          np.median(right) if right.size else 0.0)
            jump = float(np.max(seg))
            order = "first" if jump > jump_factor * typical else "second"
            idx = peak if order == "first" else centre
            points.append(TransitionPoint(idx, float(x[idx]), order,
                                          float(np.max(stat[cl])), jump / h))
    return TransitionReport(axis, points)
