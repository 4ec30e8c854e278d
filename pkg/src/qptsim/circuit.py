"""Circuit elements to Hamiltonian parameters.

Two topologies: one fluxonium coupled to a cell of a transmission-line
resonator, and two identical fluxoniums sharing that cell.  Effective
capacitances and inductances come from eliminating the Kirchhoff
constraints; the qubit splitting and flux matrix element come from a
numerical solution of the fluxonium Hamiltonian.

Inputs are SI by default.  Passing ``hbar=1`` together with a
dimensionless ``flux_quantum`` gives a unit-free mode in which every
frequency is measured in whatever unit the caller chose for energies.
"""
from dataclasses import dataclass, asdict
import math
import warnings

import numpy as np
import scipy.constants as const

from .errors import ConvergenceError, ValidationError
from .models import ModelParams
from .numerics import eigh

HBAR_SI = const.hbar
FLUX_QUANTUM_SI = const.hbar / (2 * const.e)  # reduced flux quantum hbar / 2e
MAX_FLUXONIUM_BASIS = 2048
FLUXONIUM_RTOL = 1e-8


class TwoLevelWarning(UserWarning):
    """The fluxonium third level is not well separated from the qubit pair."""


@dataclass(frozen=True)
class CircuitElements:
    """Raw element values.  ``phi_ext`` defaults to ``pi * flux_quantum``."""

    C_r: float
    C_q: float
    C_g: float
    L_r: float
    L_1: float
    L_2: float
    E_J: float
    x_i: float
    d: float
    phi_ext: float | None = None
    flux_quantum: float = FLUX_QUANTUM_SI

    def __post_init__(self):
        for name in ("C_r", "C_q", "C_g", "L_r", "L_1", "L_2", "d", "flux_quantum"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive and finite, got {v}",
                                      module="circuit", code="bad_elements")
        if not (math.isfinite(self.E_J) and self.E_J >= 0):
            raise ValidationError(f"E_J must be non-negative, got {self.E_J}",
                                  module="circuit", code="bad_elements")
        if not 0 < self.x_i < self.d:
            raise ValidationError(f"need 0 < x_i < d, got x_i={self.x_i}, d={self.d}",
                                  module="circuit", code="bad_elements")
        if self.phi_ext is not None and not math.isfinite(self.phi_ext):
            raise ValidationError("phi_ext must be finite", module="circuit",
                                  code="bad_elements")

    @property
    def flux_bias(self):
        return math.pi * self.flux_quantum if self.phi_ext is None else self.phi_ext


@dataclass(frozen=True)
class FluxoniumLevels:
    omega_q: float
    phi0_q: float
    anharmonic_ratio: float  # (E2 - E1) / (E1 - E0)
    basis_used: int

    @property
    def two_level_ok(self):
        return self.anharmonic_ratio >= 3.0


@dataclass(frozen=True)
class DerivedCircuitParams:
    """Effective elements and Hamiltonian parameters (frequencies in rad/s, or 1/time unit)."""

    n_qubits: int
    C_sigma2: float
    L_sigma2: float
    C_r_bar: float
    C_q_bar: float
    C_g_bar: float
    L_r_bar: float
    L_q_bar: float
    L_g_bar: float
    Omega_r: float
    k: float
    omega_r: float
    omega_q: float
    phi0_q: float
    g_x: float
    g_y: float
    two_level_ok: bool
    C_qq_bar: float | None = None
    L_qq_bar: float | None = None
    D_x: float | None = None
    D_y: float | None = None

    def as_dict(self):
        return asdict(self)

    def model_params(self):
        """Hamiltonian in the package's model convention.

        The two-qubit circuit gives the bare convention: unit prefactors,
        ``-D_x S_x^2 + D_y S_y^2``.
        """
        if self.n_qubits == 1:
            return ModelParams(self.omega_r, self.omega_q, self.g_x, self.g_y)
        return ModelParams(self.omega_r, self.omega_q, self.g_x, self.g_y, 2,
                           d_x=self.D_x, d_y=self.D_y, sign_x=-1, sign_y=1,
                           resonator_prefactor=1, qubit_prefactor=1)


def matched_inductance(L_1, L_r):
    """``L_2`` for which the inductive qubit-qubit term equals ``g_x'^2 / omega_r'``."""
    if not L_1 > L_r:
        raise ValidationError(f"no positive matched inductance for L_1={L_1} <= L_r={L_r}",
                              module="circuit", code="no_matched_inductance")
    return 2 * L_1 * L_r / (L_1 - L_r)


def fluxonium_matrices(n, ej_over_hw, x_zpf, phase_bias):
    """Fluxonium Hamiltonian (units of hbar*w_ho) and ``a + a^dag`` in the oscillator basis.

    The cosine is built from the eigen-decomposition of the truncated
    position operator, which keeps it exactly symmetric.
    """
    sq = np.sqrt(np.arange(1, n, dtype=float))
    X = np.diag(sq, 1) + np.diag(sq, -1)
    xw, xv = np.linalg.eigh(X)
    cos_op = (xv * np.cos(x_zpf * xw + phase_bias)) @ xv.T
    return np.diag(np.arange(n) + 0.5) - ej_over_hw * cos_op, X


def _fluxonium_once(n, ej_over_hw, x_zpf, phase_bias):
    """Lowest three levels and ``|<0|a + a^dag|1>|`` at basis size ``n``."""
    H, X = fluxonium_matrices(n, ej_over_hw, x_zpf, phase_bias)
    w, v = eigh(H)
    elem = abs(float(np.real(v[:, 0].conj() @ X @ v[:, 1])))
    return w[:3].real, elem


def fluxonium_levels(C_q_bar, L_q_bar, E_J, phi_ext, flux_quantum=FLUX_QUANTUM_SI,
                     hbar=HBAR_SI, basis=32, max_basis=MAX_FLUXONIUM_BASIS):
    """Qubit splitting and flux matrix element of a fluxonium.

    Solves ``Q^2 / 2C + Phi^2 / 2L - E_J cos((Phi + phi_ext) / flux_quantum)``
    in the oscillator basis of the quadratic part, doubling the basis until
    both outputs change by less than 1e-8 relative.

    Returns
    -------
    FluxoniumLevels
        ``omega_q = (E1 - E0) / hbar`` and ``phi0_q = |<E0|Phi|E1>|``.
    """
    if int(basis) != basis or basis < 20:
        raise ValidationError(f"fluxonium basis must be >= 20, got {basis}",
                              module="circuit", code="bad_basis")
    for name, v in (("C_q_bar", C_q_bar), ("L_q_bar", L_q_bar), ("hbar", hbar),
                    ("flux_quantum", flux_quantum)):
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(f"{name} must be positive, got {v}",
                                  module="circuit", code="bad_elements")
    w_ho = 1.0 / math.sqrt(L_q_bar * C_q_bar)
    phi_zpf = math.sqrt(hbar / (2 * C_q_bar * w_ho))
    x_zpf = phi_zpf / flux_quantum
    ej = E_J / (hbar * w_ho)
    bias = phi_ext / flux_quantum
    n = int(basis)
    prev = None
    while n <= max_basis:
        levels, elem = _fluxonium_once(n, ej, x_zpf, bias)
        cur = (levels[1] - levels[0], elem)
        if prev is not None and all(abs(c - p) <= FLUXONIUM_RTOL * abs(c) for c, p in zip(cur, prev)):
            ratio = (levels[2] - levels[1]) / cur[0]
            if ratio < 3.0:
                warnings.warn(f"fluxonium E2-E1 is only {ratio:.3g} times E1-E0; "
                              "the two-level truncation is strained", TwoLevelWarning,
                              stacklevel=2)
            return FluxoniumLevels(float(cur[0] * w_ho), float(cur[1] * phi_zpf), float(ratio), n)
        prev = cur
        n *= 2
    raise ConvergenceError(f"fluxonium levels did not converge up to basis {max_basis}",
                           module="circuit", code="fluxonium_not_converged")


def _mode(el, mode_velocity_scale):
    k = math.pi / el.d
    s2 = math.sin(2 * k * el.x_i)
    if abs(s2) < 1e-12:
        raise ValidationError("degenerate mode coupling position: sin(2 k x_i) = 0",
                              module="circuit", code="degenerate_position")
    Omega_r = mode_velocity_scale * math.pi / (el.d * math.sqrt(el.L_r * el.C_r))
    return k, Omega_r, abs(s2)


def _couplings(el, k, Omega_r, C_r_bar, L_r_bar, C_q_bar, C_g_bar, L_g_bar, omega_q, phi0_q, hbar):
    kx = k * el.x_i
    g_x = (2 * math.sqrt(abs(1 / math.tan(kx))) * math.sin(kx)
           * math.sqrt(Omega_r * el.L_r) / L_g_bar
           * (el.C_r * L_r_bar / (C_r_bar * el.L_r)) ** 0.25 * phi0_q)
    g_y = (2 * math.sqrt(abs(math.tan(kx))) * math.cos(kx)
           * math.sqrt(Omega_r * el.C_r) * C_q_bar / C_g_bar
           * (C_r_bar * el.L_r / (el.C_r * L_r_bar)) ** 0.25 * omega_q * phi0_q)
    # the closed forms carry one factor of sqrt(hbar) from the resonator zero-point amplitude
    return g_x / math.sqrt(hbar), g_y / math.sqrt(hbar)


def derive_one_qubit(elements, fluxonium_basis=32, hbar=HBAR_SI, mode_velocity_scale=1.0):
    """Hamiltonian parameters of the single-fluxonium circuit."""
    el = elements
    Cs2 = el.C_r * el.C_g + el.C_r * el.C_q + el.C_g * el.C_q
    Ls2 = el.L_r * el.L_1 + el.L_r * el.L_2 + el.L_1 * el.L_2
    C_r_bar = Cs2 / (el.C_q + el.C_g)
    L_r_bar = Ls2 / (el.L_1 + el.L_2)
    C_q_bar = Cs2 / (el.C_r + el.C_g)
    L_q_bar = Ls2 / (el.L_1 + el.L_r)
    C_g_bar = Cs2 / el.C_g
    L_g_bar = Ls2 / el.L_1
    k, Omega_r, s2 = _mode(el, mode_velocity_scale)
    omega_r = s2 * Omega_r * math.sqrt(el.C_r * el.L_r / (C_r_bar * L_r_bar))
    fl = fluxonium_levels(C_q_bar, L_q_bar, el.E_J, el.flux_bias, el.flux_quantum, hbar,
                          fluxonium_basis)
    g_x, g_y = _couplings(el, k, Omega_r, C_r_bar, L_r_bar, C_q_bar, C_g_bar, L_g_bar,
                          fl.omega_q, fl.phi0_q, hbar)
    return DerivedCircuitParams(1, Cs2, Ls2, C_r_bar, C_q_bar, C_g_bar, L_r_bar, L_q_bar,
                                L_g_bar, Omega_r, k, omega_r, fl.omega_q, fl.phi0_q, g_x, g_y,
                                fl.two_level_ok)


def derive_two_qubit(elements, fluxonium_basis=32, hbar=HBAR_SI, mode_velocity_scale=1.0):
    """Hamiltonian parameters of the two-fluxonium circuit (primed quantities).

    ``D_x`` and ``D_y`` are the magnitudes of the ``S_x^2`` and ``S_y^2``
    terms; the circuit fixes their signs to ``-D_x`` and ``+D_y``.
    """
    el = elements
    Cs2 = el.C_r * el.C_g + el.C_r * el.C_q + 2 * el.C_g * el.C_q
    Ls2 = 2 * el.L_r * el.L_1 + el.L_r * el.L_2 + el.L_1 * el.L_2
    C_r_bar = Cs2 / (el.C_q + el.C_g)
    L_r_bar = Ls2 / (2 * el.L_1 + el.L_2)
    C_q_bar = Cs2 / (el.C_r + el.C_g * (1 + el.C_q / (el.C_g + el.C_q)))
    L_q_bar = Ls2 / (el.L_1 + el.L_r + el.L_1 * el.L_r / el.L_2)
    C_g_bar = Cs2 / el.C_g
    L_g_bar = Ls2 / el.L_1
    C_qq_bar = Cs2 * (el.C_g + el.C_q) / el.C_g ** 2
    L_qq_bar = Ls2 * el.L_2 / (el.L_1 * el.L_r)
    k, Omega_r, s2 = _mode(el, mode_velocity_scale)
    omega_r = s2 * Omega_r * math.sqrt(el.C_r * el.L_r / (C_r_bar * L_r_bar))
    fl = fluxonium_levels(C_q_bar, L_q_bar, el.E_J, el.flux_bias, el.flux_quantum, hbar,
                          fluxonium_basis)
    g_x, g_y = _couplings(el, k, Omega_r, C_r_bar, L_r_bar, C_q_bar, C_g_bar, L_g_bar,
                          fl.omega_q, fl.phi0_q, hbar)
    # sigma_1 sigma_2 = 2 S^2 - 1 for each axis; the constant is dropped
    D_x = 2 * fl.phi0_q ** 2 / (hbar * L_qq_bar)
    D_y = 2 * (fl.omega_q * C_q_bar * fl.phi0_q) ** 2 / (hbar * C_qq_bar)
    return DerivedCircuitParams(2, Cs2, Ls2, C_r_bar, C_q_bar, C_g_bar, L_r_bar, L_q_bar,
                                L_g_bar, Omega_r, k, omega_r, fl.omega_q, fl.phi0_q, g_x, g_y,
                                fl.two_level_ok, C_qq_bar, L_qq_bar, D_x, D_y)


def reference_elements():
    """Element set used for the regression record (SI units)."""
    d = 1e-2
    return CircuitElements(C_r=1e-12, C_q=5e-15, C_g=1e-15, L_r=2e-9, L_1=1e-10, L_2=4e-9,
                           E_J=1e-22, x_i=d / 4, d=d)
