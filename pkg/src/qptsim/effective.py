"""Closed-form low-energy theories.

Covers the dimensionless couplings, the quadratic boson Hamiltonians of the
normal and displaced (superradiant) frames, their Bogoliubov spectra,
ground-state energy and photon number per phase, the two-qubit fermionic
levels and effective gap, and the N-qubit collective gap.

Energies carry the unit of ``omega_r`` (``Omega_r`` for the N-qubit model)
and ``omega_q = ratio * omega_r``.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

from .errors import DegeneracyError, ValidationError

BOUNDARY_TOL = 1e-12


class PhaseLabel(str, Enum):
    NORMAL = "Normal"
    SUPERRADIANT_X = "SuperradiantX"
    SUPERRADIANT_Y = "SuperradiantY"
    U1_LINE = "U1Line"
    CRITICAL = "Critical"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Couplings:
    lambda_x: float
    lambda_y: float
    ratio: float
    omega_r: float = 1.0

    def __post_init__(self):
        if self.lambda_x < 0 or self.lambda_y < 0:
            raise ValidationError("couplings must be non-negative",
                                  module="effective", code="bad_couplings")
        if not self.ratio > 0 or not self.omega_r > 0:
            raise ValidationError("frequencies must be positive",
                                  module="effective", code="bad_couplings")

    @property
    def omega_q(self):
        return self.ratio * self.omega_r

    @property
    def lam(self):
        """Common coupling of the symmetric (``g_x = g_y``) case."""
        return self.lambda_x


@dataclass(frozen=True)
class QuadraticBosonForm:
    """``A b^dag b + B (b^2 + b^dag^2) + C0``."""

    A: float
    B: float
    C0: float = 0.0


@dataclass(frozen=True)
class BogoliubovResult:
    epsilon: float | None
    r: float | None
    eta: int
    stable: bool
    critical: bool = False


@dataclass(frozen=True)
class SuperradiantFrame:
    alpha: complex
    omega_q_tilde: float
    lambda_x_tilde: float
    lambda_y_tilde: float
    epsilon_tilde: float
    r_tilde: float | None
    branch: str  # "X", "Y" or "U1"

    @property
    def n_photons(self):
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class GroundStateInfo:
    epsilon_G: float
    n_G: float
    phase: PhaseLabel


@dataclass(frozen=True)
class TwoQubitLevels:
    Lambda_1: float
    Lambda_2: float
    xi_1: float
    xi_2: float
    w: float
    regime: str
    b_coeffs: dict = field(default_factory=dict)
    boundary: bool = False


@dataclass(frozen=True)
class EffectiveGap:
    value: float | None
    formula_branch: str
    stable: bool = True
    boundary: bool = False


def couplings(params):
    """Dimensionless couplings ``lambda_k = g_k / sqrt(omega_r omega_q)`` of a model."""
    s = math.sqrt(params.omega_r * params.omega_q)
    return Couplings(abs(params.g_x) / s, abs(params.g_y) / s,
                     params.omega_q / params.omega_r, params.omega_r)


def normal_effective(c):
    """Quadratic form of the spin-down projected Hamiltonian.

    Expanding ``w_r b^dag b - w_r lx^2/4 (b + b^dag)^2 + w_r ly^2/4 (b - b^dag)^2
    - w_q/2`` gives ``A = w_r (1 - (lx^2 + ly^2)/2)``,
    ``B = w_r (ly^2 - lx^2)/4`` and ``C0 = -w_r (lx^2 + ly^2)/4 - w_q/2``.
    """
    lx2, ly2 = c.lambda_x ** 2, c.lambda_y ** 2
    wr = c.omega_r
    return QuadraticBosonForm(A=wr * (1 - 0.5 * (lx2 + ly2)),
                              B=wr * (ly2 - lx2) / 4,
                              C0=-wr * (lx2 + ly2) / 4 - 0.5 * c.omega_q)


def bogoliubov(q, eta_rule=None):
    """Diagonalise ``A b^dag b + B (b^2 + b^dag^2)`` as ``epsilon c^dag c + const``.

    Parameters
    ----------
    q : QuadraticBosonForm
    eta_rule : Couplings, optional
        When given, the branch sign follows ``eta = +1`` for
        ``lx^2 + ly^2 < 2`` and ``-1`` above.  Otherwise ``eta = sign(A)``,
        which is the same rule on forms produced by :func:`normal_effective`.

    Returns
    -------
    BogoliubovResult
        ``epsilon = eta * sqrt(A^2 - 4 B^2)`` when real.  The squeezing is
        ``r = (1/4) ln((A - 2B) / (A + 2B))``; the ground state then has
        ``Var(b + b^dag) = exp(2 r)``.  Forms with ``A^2 < 4 B^2`` come back
        with ``stable=False`` and ``epsilon=None``.
    """
    A, B = q.A, q.B
    if eta_rule is not None:
        eta = 1 if eta_rule.lambda_x ** 2 + eta_rule.lambda_y ** 2 < 2 else -1
    else:
        eta = 1 if A >= 0 else -1
    disc = A * A - 4 * B * B
    plus, minus = A + 2 * B, A - 2 * B
    scale = max(abs(A), abs(B), 1e-300)
    critical = abs(plus) <= BOUNDARY_TOL * scale or abs(minus) <= BOUNDARY_TOL * scale
    if disc < 0 and not critical:
        return BogoliubovResult(None, None, eta, stable=False)
    eps = eta * math.sqrt(max(disc, 0.0))
    r = None if critical else 0.25 * math.log(minus / plus)
    return BogoliubovResult(eps, r, eta, stable=True, critical=critical)


def classify_phase(c, tol=BOUNDARY_TOL):
    """Phase of the single-qubit model at ``(lambda_x, lambda_y)``."""
    lx, ly = c.lambda_x, c.lambda_y
    top = max(lx, ly)
    if top < 1 - tol:
        return PhaseLabel.NORMAL
    if abs(top - 1) <= tol:
        return PhaseLabel.CRITICAL
    if abs(lx - ly) <= tol:
        return PhaseLabel.U1_LINE
    return PhaseLabel.SUPERRADIANT_X if lx > ly else PhaseLabel.SUPERRADIANT_Y


def displacement_squared(lam, ratio):
    """``|alpha|^2 = (ratio / 4) (lam^2 - 1 / lam^2)``."""
    return 0.25 * ratio * (lam * lam - 1.0 / (lam * lam))


def superradiant_frame(c):
    """Displaced-frame description of the superradiant phases.

    The displacement is real on the X branch, imaginary on the Y branch and
    has a free phase on the U(1) line, where ``theta = 0`` is reported.
    """
    lx, ly = c.lambda_x, c.lambda_y
    if max(lx, ly) <= 1:
        raise ValidationError(
            f"not in superradiant region: lambda = ({lx}, {ly})",
            module="effective", code="not_superradiant")
    phase = classify_phase(c)
    if phase is PhaseLabel.U1_LINE:
        lam = max(lx, ly)
        mag = math.sqrt(displacement_squared(lam, c.ratio))
        return SuperradiantFrame(complex(mag, 0.0), c.omega_q * lam ** 2,
                                 1.0 / lam ** 2, 1.0, 0.0, None, "U1")
    if phase is PhaseLabel.SUPERRADIANT_X:
        mag = math.sqrt(displacement_squared(lx, c.ratio))
        alpha = complex(mag, 0.0)
        wq_t, lxt, lyt, branch = c.omega_q * lx ** 2, 1.0 / lx ** 2, ly / lx, "X"
    else:
        mag = math.sqrt(displacement_squared(ly, c.ratio))
        alpha = complex(0.0, mag)
        wq_t, lxt, lyt, branch = c.omega_q * ly ** 2, lx / ly, 1.0 / ly ** 2, "Y"
    prod = (1 - lxt ** 2) * (1 - lyt ** 2)
    eps = c.omega_r * math.sqrt(max(prod, 0.0))
    num, den = 1 - lyt ** 2, 1 - lxt ** 2
    r = 0.25 * math.log(num / den) if num > 0 and den > 0 else None
    return SuperradiantFrame(alpha, wq_t, lxt, lyt, eps, r, branch)


def ground_energy(c):
    """Branch formula for the ground-state energy (continuous across all boundaries)."""
    phase = classify_phase(c)
    if phase in (PhaseLabel.NORMAL, PhaseLabel.CRITICAL):
        return -0.5 * c.omega_q
    lam = max(c.lambda_x, c.lambda_y)
    return -0.25 * c.omega_q * (lam ** 2 + 1.0 / lam ** 2)


def ground_state(c):
    phase = classify_phase(c)
    if phase in (PhaseLabel.NORMAL, PhaseLabel.CRITICAL):
        return GroundStateInfo(-0.5 * c.omega_q, 0.0, phase)
    lam = max(c.lambda_x, c.lambda_y)
    return GroundStateInfo(ground_energy(c), displacement_squared(lam, c.ratio), phase)


def analytic_gap(c):
    """Lowest excitation energy predicted by the effective theory of the current phase."""
    phase = classify_phase(c)
    if phase is PhaseLabel.CRITICAL:
        return 0.0
    if phase is PhaseLabel.NORMAL:
        return bogoliubov(normal_effective(c), c).epsilon
    return superradiant_frame(c).epsilon_tilde


# --- two qubits ---------------------------------------------------------------

def _b_table(regime, xi1, xi2):
    if regime == "smallX":
        return dict(bx1=xi1, bx2=-xi1, by3=xi1, bx3=xi2, by1=xi2, by2=-xi2)
    if regime == "smallY":
        return dict(bx1=-xi2, bx2=xi2, by3=-xi2, bx3=-xi1, by1=-xi1, by2=xi1)
    if regime == "largeX":
        return dict(bx1=0.0, by1=0.0, bx2=xi1, by3=xi1, bx3=-xi2, by2=xi2)
    return dict(bx1=0.0, by1=0.0, bx2=-xi2, by3=xi2, bx3=-xi1, by2=xi1)


def two_qubit_levels(lambda_x_p, lambda_y_p, omega_q=1.0):
    """Fermionic levels of ``2 w_q S_z + D_x S_x^2 + D_y S_y^2`` with ``D_k = lambda_k^2 w_q``.

    The spectrum is ``{0, Lambda_1, Lambda_2, Lambda_1 + Lambda_2}`` above the
    ground state.  Ties ``lx = ly`` use the X tables; on the curve
    ``lx^2 ly^2 = 4`` both regimes give the same levels and ``boundary`` is set.
    """
    if lambda_x_p < 0 or lambda_y_p < 0:
        raise ValidationError("couplings must be non-negative",
                              module="effective", code="bad_couplings")
    lx2, ly2 = lambda_x_p ** 2, lambda_y_p ** 2
    s, d = lx2 + ly2, lx2 - ly2
    w = math.sqrt(d * d + 16)
    xi1 = math.sqrt(1 + 4 / w) - math.sqrt(max(1 - 4 / w, 0.0))
    xi2 = math.sqrt(1 + 4 / w) + math.sqrt(max(1 - 4 / w, 0.0))
    prod = lx2 * ly2
    boundary = abs(prod - 4) <= BOUNDARY_TOL * 4
    large = prod > 4 and not boundary
    side = "X" if lx2 >= ly2 else "Y"
    regime = ("large" if large else "small") + side
    L1 = 0.5 * omega_q * (s + w)
    L2 = 0.5 * omega_q * (s - w if large else w - s)
    return TwoQubitLevels(L1, L2, xi1, xi2, w, regime, _b_table(regime, xi1, xi2), boundary)


def two_qubit_gap(lambda_x_p, lambda_y_p, omega_r=1.0):
    """Effective resonator gap of the sign-corrected two-qubit model.

    The result does not depend on ``omega_q``: with ``D_k = lambda_k^2 omega_q``
    and ``Lambda_1`` proportional to ``omega_q`` the ratio cancels.
    """
    lv = two_qubit_levels(lambda_x_p, lambda_y_p, omega_q=1.0)
    if lv.regime.startswith("large"):
        return EffectiveGap(3 * omega_r, "large", True, lv.boundary)
    dx, dy = lambda_x_p ** 2, lambda_y_p ** 2
    if lv.regime == "smallX":
        fx, fy = lv.xi_1 ** 2, lv.xi_2 ** 2
    else:
        fx, fy = lv.xi_2 ** 2, lv.xi_1 ** 2
    prod = (1 - dx * fx / (3 * lv.Lambda_1)) * (1 - dy * fy / (3 * lv.Lambda_1))
    if prod < 0:
        return EffectiveGap(None, lv.regime, False, lv.boundary)
    return EffectiveGap(3 * omega_r * math.sqrt(prod), lv.regime, True, lv.boundary)


# --- N qubits -----------------------------------------------------------------

def n_qubit_gap(lam, n_qubits, Omega_r=1.0):
    """Effective resonator frequency of the N-qubit collective model.

    A negative value signals the instability of the normal phase; it is
    returned as-is with ``stable=False``.
    """
    N = int(n_qubits)
    if N < 1:
        raise ValidationError("n_qubits must be >= 1", module="effective", code="bad_qubit_count")
    l2 = lam * lam
    boundary = abs(l2 - 2) <= BOUNDARY_TOL * 2
    if l2 < 2 or boundary:
        val = 3 * Omega_r * (1 - N * l2 / (3 * ((N - 1) * l2 + 2)))
        branch = "below"
    elif N % 2 == 0:
        val, branch = 3 * Omega_r, "above_even"
    else:
        val, branch = 3 * Omega_r * (1 - l2 / 6), "above_odd"
    return EffectiveGap(val, branch, val >= 0, boundary)


def qubit_ground_label(n_qubits, D, Omega_q):
    """``(j, m_z)`` of the lowest eigenstate of ``2 Omega_q J_z + D (J^2 - J_z^2)``.

    Raises
    ------
    DegeneracyError
        At the level crossing ``D = 2 Omega_q``, where the answer is degenerate.
    """
    if not Omega_q > 0 or D < 0:
        raise ValidationError("need Omega_q > 0 and D >= 0", module="effective", code="bad_params")
    N = int(n_qubits)
    if abs(D - 2 * Omega_q) <= BOUNDARY_TOL * Omega_q:
        raise DegeneracyError("D = 2 Omega_q is a level crossing; ground label is degenerate",
                              module="effective", code="degenerate_label")
    if D < 2 * Omega_q:
        return N / 2, -N / 2
    return (0.0, 0.0) if N % 2 == 0 else (0.5, -0.5)
