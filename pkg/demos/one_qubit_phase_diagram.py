# %%
import numpy as np

from qptsim import effective as eff
from qptsim import scan
from qptsim.models import ModelParams

# %%
# # One qubit, large frequency ratio
#
# At ratio 50 the closed-form theory should track exact diagonalisation.
# Sweep lambda_x with lambda_y = 0.

ratio = 50.0
lams = np.linspace(0.2, 1.6, 8)
for lam in lams:
    c = eff.Couplings(lam, 0.0, ratio)
    gs = eff.ground_state(c)
    num = scan.spectrum(ModelParams.one_qubit(lam, 0.0, ratio), n_cut=24)
    print(f"lambda_x={lam:.2f}  phase={gs.phase!s:18s}  "
          f"gap analytic={eff.analytic_gap(c):.4f} numeric={num.gap:.4f}  "
          f"n_G analytic={gs.n_G:.3f} numeric={num.n_G:.3f}")

# %%
# Past the transition the exact lowest pair is a parity doublet, so the
# numeric gap closes while the analytic one is the excitation above the
# doublet.  The photon number is the order parameter.  Deep in the ordered phase the
# cutoff grows until the lowest levels stop moving.

deep = scan.spectrum(ModelParams.one_qubit(1.5, 0.0, ratio), n_cut=32)
print("cutoff used", deep.cutoff_used, "converged", deep.converged, "n_G", deep.n_G)

# %%
# # Transition detection on a grid
#
# Second derivative jumps mark continuous transitions; first derivative jumps
# mark level crossings.  The analytic rows are cheap so a fine grid is fine.

rows = scan.analytic_rows([(x, 0.3) for x in np.linspace(0.2, 1.8, 161)], ratio=ratio, omega_r=1.0)
report = scan.detect_transitions(rows, axis="lambda_x")
for p in report.points:
    print(f"{p.order:6s} transition near lambda = {p.coordinate:.3f}")
