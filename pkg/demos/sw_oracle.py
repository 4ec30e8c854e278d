# %%
import numpy as np

from qptsim import swt, verify
from qptsim.models import ModelParams

# %%
# # Numerical block diagonalisation versus the closed form
#
# The qubit is projected out to second order.  The relative error should
# fall by four each time the couplings halve.

for g in (0.4, 0.2, 0.1, 0.05):
    err = verify.one_qubit_heff_error(g, 0.5 * g, ratio=50.0)
    print(f"lambda_x={g:.3f}  relative error {err:.3e}")

# %%
# The generator of the multi-qubit model has two nonzero element families.
# Their closed forms hold to rounding in the static limit.

for n in (2, 3, 4):
    print(f"N={n}: worst element error {verify.ab_generator_error(n):.2e}")

# %%
# After the rotation the leftover coupling between the blocks is third order
# in the couplings, so it shrinks by eight when the couplings halve.

for g in (0.1, 0.05):
    split = swt.one_qubit_split(ModelParams.one_qubit(g, 0.5 * g, 50.0), 10)
    res = swt.sw_generator(split)
    Ht = swt.transformed(split, res.S1)
    P = split.P
    leak = np.abs(P @ Ht @ (np.eye(split.dim) - P)).max()
    print(f"lambda_x={g:.3f}  generator residual {res.residual:.1e}  block leak {leak:.3e}")
